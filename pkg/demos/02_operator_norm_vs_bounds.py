"""Closed-form bounds against the numerically exact interpolation norm.

Reconstructing from samples with a trapezoid kernel has a finite operator
norm once the sampling rate exceeds Nyquist.  That norm is the best
possible overshoot for that kernel, so each analytic bound should sit on
or above it.
"""

from overshoot import KernelSpec, RationalRate, c2_new_bound, c2_sota_bound, operator_norm

print("  L    leps   opnorm      c2_new(period)  c2_sota")
for n, m in [(1, 1), (2, 1), (3, 1), (1, "1/2"), (2, "1/2"), (2, 2)]:
    rate = RationalRate(n, m)
    k = KernelSpec.trapezoid(float(rate.leps))
    op = operator_norm(k, float(rate.L))
    new = c2_new_bound(rate, window="period")
    print(f"{float(rate.L):5.3f}  {float(rate.leps):5.3f}  {op.value:.8f}  "
          f"{new.value:.8f}      {c2_sota_bound(float(rate.leps)).value:.8f}")

# the sinc kernel has no finite norm; the error carries the growth estimate
try:
    operator_norm(KernelSpec.sinc(), 1)
except Exception as exc:
    print("\nsinc:", exc)
