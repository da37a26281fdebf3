"""Lower bounds that meet the upper bounds.

For trigonometric polynomials of degree N sampled at N1 points, a random
search and an exact linear program give lower bounds on the worst-case
overshoot.  At integer rates the LP hits the cosine bound.  At fractional
rates it lands on the trapezoid operator norm (5/3 at 3/2, 1.8478 at 4/3).
"""

from overshoot import c1_cos_bound, lp_c1_trig, monte_carlo_lower_bound

print(" N  N1   monte carlo   LP          cosine bound")
for N, N1 in [(1, 4), (2, 6), (3, 8), (4, 12)]:
    mc = monte_carlo_lower_bound(N, N1, trials=2000, seed=0)
    lp = lp_c1_trig(N, N1, t_grid=128)
    L = N1 / (2 * N)
    print(f"{N:2d}  {N1:2d}   {mc.ratio:.8f}    {lp.value:.8f}  "
          f"{c1_cos_bound(L).value:.8f}")

lp = lp_c1_trig(2, 6, t_grid=128)
print("\nLP witness at (2, 6):", lp.witness.to_dict())
