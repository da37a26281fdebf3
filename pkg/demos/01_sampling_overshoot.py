"""How far can a bandlimited signal rise above its own samples?

We sample f(t) = cos(pi (t - 1/(2L))) at rate L times Nyquist.  The samples
straddle the peak symmetrically, so they all sit below the true maximum.
The ratio sup|f| / max|samples| matches the cosine bound exactly.
"""

import math

import numpy as np

from overshoot import c1_cos_bound, c1_sqrt_bound, extremal_check

print(" L   extremal ratio   cosine bound   sqrt bound")
for L in (2, 3, 4, 8, 16):
    rep = extremal_check(L)
    print(f"{L:2d}   {rep.ratio:14.10f}   {c1_cos_bound(L).value:12.10f}"
          f"   {c1_sqrt_bound(L).value:10.8f}")

# the same thing by brute force on a fine grid
L = 3
t = np.linspace(-1, 1, 200_001)
f = lambda t: np.cos(np.pi * (t - 1 / (2 * L)))
samples = f(np.arange(-3 * L, 3 * L + 1) / L)
print("\nbrute force at L = 3:", np.max(np.abs(f(t))) / np.max(np.abs(samples)),
      "vs", 1 / math.cos(math.pi / (2 * L)))
