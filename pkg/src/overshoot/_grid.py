"""Certified maximization of a one-dimensional function on an interval."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar


@dataclass(frozen=True)
class GridMax:
    value: float      # best value found (grid maximum, possibly polished)
    t_star: float
    cert_error: float  # true max <= grid maximum + cert_error
    grid_value: float
    step: float       # effective grid spacing


def grid_maximize(f, a, b, step, *, lipschitz=None, curvature=None,
                  chunk=1 << 14, polish=True, reverse=False):
    """Maximize a vectorized ``f`` over [a, b] on a uniform grid.

    The grid contains both end points, so every point of [a, b] lies within
    ``h/2`` of a node.  Two certificates are available:

    * ``lipschitz``: |f'| <= lipschitz gives ``lipschitz * h / 2``;
    * ``curvature``: for sums of absolute values of smooth functions the
      maximizer is either an end point (a node) or a point where the signed
      sum has zero slope, so ``curvature * h**2 / 8`` bounds the loss, with
      ``curvature`` a bound on the second derivative of that signed sum.

    The smaller of the supplied certificates is reported.  ``reverse`` only
    changes the evaluation order; ties resolve to the lowest node index.
    """
    if not b >= a:
        raise ValueError("need b >= a")
    if not step > 0:
        raise ValueError("step must be positive")
    K = max(2, math.ceil((b - a) / step) + 1)
    h = (b - a) / (K - 1)
    values = np.empty(K)
    starts = range(0, K, chunk)
    if reverse:
        starts = reversed(list(starts))
    for s in starts:
        idx = np.arange(s, min(s + chunk, K))
        values[idx] = f(a + idx * h)
    i = int(np.argmax(values))
    grid_value = float(values[i])
    t_star = a + i * h

    certs = []
    if lipschitz is not None:
        certs.append(lipschitz * h / 2)
    if curvature is not None:
        certs.append(curvature * h * h / 8)
    cert = min(certs) if certs else float("nan")

    value = grid_value
    if polish and h > 0:
        # refine every cell whose node is a local max within reach of the best
        cand = [j for j in range(K)
                if values[j] >= grid_value - (cert if math.isfinite(cert) else 0.0)
                and (j == 0 or values[j] >= values[j - 1])
                and (j == K - 1 or values[j] >= values[j + 1])]
        for j in cand[:16]:
            lo, hi = a + max(j - 1, 0) * h, a + min(j + 1, K - 1) * h
            res = minimize_scalar(lambda x: -float(f(np.array([x]))[0]),
                                  bounds=(lo, hi), method="bounded",
                                  options={"xatol": 1e-13 * max(1.0, abs(lo))})
            v = -float(res.fun)
            if v > value:
                value, t_star = v, float(res.x)
    return GridMax(value=value, t_star=float(t_star), cert_error=cert,
                   grid_value=grid_value, step=h)
