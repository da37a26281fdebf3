"""Dense tableau simplex for small LPs of the form max c.x, A x <= b, x >= 0, b >= 0."""

from dataclasses import dataclass

import numpy as np

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPSolution:
    status: str
    value: float
    x: np.ndarray
    pivots: int


def simplex_max(c, A, b, tol=1e-11, max_pivots=100_000):
    """Maximize ``c @ x`` subject to ``A @ x <= b``, ``x >= 0`` with ``b >= 0``.

    The slack basis is feasible because ``b >= 0``, so no phase one is
    needed.  Entering and leaving variables follow Bland's rule, which
    rules out cycling.
    """
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if np.any(b < 0):
        raise ValueError("right-hand side must be nonnegative")
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = -c
    basis = list(range(n, n + m))

    pivots = 0
    while True:
        entering = np.flatnonzero(T[m, :-1] < -tol)
        if entering.size == 0:
            break
        j = int(entering[0])
        col = T[:m, j]
        pos = col > tol
        if not np.any(pos):
            return LPSolution(UNBOUNDED, float("inf"), np.full(n, np.nan), pivots)
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / col[pos]
        rmin = ratios.min()
        ties = np.flatnonzero(ratios <= rmin + tol * max(1.0, abs(rmin)))
        i = min(ties, key=lambda r: basis[r])
        T[i] /= T[i, j]
        others = np.arange(m + 1) != i
        T[others] -= np.outer(T[others, j], T[i])
        basis[i] = j
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("simplex pivot limit reached")

    x = np.zeros(n + m)
    x[basis] = T[:m, -1]
    return LPSolution(OPTIMAL, float(T[m, -1]), x[:n], pivots)
