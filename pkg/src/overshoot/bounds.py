"""Overshoot bounds between samples.

Closed-form bounds in the oversampling factor ``L`` (or in the bandwidth
expansion ``leps``), the Dirichlet-sum bound for rational rates
``L = (n+m)/n``, ``leps = (n+1)/n``, and its combinations for Nyquist and
layered filters.  All values are independent of the bandwidth ``B``; time is
normalized so that ``B = pi`` and the sampling period is ``1/L``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._grid import grid_maximize
from .errors import DomainError, ParameterError
from .kernels import LayeredFilter, as_fraction

__all__ = [
    "RationalRate",
    "BoundResult",
    "METHODS",
    "c1_cos_bound",
    "c1_sqrt_bound",
    "c2_sota_bound",
    "c2_asymptotic",
    "dirichlet_abs",
    "dirichlet_objective",
    "corollary_objective",
    "c2_new_bound",
    "c1_corollary_bound",
    "nyquist_overshoot_bound",
    "layered_overshoot_bound",
    "best_upper_bound",
]

METHODS = ("c1_cos", "c1_sqrt", "c2_sota", "c2_new", "c1_corollary",
           "nyquist", "layered", "asymptotic", "opnorm")

# default certificate target for the grid maximizations
CERT_TARGET = 0.9e-9

WINDOWS = ("printed", "period")


def _parse_m(m) -> Fraction:
    if isinstance(m, str):
        m = Fraction(m.strip())
    fr = as_fraction(m, max_denominator=2)
    if fr is None or not (fr == Fraction(1, 2) or (fr.denominator == 1 and fr >= 1)):
        raise ParameterError(f"m must be a positive integer or 1/2, got {m!r}")
    return fr


@dataclass(frozen=True)
class RationalRate:
    """Oversampling ``L = (n+m)/n`` with expansion ``leps = (n+1)/n``."""

    n: int
    m: Fraction

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ParameterError("n must be a positive integer")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "m", _parse_m(self.m))

    @property
    def L(self) -> Fraction:
        return (self.n + self.m) / self.n

    @property
    def leps(self) -> Fraction:
        return Fraction(self.n + 1, self.n)

    @property
    def terms(self) -> int:
        """Number of Dirichlet terms, 2(n+m); an integer also for m = 1/2."""
        return 2 * self.n + int(2 * self.m)

    @classmethod
    def from_L(cls, L, n_max=64) -> "RationalRate | None":
        """Smallest-n representation of ``L`` with m in {1/2, 1, 2, ...}."""
        x = float(L) - 1.0
        if not x > 0:
            return None
        for n in range(1, n_max + 1):
            two_m = 2 * n * x
            r = round(two_m)
            if abs(two_m - r) < 1e-9 * max(1.0, two_m) and (r == 1 or (r >= 2 and r % 2 == 0)):
                return cls(n, Fraction(r, 2))
        return None

    def __str__(self):
        return f"(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class BoundResult:
    """A bound value with its provenance.

    ``cert_error`` bounds how far the true maximum of a numerically
    maximized objective can exceed ``value``; it is zero for closed forms.
    """

    value: float
    method: str
    t_star: float | None = None
    cert_error: float = 0.0
    details: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")

    def to_dict(self) -> dict:
        return {"method": self.method, "value": self.value,
                "t_star": self.t_star, "cert_error": self.cert_error}


def _check_L(L):
    if not L > 1:
        raise DomainError(f"oversampling factor must satisfy L > 1 (C1(1) is infinite), got L={L}")
    return float(L)


def _check_leps(leps):
    if not leps > 1:
        raise DomainError(f"expansion factor must satisfy leps > 1, got leps={leps}")
    return float(leps)


def c1_cos_bound(L) -> BoundResult:
    """1/cos(pi/(2L)); exact peak constant for integer L (peak at t = 1/(2L))."""
    L = _check_L(L)
    fr = as_fraction(L)
    t_star = 1.0 / (2 * L) if fr is not None and fr.denominator == 1 else None
    return BoundResult(1.0 / math.cos(math.pi / (2 * L)), "c1_cos", t_star)


def c1_sqrt_bound(L) -> BoundResult:
    """sqrt(L/(L-1)): the trapezoid bound with expansion pushed to 2L-1."""
    L = _check_L(L)
    return BoundResult(math.sqrt(L / (L - 1)), "c1_sqrt")


def c2_sota_bound(leps) -> BoundResult:
    """sqrt((leps+1)/(leps-1))."""
    leps = _check_leps(leps)
    return BoundResult(math.sqrt((leps + 1) / (leps - 1)), "c2_sota")


def c2_asymptotic(leps) -> BoundResult:
    """(2/pi) log(2 leps/(leps-1)): leading term only, unknown O(1) offset.

    Diagnostic; never combined with the certified bounds.
    """
    leps = _check_leps(leps)
    v = (2 / math.pi) * math.log(2 * leps / (leps - 1))
    return BoundResult(v, "asymptotic", details={"offset": "O(1), unknown"})


def dirichlet_abs(n, theta):
    """|D_n(theta)| from the closed form sin((n+1/2)theta)/sin(theta/2)."""
    th = np.remainder(np.asarray(theta, dtype=float) + math.pi, 2 * math.pi) - math.pi
    small = np.abs(th) < 1e-6
    safe = np.where(small, 1.0, th)
    closed = np.sin((n + 0.5) * safe) / np.sin(0.5 * safe)
    taylor = (2 * n + 1) * (1.0 - n * (n + 1) * th * th / 6.0)
    return np.abs(np.where(small, taylor, closed))


def _rate_objective(n, terms):
    angles = [math.pi * (2 * l) / terms for l in range(terms)]

    def phi(t):
        t = np.asarray(t, dtype=float)
        base = math.pi * t / n
        acc = np.zeros_like(base)
        for ang in angles:
            acc += dirichlet_abs(n, base - ang)
        return acc / terms

    return phi


def dirichlet_objective(rate: RationalRate, t):
    """phi(t) = (1/2(n+m)) sum_l |D_n(pi t/n - l pi/(n+m))|."""
    return _rate_objective(rate.n, rate.terms)(t)


def corollary_objective(n, t):
    """(1/(n+1)) sum_{l=0}^{n} |D_{n/2}(2 pi t/n - 2 l pi/(n+1))| for even n."""
    h = n // 2
    t = np.asarray(t, dtype=float)
    acc = np.zeros_like(t)
    for l in range(n + 1):
        acc += dirichlet_abs(h, 2 * math.pi * t / n - math.pi * (2 * l) / (n + 1))
    return acc / (n + 1)


def _certified_step(curvature, target):
    return math.sqrt(8 * target / curvature)


def _dirichlet_max(f, deg, scale, half_width, step, reverse=False):
    # |d/dt D_deg(scale t)| <= scale * sum|k|, |d2/dt2| <= scale^2 * sum k^2
    lip = scale * deg * (deg + 1)
    curv = scale**2 * deg * (deg + 1) * (2 * deg + 1) / 3
    if step is None:
        step = _certified_step(curv, CERT_TARGET)
    if not step > 0:
        raise ParameterError("step must be positive")
    # objective is even in t; maximize over [0, half_width]
    g = grid_maximize(f, 0.0, half_width, step, lipschitz=lip, curvature=curv,
                      chunk=max(256, 2_000_000 // (2 * deg + 2)), reverse=reverse)
    return g


def c2_new_bound(rate: RationalRate, step=None, window="printed", reverse=False) -> BoundResult:
    """Dirichlet-sum bound for ``L = (n+m)/n`` and ``leps = (n+1)/n``.

    ``window="printed"`` maximizes over |t| <= n/(2(n+1)); ``"period"`` over
    one full sampling period |t| <= n/(2(n+m)).  The two agree for integer
    m; for m = 1/2 the printed window is strictly shorter than a period and
    can miss the maximum.  ``step=None`` picks a grid with cert_error < 1e-9.
    """
    if window not in WINDOWS:
        raise ParameterError(f"window must be one of {WINDOWS}")
    n = rate.n
    half = n / (2 * (n + 1)) if window == "printed" else n / rate.terms
    g = _dirichlet_max(_rate_objective(n, rate.terms), n, math.pi / n, half, step, reverse)
    return BoundResult(g.value, "c2_new", abs(g.t_star), g.cert_error,
                       details={"n": n, "m": str(rate.m), "L": float(rate.L),
                                "leps": float(rate.leps), "window": window,
                                "step": g.step})


def c1_corollary_bound(n, step=None, reverse=False) -> BoundResult:
    """Bound on C1((n+1)/n) for even n via the half-integer Dirichlet sum.

    The window |t| <= n/(2(n+1)) is exactly one sampling period here.
    """
    if isinstance(n, bool) or int(n) != n or n < 2 or n % 2:
        raise ParameterError(f"corollary bound needs an even n >= 2, got {n}")
    n = int(n)
    g = _dirichlet_max(lambda t: corollary_objective(n, t), n // 2, 2 * math.pi / n,
                       n / (2 * (n + 1)), step, reverse)
    return BoundResult(g.value, "c1_corollary", abs(g.t_star), g.cert_error,
                       details={"n": n, "L": (n + 1) / n, "step": g.step})


def nyquist_overshoot_bound(rate: RationalRate, step=None, window="printed") -> BoundResult:
    """min{sqrt(2n+1), Dirichlet-sum bound}; data assumed bounded by one."""
    root = math.sqrt(2 * rate.n + 1)
    new = c2_new_bound(rate, step, window)
    if new.value < root:
        return BoundResult(new.value, "nyquist", new.t_star, new.cert_error,
                           details={"branch": "c2_new", "sqrt": root, "c2_new": new.value})
    return BoundResult(root, "nyquist", None, 0.0,
                       details={"branch": "sqrt", "sqrt": root, "c2_new": new.value})


def _layer_bound(leps, L, step, window):
    fr = as_fraction(leps)
    if fr is not None and fr.numerator == fr.denominator + 1:
        n = fr.denominator
        m2 = 2 * n * (float(L) - 1)
        r = round(m2)
        if abs(m2 - r) < 1e-9 * max(1.0, m2) and (r == 1 or (r >= 2 and r % 2 == 0)):
            return nyquist_overshoot_bound(RationalRate(n, Fraction(r, 2)), step, window)
    return c2_sota_bound(leps)


def layered_overshoot_bound(filt: LayeredFilter, L, step=None, window="printed") -> BoundResult:
    """Weighted sum of per-layer trapezoid bounds.

    Each layer with ``leps = (n+1)/n`` and ``L = (n+m)/n`` is bounded by
    :func:`nyquist_overshoot_bound`, any other layer by ``c2_sota_bound``.
    When the amplitude drops sum to one the result is a convex combination.
    """
    L = _check_L(L)
    contributions = []
    total = 0.0
    cert = 0.0
    for k, (wk, ek) in enumerate(zip(filt.weights, filt.extension_factors)):
        b = _layer_bound(ek, L, step, window)
        contributions.append({"layer": k, "weight": wk, "leps": ek,
                              "method": b.method, "bound": b.value,
                              "contribution": wk * b.value})
        total += wk * b.value
        cert += wk * b.cert_error
    return BoundResult(total, "layered", None, cert, details={"layers": contributions})


def best_upper_bound(L, step=None, n_max=64) -> BoundResult:
    """Smallest applicable upper bound on C1(L).

    Candidates: the cosine and square-root laws, and, when ``L`` is a
    rational rate with n <= n_max, the Dirichlet-sum bound (integer m) or
    the corollary bound (m = 1/2, i.e. L = (n'+1)/n' with n' = 2n even).
    Rate-based values are used only when L >= (leps+1)/2.
    """
    L = _check_L(L)
    cands = [c1_cos_bound(L), c1_sqrt_bound(L)]
    rate = RationalRate.from_L(L, n_max)
    if rate is not None and rate.L >= (rate.leps + 1) / 2:
        if rate.m == Fraction(1, 2):
            cands.append(c1_corollary_bound(2 * rate.n, step))
        else:
            cands.append(c2_new_bound(rate, step))
    best = min(cands, key=lambda r: r.value)  # first wins on ties
    return BoundResult(best.value, best.method, best.t_star, best.cert_error,
                       details={"candidates": {r.method: r.value for r in cands},
                                "rate": None if rate is None else str(rate)})
