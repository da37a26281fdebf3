"""Lower-bound oracles for the peak value problem.

Real trigonometric polynomials of degree N are sampled at N1 equispaced
angles.  The ratio of the sup-norm to the largest sample is bounded from
below by random search and, exactly for each peak location, by a linear
program over the coefficients.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from ._simplex import OPTIMAL, UNBOUNDED, simplex_max
from .errors import ParameterError

__all__ = [
    "TrigPoly",
    "SupNorm",
    "sup_norm_certified",
    "sampled_sup",
    "MonteCarloResult",
    "monte_carlo_lower_bound",
    "LPResult",
    "lp_c1_trig",
    "ExtremalReport",
    "extremal_check",
]

_MC_CHUNK = 256


@dataclass(frozen=True)
class TrigPoly:
    """f(θ) = a_0/2 + Σ_{k=1}^{N} a_k cos kθ + b_k sin kθ.

    ``a`` holds a_0..a_N and ``b`` holds b_1..b_N.
    """

    a: tuple
    b: tuple

    def __init__(self, a, b=()):
        a = tuple(float(v) for v in np.ravel(a))
        b = tuple(float(v) for v in np.ravel(b))
        if not a:
            raise ParameterError("need at least the constant coefficient a_0")
        if len(b) != len(a) - 1:
            raise ParameterError(f"degree mismatch: {len(a)} cosine vs {len(b)} sine coefficients")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def N(self) -> int:
        return len(self.a) - 1

    def __call__(self, theta):
        return self.eval(theta)

    def eval(self, theta):
        th = np.asarray(theta, dtype=float)
        k = np.arange(1, self.N + 1)
        kt = np.multiply.outer(th, k)
        out = self.a[0] / 2 + np.cos(kt) @ np.asarray(self.a[1:]) + np.sin(kt) @ np.asarray(self.b)
        return float(out) if out.ndim == 0 else out

    def derivative(self) -> "TrigPoly":
        k = np.arange(1, self.N + 1)
        return TrigPoly(np.concatenate([[0.0], k * np.asarray(self.b)]), -k * np.asarray(self.a[1:]))

    def scaled(self, alpha) -> "TrigPoly":
        return TrigPoly(alpha * np.asarray(self.a), alpha * np.asarray(self.b))

    def to_dict(self) -> dict:
        return {"N": self.N, "a": list(self.a), "b": list(self.b)}

    @classmethod
    def from_dict(cls, d) -> "TrigPoly":
        p = cls(d["a"], d["b"])
        if "N" in d and int(d["N"]) != p.N:
            raise ParameterError(f"declared degree {d['N']} does not match coefficients")
        return p

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text) -> "TrigPoly":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class SupNorm:
    value: float
    cert_error: float
    theta_star: float


def _default_step(N):
    return 2 * math.pi / max(64, 64 * N)


def sup_norm_certified(f: TrigPoly, step=None) -> SupNorm:
    """Sup of |f| over a period with a Bernstein-type certificate.

    At the maximizer f' vanishes and |f''| <= N**2 sup|f|, so a grid of
    spacing h loses at most a fraction x = (N h)**2/8 of the sup:
    ``sup <= grid_max/(1 - x)``.  The grid is refined automatically until
    ``N h <= 1``.  ``value`` is the (polished) attained maximum.
    """
    if step is not None and not step > 0:
        raise ParameterError("step must be positive")
    N = f.N
    if N == 0:
        return SupNorm(abs(f.a[0]) / 2, 0.0, 0.0)
    h = min(step or _default_step(N), 1.0 / N)
    K = math.ceil(2 * math.pi / h)
    h = 2 * math.pi / K
    th = np.arange(K) * h
    vals = np.abs(f.eval(th))
    i = int(np.argmax(vals))
    gm = float(vals[i])
    x = (N * h) ** 2 / 8
    cert = gm * x / (1 - x)
    res = minimize_scalar(lambda t: -abs(f.eval(t)), bounds=(th[i] - h, th[i] + h),
                          method="bounded", options={"xatol": 1e-14})
    value, theta = gm, float(th[i])
    if -res.fun > gm:
        value, theta = float(-res.fun), float(res.x) % (2 * math.pi)
    return SupNorm(value, max(0.0, gm + cert - value), theta)


def sampled_sup(f: TrigPoly, N1) -> float:
    """max_l |f(2πl/N1)| for l = 0..N1-1."""
    if int(N1) != N1 or N1 < 1:
        raise ParameterError("N1 must be a positive integer")
    return float(np.max(np.abs(f.eval(2 * math.pi * np.arange(N1) / N1))))


def _design(N, theta):
    theta = np.asarray(theta, dtype=float)
    k = np.arange(1, N + 1)
    kt = np.multiply.outer(theta, k)
    return np.concatenate([np.full(theta.shape + (1,), 0.5), np.cos(kt), np.sin(kt)], axis=-1)


def _to_poly(N, c):
    return TrigPoly(c[:N + 1], c[N + 1:])


@dataclass(frozen=True)
class MonteCarloResult:
    ratio: float
    witness: TrigPoly | None
    trial: int
    discarded: int
    trials: int
    cert_error: float

    def to_dict(self) -> dict:
        return {"ratio": self.ratio, "trial": self.trial, "discarded": self.discarded,
                "trials": self.trials, "cert_error": self.cert_error,
                "witness": None if self.witness is None else self.witness.to_dict()}


def _mc_chunk(N, N1, seed, lo, hi, grid, samples):
    coef = np.empty((hi - lo, 2 * N + 1))
    for i in range(lo, hi):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
        coef[i - lo] = rng.standard_normal(2 * N + 1)
    sup = np.max(np.abs(coef @ grid.T), axis=1)
    smp = np.max(np.abs(coef @ samples.T), axis=1)
    ok = smp > 0
    ratio = np.where(ok, sup / np.where(ok, smp, 1.0), -np.inf)
    return coef, ratio, int(np.count_nonzero(~ok))


def monte_carlo_lower_bound(N, N1, trials, seed, step=None, workers=1) -> MonteCarloResult:
    """Largest sup/sampled-sup ratio over random degree-N polynomials.

    Coefficients are i.i.d. standard normal; trial i draws from its own
    stream ``SeedSequence(seed, spawn_key=(i,))``, so the result does not
    depend on ``workers``.  Ratios use attained values only, hence each is
    a true lower bound on the constant.  Trials whose samples all vanish
    are discarded and counted.
    """
    if N < 0 or int(N) != N:
        raise ParameterError("degree N must be a nonnegative integer")
    if int(N1) != N1 or N1 <= 2 * N:
        raise ParameterError("need N1 > 2N")
    if trials < 1:
        raise ParameterError("need at least one trial")
    N, N1 = int(N), int(N1)
    if N == 0:
        return MonteCarloResult(1.0, TrigPoly([2.0]), 0, 0, trials, 0.0)
    h = min(step or _default_step(N), 1.0 / N)
    K = math.ceil(2 * math.pi / h)
    grid = _design(N, 2 * math.pi * np.arange(K) / K)
    samples = _design(N, 2 * math.pi * np.arange(N1) / N1)

    bounds = [(s, min(s + _MC_CHUNK, trials)) for s in range(0, trials, _MC_CHUNK)]
    run = lambda lh: _mc_chunk(N, N1, seed, lh[0], lh[1], grid, samples)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(run, bounds))
    else:
        parts = [run(lh) for lh in bounds]

    best, best_i, best_c, discarded = -np.inf, -1, None, 0
    for (lo, _), (coef, ratio, bad) in zip(bounds, parts):
        discarded += bad
        j = int(np.argmax(ratio))
        if ratio[j] > best:
            best, best_i, best_c = float(ratio[j]), lo + j, coef[j]
    if best_i < 0:
        return MonteCarloResult(float("nan"), None, -1, discarded, trials, 0.0)
    w = _to_poly(N, best_c)
    sup = sup_norm_certified(w, step)
    smp = sampled_sup(w, N1)
    return MonteCarloResult(sup.value / smp, w, best_i, discarded, trials, sup.cert_error / smp)


@dataclass(frozen=True)
class LPResult:
    value: float
    witness: TrigPoly | None
    t_star: float | None
    status: str
    slack: float

    def to_dict(self) -> dict:
        return {"value": self.value, "t_star": self.t_star, "status": self.status,
                "slack": self.slack,
                "witness": None if self.witness is None else self.witness.to_dict()}


def _lp_at(N, A2, t):
    w = _design(N, t)
    sol = simplex_max(np.concatenate([w, -w]), A2, np.ones(A2.shape[0]))
    if sol.status != OPTIMAL:
        return sol.status, math.inf, None
    m = 2 * N + 1
    return OPTIMAL, sol.value, sol.x[:m] - sol.x[m:]


def lp_c1_trig(N, N1, t_grid=512, refine=True) -> LPResult:
    """max f(t*) over degree-N polynomials with |f(2πl/N1)| <= 1, maximized over t*.

    Each t* gives an exact LP.  Reflections, sign changes and lattice shifts
    map the feasible set onto itself, so t* ranges over [0, π/N1].  With a
    t*-grid of spacing h the true constant is at most
    ``value/(1 - x)``, x = (N h)**2/8; ``slack`` reports that gap.
    For N1 <= 2N some polynomial vanishes on every sample and the LP is
    unbounded.
    """
    if N < 0 or int(N) != N or int(N1) != N1 or N1 < 1:
        raise ParameterError("need integer N >= 0 and N1 >= 1")
    N, N1 = int(N), int(N1)
    if t_grid < 2:
        raise ParameterError("t_grid needs at least 2 points")
    if N == 0:
        return LPResult(1.0, TrigPoly([2.0]), 0.0, OPTIMAL, 0.0)
    A = _design(N, 2 * math.pi * np.arange(N1) / N1)
    A2 = np.block([[A, -A], [-A, A]])
    if N1 <= 2 * N:
        status, _, _ = _lp_at(N, A2, 0.5 * math.pi / N1)
        if status == UNBOUNDED:
            return LPResult(math.inf, None, None, UNBOUNDED, 0.0)

    ts = np.linspace(0.0, math.pi / N1, t_grid)
    vals = np.empty(t_grid)
    coefs = []
    for i, t in enumerate(ts):
        status, vals[i], c = _lp_at(N, A2, t)
        if status != OPTIMAL:
            return LPResult(math.inf, None, None, status, 0.0)
        coefs.append(c)
    i = int(np.argmax(vals))
    value, t_star, c_best = float(vals[i]), float(ts[i]), coefs[i]
    h = ts[1] - ts[0]
    x = (N * h) ** 2 / 8
    grid_value = value

    if refine:
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, t_grid - 1)]
        res = minimize_scalar(lambda t: -_lp_at(N, A2, t)[1], bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-12})
        _, v, c = _lp_at(N, A2, float(res.x))
        if v > value:
            value, t_star, c_best = v, float(res.x), c
    slack = max(0.0, grid_value / (1 - x) - value)
    return LPResult(value, _to_poly(N, c_best), t_star, OPTIMAL, slack)


@dataclass(frozen=True)
class ExtremalReport:
    L: int
    sampled: float
    sup: float
    ratio: float
    cert_error: float

    def to_dict(self) -> dict:
        return {"L": self.L, "sampled": self.sampled, "sup": self.sup,
                "ratio": self.ratio, "cert_error": self.cert_error}


def extremal_check(L) -> ExtremalReport:
    """Check the extremal signal cos(π(t - 1/(2L)))/cos(π/(2L)) at integer L.

    In the angle θ = πt the signal is a degree-1 polynomial sampled at
    N1 = 2L points per period.
    """
    if int(L) != L or L < 2:
        raise ParameterError("L must be an integer >= 2")
    L = int(L)
    f = TrigPoly([0.0, 1.0], [math.tan(math.pi / (2 * L))])
    smp = sampled_sup(f, 2 * L)
    sup = sup_norm_certified(f)
    return ExtremalReport(L, smp, sup.value, sup.value / smp, sup.cert_error / smp)
