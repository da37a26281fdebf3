"""Interpolation operator norms and kernel-based reconstruction.

The operator ``T f = (pi/(L B)) sum_l f(t_l) g(t - t_l)`` with
``t_l = pi l/(L B)`` has norm

    |T| = sup_t (pi/(L B)) sum_l |g(t - t_l)|,

a 1/L-periodic function of t (in time normalized to B = pi).  Two routes
evaluate the lattice sum:

``lattice``
    exact.  For kernels ``g = Q/u**2`` whose numerator ``Q`` is periodic
    with a period commensurate with the sampling step, the infinite sum is
    folded into ``P`` residue classes with
    ``sum_j 1/(u - jD)**2 = (pi/D)**2 / sin(pi u/D)**2``.
``truncated``
    ``|l| <= M`` terms plus the certified ``c/u**2`` envelope tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._grid import grid_maximize
from .bounds import BoundResult
from .errors import NonConvergenceError, ParameterError, PreconditionError, ToleranceError
from .kernels import (KernelSpec, Variant, as_fraction, cosine_form, envelope_constant,
                      eval_freq, eval_time, fold_period)

__all__ = [
    "GridSpec",
    "sample_instants",
    "operator_norm",
    "lattice_sum",
    "reconstruct",
    "Reconstruction",
    "shannon_reconstruct",
]

MAX_FOLD_TERMS = 20_000
MAX_TRUNCATION = 2_000_000
GRID_CERT_TARGET = 1e-9
MAX_POINTS = 1 << 20
_CHUNK = 4_000_000


@dataclass(frozen=True)
class GridSpec:
    """Sampling of the sup over one period.

    ``points``: t-samples per period (None picks a grid whose curvature
    certificate is below 1e-9); ``truncation``: half-width M of the
    l-summation for the truncated route (None picks the smallest M meeting
    ``target_tail``).
    """

    points: int | None = None
    truncation: int | None = None
    target_tail: float = 1e-8

    def __post_init__(self):
        if self.points is not None and self.points < 2:
            raise ParameterError("need at least 2 points per period")
        if self.truncation is not None and self.truncation < 2:
            raise ParameterError("truncation M must be at least 2")
        if not self.target_tail > 0:
            raise ParameterError("target_tail must be positive")


def sample_instants(L, B, l_range):
    """Sampling instants t_l = pi l/(L B) for the integers in ``l_range``."""
    if not L >= 1 or not B > 0:
        raise ParameterError("need L >= 1 and B > 0")
    if isinstance(l_range, tuple) and len(l_range) == 2:
        l_range = range(l_range[0], l_range[1])
    l = np.asarray(list(l_range) if not isinstance(l_range, np.ndarray) else l_range)
    return math.pi * l / (L * B)


def _normalized(kernel: KernelSpec) -> KernelSpec:
    return kernel if kernel.B == math.pi else kernel.with_bandwidth(math.pi)


def _fold_terms(kernel: KernelSpec, L):
    """(P, D): residue classes and folding period in normalized time, or None."""
    s = fold_period(kernel)
    fr = as_fraction(L)
    if s is None or fr is None:
        return None
    p, q = fr.numerator, fr.denominator
    P = 2 * s * p // math.gcd(2 * s * p, q)
    if P > MAX_FOLD_TERMS:
        return None
    return P, float(Fraction(P * q, p))


def _lattice_fn(kernel, L, P, D):
    shifts = np.arange(P) / L

    def phi(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty(t.shape)
        step = max(1, _CHUNK // P)
        for s in range(0, t.size, step):
            u = t[s:s + step, None] - shifts[None, :]
            u0 = u - D * np.round(u / D)
            w = np.abs(eval_time(kernel, u0)) / np.sinc(u0 / D) ** 2
            out[s:s + step] = w.sum(axis=1) / L
        return out

    return phi


def _truncated_fn(kernel, L, M):
    shifts = np.arange(-M, M + 1) / L

    def phi(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty(t.shape)
        step = max(1, _CHUNK // shifts.size)
        for s in range(0, t.size, step):
            u = t[s:s + step, None] - shifts[None, :]
            out[s:s + step] = np.abs(eval_time(kernel, u)).sum(axis=1) / L
        return out

    return phi


def _truncated_tail(c, L, M):
    # t in [0, 1/L]: right side |u| >= (l-1)/L, left side |u| >= |l|/L
    return c * L * (1.0 / (M - 1) + 1.0 / M)


def _curvature_bound(kernel, L):
    """Upper bound on sup_t (1/L) sum_l |g''(t - l/L)| (normalized time)."""
    amps, freqs = cosine_form(kernel)
    W = kernel.support_edge
    gmax = float(np.max(eval_freq(kernel, np.linspace(0, W, 257))))
    G2 = gmax * W**3 / (3 * math.pi)
    c0 = float(np.sum(np.abs(amps)))
    c1 = float(np.sum(np.abs(amps) * freqs))
    c2 = float(np.sum(np.abs(amps) * freqs**2))
    best = math.inf
    for R in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0):
        env = c2 / R**2 + 4 * c1 / R**3 + 6 * c0 / R**4
        integral = c2 / R + 2 * c1 / R**2 + 2 * c0 / R**3
        total = ((2 * R * L + 2) * G2 + 2 * (env + L * integral)) / L
        best = min(best, total)
    return best


def lattice_sum(kernel: KernelSpec, L, t, method="auto", truncation=None):
    """(1/L) sum_l |g(t - l/L)| at normalized times ``t`` (kernel taken at B = pi).

    Returns ``(values, tail_bound)``; the tail is zero on the lattice route.
    """
    kn = _normalized(kernel)
    fold = _fold_terms(kn, L) if method in ("auto", "lattice") else None
    if fold is not None:
        return _lattice_fn(kn, float(L), *fold)(t), 0.0
    if method == "lattice":
        raise ParameterError("lattice route needs rational L and kernel frequencies")
    c = envelope_constant(kn)
    M = truncation or 10_000
    tail = math.inf if c is None else _truncated_tail(c, float(L), M)
    return _truncated_fn(kn, float(L), M)(t), tail


def _divergence_report(kn, L, points, M0=16, doublings=11):
    tt = np.linspace(0.0, 1.0 / L, points)
    est = []
    for k in range(doublings + 1):
        M = M0 << k
        est.append((2 * M + 1, float(np.max(_truncated_fn(kn, L, M)(tt)))))
    inc = np.diff([v for _, v in est])
    growth = float(np.mean(inc[-4:]))
    ratios = inc[-3:] / inc[-4:-1]
    if growth > 1e-3 and np.all(ratios > 0.75):
        raise NonConvergenceError(
            f"lattice sum grows by ~{growth:.4f} per doubling of the term count "
            "(logarithmic growth): the operator norm is infinite",
            est, growth)
    raise ToleranceError("kernel has no summable envelope; no certificate available")


def operator_norm(kernel: KernelSpec, L, grid: GridSpec | None = None, method="auto") -> BoundResult:
    """Numerical operator norm of kernel interpolation at oversampling ``L``.

    ``value`` is the largest lattice sum found; the true norm lies in
    ``[value, value + cert_error]`` where ``cert_error`` combines the grid
    curvature certificate and, on the truncated route, the tail bound.
    Kernels without a summable envelope (sinc) are probed with doubling
    truncations and raise :class:`NonConvergenceError` on log growth.
    """
    if not L >= 1:
        raise ParameterError("oversampling factor must satisfy L >= 1")
    if method not in ("auto", "lattice", "truncated"):
        raise ParameterError(f"unknown method {method!r}")
    grid = grid or GridSpec()
    kn = _normalized(kernel)
    Lf = float(L)
    period = 1.0 / Lf

    if kn.variant is Variant.SINC:
        _divergence_report(kn, Lf, min(grid.points or 33, 257))

    fold = _fold_terms(kn, L) if method in ("auto", "lattice") else None
    if method == "lattice" and fold is None:
        raise ParameterError("lattice route needs rational L and kernel frequencies")
    curv = _curvature_bound(kn, Lf)
    if grid.points is None:
        # the truncated route cannot beat its tail, so match the grid to it
        target = GRID_CERT_TARGET if fold is not None else max(GRID_CERT_TARGET, grid.target_tail / 2)
        h = math.sqrt(8 * target / curv)
        points = min(MAX_POINTS, math.ceil(period / h) + 1)
    else:
        points = grid.points
    step = period / (points - 1)

    if fold is not None:
        P, D = fold
        f = _lattice_fn(kn, Lf, P, D)
        tail = 0.0
        info = {"route": "lattice", "fold_terms": P, "fold_period": D}
    else:
        c = envelope_constant(kn)
        if grid.truncation is None:
            M = math.ceil(2 * c * Lf / grid.target_tail) + 2
            if M > MAX_TRUNCATION:
                raise ToleranceError(
                    f"tail target {grid.target_tail:g} needs M={M} > {MAX_TRUNCATION}")
        else:
            M = grid.truncation
        tail = _truncated_tail(c, Lf, M)
        if tail > grid.target_tail:
            raise ToleranceError(
                f"tail bound {tail:.3g} exceeds target {grid.target_tail:g} with M={M}")
        f = _truncated_fn(kn, Lf, M)
        info = {"route": "truncated", "truncation": M}

    g = grid_maximize(f, 0.0, period, step, curvature=curv, chunk=1 << 12)
    info.update({"tail_bound": tail, "grid_cert": g.cert_error, "points": points})
    t_star = g.t_star % period
    return BoundResult(g.value, "opnorm", t_star, g.cert_error + tail, details=info)


@dataclass(frozen=True)
class Reconstruction:
    value: float | np.ndarray
    tail_bound: float | np.ndarray


def reconstruct(samples, kernel: KernelSpec, L, t, first_index=0, allow_ftn=False):
    """Kernel reconstruction (pi/(L B)) sum_l x_l g(t - t_l) from finite samples.

    ``samples[i]`` is the sample at index ``l = first_index + i``.  The
    reported tail bounds the contribution of the missing samples, assuming
    they are bounded by ``max|samples|``.  Reproduction requires
    L >= (leps+1)/2; pass ``allow_ftn=True`` to evaluate anyway.
    """
    x = np.asarray(samples, dtype=float)
    B = kernel.B
    if not allow_ftn:
        if kernel.variant is Variant.TRIANGLE:
            raise PreconditionError("the triangle kernel is not a reproducing kernel")
        need = 0.5 * (kernel.expansion + 1)
        if L < need * (1 - 1e-12):
            raise PreconditionError(
                f"reproduction needs L >= (leps+1)/2 = {need:.6g}, got L={L}")
    l = first_index + np.arange(x.size)
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    scale = math.pi / (L * B)
    vals = np.empty(tt.shape)
    step = max(1, _CHUNK // max(1, x.size))
    for s in range(0, tt.size, step):
        u = tt[s:s + step, None] - scale * l[None, :]
        vals[s:s + step] = scale * (eval_time(kernel, u) @ x)

    c = envelope_constant(kernel)
    tau = tt / scale
    lo, hi = first_index, first_index + x.size - 1
    if c is None:
        tail = np.full(tt.shape, math.inf)
    else:
        with np.errstate(divide="ignore"):
            side = np.where(hi > tau, 1.0 / (hi - tau), math.inf) + np.where(
                tau > lo, 1.0 / (tau - lo), math.inf)
        xmax = float(np.max(np.abs(x))) if x.size else 0.0
        tail = xmax * c / scale * side
    if np.ndim(t) == 0:
        return Reconstruction(float(vals[0]), float(tail[0]))
    return Reconstruction(vals, tail)


@dataclass(frozen=True)
class Truncated:
    value: float | np.ndarray
    terms: int


def shannon_reconstruct(samples, B, t, M, first_index=0):
    """Shannon series sum_{|l|<=M} x_l sin(B(t-t_l))/(B(t-t_l)), t_l = pi l/B.

    The sinc tail only decays like 1/t, so no certificate is attached; the
    number of terms actually used is reported instead.
    """
    x = np.asarray(samples, dtype=float)
    l = first_index + np.arange(x.size)
    keep = np.abs(l) <= M
    l, x = l[keep], x[keep]
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    u = B * tt[:, None] - math.pi * l[None, :]
    vals = np.sinc(u / math.pi) @ x
    value = float(vals[0]) if np.ndim(t) == 0 else vals
    return Truncated(value, int(l.size))
