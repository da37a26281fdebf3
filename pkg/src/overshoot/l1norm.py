"""L1 norms of interpolation kernels.

For kernels ``g = Q/u**2`` with a periodic numerator (period T) the whole
line folds onto one period:

    int |g| = int_{-T/2}^{T/2} |g(u)| / sinc(u/T)**2 du,

using ``sum_j 1/(u - jT)**2 = (pi/T)**2 / sin(pi u/T)**2``.  This leaves a
finite integral of a piecewise smooth function whose kinks are the zeros
of g.  Otherwise ``|g|`` is integrated over a core interval and the tail
is bounded through the ``c/u**2`` envelope.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergenceError, ParameterError, ToleranceError
from .kernels import (KernelSpec, Variant, envelope_constant, eval_time, fold_period,
                      kernel_zeros)
from .opnorm import GridSpec, operator_norm

__all__ = [
    "QuadratureSpec",
    "L1Result",
    "adaptive_gk15",
    "kernel_l1",
    "l1_vs_c2_check",
    "l1_lower_floor",
]

# Gauss-Kronrod 7/15 nodes and weights on [-1, 1]
_XK = np.array([0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                0.207784955007898467600689403773245, 0.0])
_WK = np.array([0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                0.381830050505118944950369775488975, 0.417959183673469387755102040816327])
_X15 = np.concatenate([-_XK[:-1], _XK[::-1]])
_W15 = np.concatenate([_WK[:-1], _WK[::-1]])
# Gauss points are the odd-indexed Kronrod nodes
_W7 = np.zeros(15)
_W7[[1, 3, 5, 13, 11, 9]] = np.concatenate([_WG[:3], _WG[:3]])
_W7[7] = _WG[3]


@dataclass(frozen=True)
class QuadratureSpec:
    """Adaptive quadrature settings.

    ``core_halfwidth`` only matters on the envelope route; None picks the
    point where the envelope tail drops below ``abs_tol/2``.
    """

    core_halfwidth: float | None = None
    abs_tol: float = 1e-10
    max_subdivisions: int = 20_000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ParameterError("abs_tol must be positive")
        if self.core_halfwidth is not None and not self.core_halfwidth > 0:
            raise ParameterError("core_halfwidth must be positive")
        if self.max_subdivisions < 1:
            raise ParameterError("max_subdivisions must be positive")


@dataclass(frozen=True)
class L1Result:
    value: float
    cert_error: float
    route: str = "folded"
    subdivisions: int = 0

    def to_dict(self) -> dict:
        return {"value": self.value, "cert_error": self.cert_error,
                "route": self.route, "subdivisions": self.subdivisions}


def _gk15(f, a, b):
    c, h = 0.5 * (a + b), 0.5 * (b - a)
    y = f(c + h * _X15)
    return h * float(_W15 @ y), h * abs(float((_W15 - _W7) @ y))


def adaptive_gk15(f, breaks, abs_tol, max_subdivisions=20_000):
    """Globally adaptive Gauss-Kronrod (7, 15) integration of a vectorized ``f``.

    ``breaks`` are the sorted end points of the initial pieces (put kinks
    there).  The piece with the largest error estimate is bisected until the
    summed estimate is below ``abs_tol``.  Returns ``(value, error, pieces)``.
    """
    breaks = np.asarray(breaks, dtype=float)
    heap = []
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b > a:
            v, e = _gk15(f, a, b)
            heapq.heappush(heap, (-e, a, b, v))
    total_err = sum(-item[0] for item in heap)
    while total_err > abs_tol and len(heap) < max_subdivisions:
        ne, a, b, _ = heapq.heappop(heap)
        m = 0.5 * (a + b)
        if not a < m < b:
            heapq.heappush(heap, (ne, a, b, _))
            break
        v1, e1 = _gk15(f, a, m)
        v2, e2 = _gk15(f, m, b)
        heapq.heappush(heap, (-e1, a, m, v1))
        heapq.heappush(heap, (-e2, m, b, v2))
        total_err += ne + e1 + e2
    # deterministic summation order: left to right
    items = sorted(heap, key=lambda item: item[1])
    value = math.fsum(item[3] for item in items)
    err = math.fsum(-item[0] for item in items)
    return value, err, len(items)


def _sinc_divergence(kernel):
    B = kernel.B
    est = []
    f = lambda u: np.abs(eval_time(kernel, u))
    for k in range(4, 14):
        humps = 1 << k
        R = humps * math.pi / B
        v, _, _ = adaptive_gk15(f, np.linspace(0.0, R, humps + 1), 1e-9)
        est.append((2 * R, 2 * v))
    inc = np.diff([v for _, v in est])
    growth = float(np.mean(inc[-4:]))
    raise NonConvergenceError(
        f"integral of |g| over [-R, R] grows by ~{growth:.4f} per doubling of R: "
        "the sinc kernel is not integrable", est, growth)


def kernel_l1(kernel: KernelSpec, quad: QuadratureSpec | None = None) -> L1Result:
    """∫|g| for a kernel in its native bandwidth units.

    ``cert_error`` is the quadrature error estimate plus, on the envelope
    route, the analytic tail bound.  The sinc kernel raises
    :class:`NonConvergenceError`.
    """
    quad = quad or QuadratureSpec()
    if kernel.variant is Variant.SINC:
        _sinc_divergence(kernel)
    f = lambda u: np.abs(eval_time(kernel, u))
    s = fold_period(kernel)
    if s is not None:
        T = 2 * math.pi * s / kernel.B
        z = kernel_zeros(kernel, 0.0, 0.5 * T)
        breaks = np.unique(np.concatenate([[0.0], z[(z > 0) & (z < 0.5 * T)], [0.5 * T]]))
        folded = lambda u: f(u) / np.sinc(u / T) ** 2
        v, e, k = adaptive_gk15(folded, breaks, quad.abs_tol / 2, quad.max_subdivisions)
        v, e = 2 * v, 2 * e
        if e > quad.abs_tol:
            raise ToleranceError(f"quadrature error {e:.3g} above abs_tol {quad.abs_tol:g}")
        return L1Result(v, e, "folded", k)

    c = envelope_constant(kernel)
    R = quad.core_halfwidth or 4 * c / quad.abs_tol
    tail = 2 * c / R
    if tail > quad.abs_tol / 2:
        raise ToleranceError(f"envelope tail {tail:.3g} above abs_tol/2 with core {R:g}")
    # sign changes are at least pi/support_edge apart; refuse before allocating
    if R * kernel.support_edge / math.pi > 2 * quad.max_subdivisions:
        raise ToleranceError(f"core [0, {R:.3g}] needs more pieces than max_subdivisions; "
                             "loosen abs_tol or set core_halfwidth")
    z = kernel_zeros(kernel, 0.0, R)
    if z.size > quad.max_subdivisions:
        raise ToleranceError(f"core [0, {R:g}] has {z.size} sign changes, "
                             "more than max_subdivisions")
    breaks = np.unique(np.concatenate([[0.0], z[(z > 0) & (z < R)], [R]]))
    v, e, k = adaptive_gk15(f, breaks, quad.abs_tol / 4, quad.max_subdivisions)
    v, e = 2 * v, 2 * e
    if e + tail > quad.abs_tol:
        raise ToleranceError(f"quadrature error {e:.3g} plus tail {tail:.3g} above abs_tol")
    return L1Result(v + tail / 2, e + tail / 2, "envelope", k)


@dataclass(frozen=True)
class L1VsC2Report:
    L: float
    leps: tuple
    l1: tuple
    opnorm: tuple
    min_l1: float
    min_opnorm: float
    cert_error: float
    holds: bool

    def to_dict(self) -> dict:
        return {"L": self.L, "leps": list(self.leps), "l1": list(self.l1),
                "opnorm": list(self.opnorm), "min_l1": self.min_l1,
                "min_opnorm": self.min_opnorm, "cert_error": self.cert_error,
                "holds": self.holds}


def l1_vs_c2_check(leps_list, L, quad: QuadratureSpec | None = None,
                   grid: GridSpec | None = None) -> L1VsC2Report:
    """Compare the smallest trapezoid L1 norm with the operator norms at ``L``.

    Averaging the lattice sum over one sampling period gives ∫|g|, so every
    kernel satisfies ∫|g| <= its operator norm; in particular the family
    minimum of L1 norms is at most the smallest operator norm found.
    """
    leps_list = tuple(float(v) for v in leps_list)
    if not leps_list or any(not v > 1 for v in leps_list):
        raise ParameterError("every expansion factor must exceed 1")
    l1s, ops, certs = [], [], []
    for le in leps_list:
        k = KernelSpec.trapezoid(le)
        r1 = kernel_l1(k, quad)
        r2 = operator_norm(k, L, grid)
        l1s.append(r1.value)
        ops.append(r2.value)
        certs += [r1.cert_error, r2.cert_error]
    min_l1, min_op = min(l1s), min(ops)
    cert = sum(certs)
    holds = all(a <= b + cert for a, b in zip(l1s, ops))
    return L1VsC2Report(float(L), leps_list, tuple(l1s), tuple(ops), min_l1, min_op, cert, holds)


@dataclass(frozen=True)
class FloorReport:
    value: float
    cert_error: float
    excess: float
    holds: bool

    def to_dict(self) -> dict:
        return {"value": self.value, "cert_error": self.cert_error,
                "excess": self.excess, "holds": self.holds}


def l1_lower_floor(kernel: KernelSpec, quad: QuadratureSpec | None = None) -> FloorReport:
    """Check ∫|g| >= |∫g| = ghat(0) = 1 for a unit in-band kernel."""
    r = kernel_l1(kernel, quad)
    return FloorReport(r.value, r.cert_error, r.value - 1.0, r.value >= 1.0 - r.cert_error)
