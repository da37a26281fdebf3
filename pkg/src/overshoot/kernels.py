"""Reproducing kernels: closed-form evaluation and structural checks.

Conventions
-----------
Angular frequencies are in rad/s and the Fourier pair is

    g(t) = (1/2pi) * integral ghat(w) exp(jwt) dw,

so every kernel here has ``ghat = 1`` on its flat band and unit area,
``integral g = ghat(0) = 1`` (for the triangle family the peak of the
hat is the unit value).  With this scaling the reproduction formula reads
``f(t) = (pi/(L B)) * sum_l f(t_l) g(t - t_l)``.

Every kernel except the sinc can be written as ``g(u) = Q(u) / u**2`` with
``Q`` a finite cosine sum (:func:`cosine_form`).  That representation gives
the ``c/u**2`` envelope used for tail certificates and, when all the cosine
frequencies are commensurate, an exact period of ``Q`` that lets infinite
lattice sums and tail integrals be folded into one period.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
import numpy as np

from .errors import ParameterError

__all__ = [
    "Variant",
    "LayeredFilter",
    "KernelSpec",
    "eval_time",
    "eval_freq",
    "cosine_form",
    "envelope_constant",
    "fold_period",
    "kernel_zeros",
    "membership_check",
    "MembershipReport",
    "nyquist_isi_defect",
    "IsiReport",
    "triangle_kernel",
    "dirichlet",
    "lemma1_sum",
    "LatticeSum",
    "trapezoid_decomposition_check",
]

_REL = 1e-12


class Variant(str, enum.Enum):
    SINC = "sinc"
    TRIANGLE = "triangle"
    TRAPEZOID = "trapezoid"
    LAYERED = "layered"


def as_fraction(x, max_denominator=10_000, tol=1e-12):
    """Return ``x`` as a Fraction if it is (numerically) rational, else None."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    fr = Fraction(float(x)).limit_denominator(max_denominator)
    if abs(float(fr) - float(x)) <= tol * max(1.0, abs(float(x))):
        return fr
    return None


@dataclass(frozen=True)
class LayeredFilter:
    """A Nyquist-type response built from stacked trapezoids.

    Layer ``k`` is a trapezoid that is flat up to ``breakpoints[0]`` and
    reaches zero at ``breakpoints[k+1] = extension_factors[k] * breakpoints[0]``;
    its height is ``amplitudes[k] - amplitudes[k+1]``.  The total response is
    therefore ``amplitudes[0]`` in-band and decays piecewise linearly.
    """

    breakpoints: tuple
    amplitudes: tuple
    extension_factors: tuple = ()

    def __post_init__(self):
        w = tuple(float(v) for v in self.breakpoints)
        x = tuple(float(v) for v in self.amplitudes)
        if len(w) < 2:
            raise ParameterError("a layered filter needs at least two breakpoints")
        if len(x) != len(w):
            raise ParameterError("breakpoints and amplitudes must have equal length")
        if w[0] <= 0 or any(b <= a for a, b in zip(w, w[1:])):
            raise ParameterError("breakpoints must be positive and strictly increasing")
        if any(b > a for a, b in zip(x, x[1:])):
            raise ParameterError("amplitudes must be nonincreasing")
        if x[-1] != 0.0:
            raise ParameterError("the last amplitude must be exactly zero")
        if not x[-2] > 0.0:
            raise ParameterError("the last nonzero layer must have positive amplitude")
        derived = tuple(v / w[0] for v in w[1:])
        if self.extension_factors:
            ext = tuple(float(v) for v in self.extension_factors)
            if len(ext) != len(w) - 1:
                raise ParameterError("need one extension factor per layer")
            for e, d in zip(ext, derived):
                if not e > 1.0:
                    raise ParameterError("extension factors must exceed 1")
                if abs(e - d) > 1e-9 * d:
                    raise ParameterError(
                        f"extension factor {e} inconsistent with breakpoints (expected {d})"
                    )
        else:
            ext = derived
        object.__setattr__(self, "breakpoints", w)
        object.__setattr__(self, "amplitudes", x)
        object.__setattr__(self, "extension_factors", ext)

    @property
    def layers(self) -> int:
        return len(self.breakpoints) - 1

    @property
    def weights(self) -> tuple:
        x = self.amplitudes
        return tuple(x[k] - x[k + 1] for k in range(self.layers))

    @classmethod
    def from_dict(cls, d) -> "LayeredFilter":
        try:
            return cls(
                breakpoints=tuple(d["breakpoints_rad"]),
                amplitudes=tuple(d["amplitudes"]),
                extension_factors=tuple(d.get("extension_factors", ())),
            )
        except KeyError as exc:
            raise ParameterError(f"missing field {exc.args[0]!r} in layered filter") from None

    def to_dict(self) -> dict:
        return {
            "breakpoints_rad": list(self.breakpoints),
            "amplitudes": list(self.amplitudes),
            "extension_factors": list(self.extension_factors),
        }


@dataclass(frozen=True)
class KernelSpec:
    """Parameters of one kernel.

    ``B`` is the flat in-band edge (rad/s).  ``leps`` is the bandwidth
    expansion factor of the trapezoid; ``n`` divides the hat half-width of
    the triangle, which has half-width ``B/n``; ``layers`` carries the
    layered filter (its ``B`` is the first breakpoint).
    """

    variant: Variant
    B: float = math.pi
    leps: float = 1.0
    n: int = 1
    layers: LayeredFilter | None = field(default=None, compare=True)

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if not (self.B > 0 and math.isfinite(self.B)):
            raise ParameterError("bandwidth B must be positive and finite")
        if self.variant is Variant.TRAPEZOID and not self.leps > 1:
            raise ParameterError("trapezoid kernel needs leps > 1")
        if self.variant is Variant.TRIANGLE and (int(self.n) != self.n or self.n < 1):
            raise ParameterError("triangle kernel needs an integer n >= 1")
        if self.variant is Variant.LAYERED:
            if self.layers is None:
                raise ParameterError("layered kernel needs a LayeredFilter")
            if abs(self.B - self.layers.breakpoints[0]) > _REL * self.B:
                raise ParameterError("layered kernel B must equal the first breakpoint")

    @classmethod
    def sinc(cls, B=math.pi):
        return cls(Variant.SINC, B=B)

    @classmethod
    def triangle(cls, n=1, B=math.pi):
        return cls(Variant.TRIANGLE, B=B, n=int(n))

    @classmethod
    def trapezoid(cls, leps, B=math.pi):
        return cls(Variant.TRAPEZOID, B=B, leps=leps)

    @classmethod
    def layered(cls, layers: LayeredFilter):
        return cls(Variant.LAYERED, B=layers.breakpoints[0], layers=layers)

    @property
    def flat_edge(self) -> float:
        """Largest w with ghat(w) equal to its in-band value."""
        return 0.0 if self.variant is Variant.TRIANGLE else self.B

    @property
    def support_edge(self) -> float:
        """Smallest w beyond which ghat vanishes."""
        v = self.variant
        if v is Variant.SINC:
            return self.B
        if v is Variant.TRIANGLE:
            return self.B / self.n
        if v is Variant.TRAPEZOID:
            return self.leps * self.B
        return self.layers.breakpoints[-1]

    @property
    def expansion(self) -> float:
        """Effective bandwidth expansion factor (support edge / B)."""
        return self.support_edge / self.B

    def with_bandwidth(self, B) -> "KernelSpec":
        """Same shape, dilated to a new in-band edge."""
        if self.variant is Variant.LAYERED:
            s = B / self.B
            lay = LayeredFilter(
                tuple(w * s for w in self.layers.breakpoints),
                self.layers.amplitudes,
                self.layers.extension_factors,
            )
            return KernelSpec.layered(lay)
        return KernelSpec(self.variant, B=B, leps=self.leps, n=self.n)


def _sinc(x):
    """sin(x)/x with a second-order expansion at the removable singularity."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x * x / 6.0, np.sin(safe) / safe)


def _trapezoid_time(t, B, leps):
    a = 0.5 * (leps + 1.0) * B
    b = 0.5 * (leps - 1.0) * B
    return (a / math.pi) * _sinc(a * t) * _sinc(b * t)


def _trapezoid_freq(w, B, leps):
    top = leps * B
    return np.clip((top - np.abs(w)) / (top - B), 0.0, 1.0)


def _scalar_or_array(out, t):
    return float(out) if np.ndim(t) == 0 else out


def eval_time(kernel: KernelSpec, t):
    """Kernel value g(t); vectorized over ``t``."""
    tt = np.asarray(t, dtype=float)
    v = kernel.variant
    if v is Variant.SINC:
        out = (kernel.B / math.pi) * _sinc(kernel.B * tt)
    elif v is Variant.TRIANGLE:
        W = kernel.B / kernel.n
        out = (W / (2 * math.pi)) * _sinc(0.5 * W * tt) ** 2
    elif v is Variant.TRAPEZOID:
        out = _trapezoid_time(tt, kernel.B, kernel.leps)
    else:
        lay = kernel.layers
        out = np.zeros_like(tt)
        for wk, ek in zip(lay.weights, lay.extension_factors):
            if wk:
                out = out + wk * _trapezoid_time(tt, kernel.B, ek)
    return _scalar_or_array(out, t)


def eval_freq(kernel: KernelSpec, w):
    """Frequency response ghat(w), scaled to one on the flat band."""
    ww = np.asarray(w, dtype=float)
    v = kernel.variant
    if v is Variant.SINC:
        out = (np.abs(ww) <= kernel.B).astype(float)
    elif v is Variant.TRIANGLE:
        out = np.clip(1.0 - np.abs(ww) * kernel.n / kernel.B, 0.0, 1.0)
    elif v is Variant.TRAPEZOID:
        out = _trapezoid_freq(ww, kernel.B, kernel.leps)
    else:
        lay = kernel.layers
        out = np.zeros_like(ww)
        for wk, ek in zip(lay.weights, lay.extension_factors):
            out = out + wk * _trapezoid_freq(ww, kernel.B, ek)
    return _scalar_or_array(out, w)


def cosine_form(kernel: KernelSpec):
    """Amplitudes ``A`` and frequencies ``nu`` with g(u) = sum A cos(nu u) / u**2.

    Not available for the sinc kernel, whose numerator is not a cosine sum.
    """
    v = kernel.variant
    B = kernel.B
    if v is Variant.SINC:
        raise ParameterError("the sinc kernel has no 1/u^2 cosine form")
    if v is Variant.TRIANGLE:
        W = B / kernel.n
        c = 1.0 / (math.pi * W)
        return np.array([c, -c]), np.array([0.0, W])
    if v is Variant.TRAPEZOID:
        c = 1.0 / (math.pi * (kernel.leps - 1.0) * B)
        return np.array([c, -c]), np.array([B, kernel.leps * B])
    amps, freqs = [], []
    for wk, ek in zip(kernel.layers.weights, kernel.layers.extension_factors):
        if wk:
            c = wk / (math.pi * (ek - 1.0) * B)
            amps += [c, -c]
            freqs += [B, ek * B]
    return np.array(amps), np.array(freqs)


def envelope_constant(kernel: KernelSpec):
    """Constant c with |g(u)| <= c/u**2 for all u, or None for the sinc."""
    if kernel.variant is Variant.SINC:
        return None
    amps, freqs = cosine_form(kernel)
    if kernel.variant is Variant.TRIANGLE:
        # 1 - cos(Wu) <= 2
        return float(2 * amps[0])
    return float(np.sum(np.abs(amps)))


def fold_period(kernel: KernelSpec, max_denominator=10_000):
    """Return ``s`` such that Q(u) has period ``2*pi*s/B``, or None.

    ``s`` is the least common denominator of the cosine frequencies in
    units of ``B``; it exists only when all of them are rational.
    """
    if kernel.variant is Variant.SINC:
        return None
    _, freqs = cosine_form(kernel)
    s = 1
    for f in freqs / kernel.B:
        fr = as_fraction(f, max_denominator)
        if fr is None:
            return None
        s = s * fr.denominator // math.gcd(s, fr.denominator)
    return s


def kernel_zeros(kernel: KernelSpec, a, b, samples_per_cycle=32):
    """Sign changes of g on [a, b] (sorted), used to isolate kinks of |g|.

    The trapezoid and triangle have zeros on known lattices; the layered
    kernel is scanned and refined with Brent's method.
    """
    from scipy.optimize import brentq

    v = kernel.variant
    B = kernel.B
    if v is Variant.TRIANGLE:
        # double zeros: |g| = g, no kinks to isolate
        return np.array([])
    if v in (Variant.TRAPEZOID, Variant.SINC):
        lattices = [math.pi / B] if v is Variant.SINC else [
            2 * math.pi / ((kernel.leps + 1) * B),
            2 * math.pi / ((kernel.leps - 1) * B),
        ]
        pts = []
        for h in lattices:
            k0, k1 = math.ceil(a / h), math.floor(b / h)
            ks = np.arange(k0, k1 + 1)
            pts.append(ks[ks != 0] * h)
        z = np.unique(np.concatenate(pts)) if pts else np.array([])
        return z
    fmax = kernel.support_edge
    n = max(16, int(samples_per_cycle * (b - a) * fmax / (2 * math.pi)) + 1)
    x = np.linspace(a, b, n)
    y = eval_time(kernel, x)
    roots = []
    for i in np.nonzero(np.sign(y[:-1]) * np.sign(y[1:]) < 0)[0]:
        roots.append(brentq(lambda s: eval_time(kernel, s), x[i], x[i + 1], xtol=1e-15))
    return np.array(roots)


@dataclass(frozen=True)
class MembershipReport:
    in_set: bool
    max_violation: float
    violations: dict


def membership_check(kernel: KernelSpec, B, leps, points=20001, tol=1e-12):
    """Test the kernel's response against the reproducing-kernel-set conditions.

    Checks, on a dense grid that includes ``B`` and ``leps*B`` exactly: unit
    response for |w| <= B, values in [0, 1] and nonincreasing on the decay
    band, zero at ``leps*B`` and beyond, and evenness.
    """
    if not B > 0 or not leps >= 1:
        raise ParameterError("need B > 0 and leps >= 1")
    top = leps * B
    w_max = 1.25 * max(top, kernel.support_edge)
    w = np.union1d(np.linspace(0.0, w_max, points), [B, top])
    g = eval_freq(kernel, w)
    gm = eval_freq(kernel, -w)
    inband = w <= B * (1 + _REL)
    decay = (w > B) & (w <= top)
    outband = w > top

    v = {
        "in_band": float(np.max(np.abs(g[inband] - 1.0))),
        "range": 0.0,
        "monotone": 0.0,
        "edge": 0.0,
        "out_of_band": float(np.max(np.abs(g[outband]))) if outband.any() else 0.0,
        "even": float(np.max(np.abs(g - gm))),
    }
    if decay.any():
        gd = g[decay]
        v["range"] = float(max(np.max(-gd), np.max(gd - 1.0), 0.0))
        seq = np.concatenate([[g[inband][-1]], gd])
        v["monotone"] = float(max(np.max(np.diff(seq)), 0.0))
        v["edge"] = abs(float(eval_freq(kernel, top)))
    worst = max(v.values())
    return MembershipReport(in_set=worst <= tol, max_violation=worst, violations=v)


@dataclass(frozen=True)
class IsiReport:
    C_N: float
    defect: float


def nyquist_isi_defect(kernel: KernelSpec, LB, points=4096):
    """Aliased response sum over one period; a Nyquist filter has zero defect.

    ``LB`` is the Nyquist angular frequency; the admissible range is
    ``(flat + support)/2 <= LB <= support``.
    """
    lo = 0.5 * (kernel.flat_edge + kernel.support_edge)
    hi = kernel.support_edge
    if LB < lo * (1 - _REL) or LB > hi * (1 + _REL):
        raise ParameterError(
            f"Nyquist frequency {LB} outside admissible interval [{lo}, {hi}]"
        )
    w = -LB + (np.arange(points) + 0.5) * (2 * LB / points)
    kmax = math.ceil((hi + LB) / (2 * LB)) + 1
    total = np.zeros(points)
    for k in range(-kmax, kmax + 1):
        total += eval_freq(kernel, w - 2 * k * LB)
    c = float(np.mean(total))
    return IsiReport(C_N=c, defect=float(np.max(np.abs(total - c))))


def triangle_kernel(n, t):
    """The triangle kernel K_n(t) = 2n sin^2(pi t / 2n) / (pi t)^2 (bandwidth pi/n)."""
    return eval_time(KernelSpec.triangle(n), t)


def dirichlet(n, theta):
    """Dirichlet kernel sum_{|k|<=n} exp(jk theta), summed term by term."""
    th = np.asarray(theta, dtype=float)
    k = np.arange(1, n + 1)
    out = 1.0 + 2.0 * np.cos(np.multiply.outer(th, k)).sum(axis=-1)
    return _scalar_or_array(out, theta)


@dataclass(frozen=True)
class LatticeSum:
    value: float
    tail_bound: float


def lemma1_sum(n, a, t, M=10_000):
    """Truncated sum_{|l|<=M} K_n(t - l a n) with a certified tail bound.

    For 0 < a <= 2 the infinite sum equals 1/(a n) for every t, so
    ``value <= 1/(a n) <= value + tail_bound``.
    """
    if int(n) != n or n < 1:
        raise ParameterError("n must be a positive integer")
    if not 0 < a <= 2:
        raise ParameterError("need 0 < a <= 2; spectral replicas overlap otherwise")
    if M < 1:
        raise ParameterError("M must be at least 1")
    tau = abs(t) / (a * n)
    if M <= tau + 1:
        raise ParameterError(f"M={M} too small for |t|={abs(t)}")
    l = np.arange(-M, M + 1)
    value = float(np.sum(triangle_kernel(n, t - l * a * n)))
    tail = 4.0 / (math.pi**2 * a * a * n * (M - tau))
    return LatticeSum(value, tail)


def trapezoid_decomposition_check(n, t):
    """|S_{(n+1)/n}(t) - sum_k K_n(t) exp(jk pi t/n)| at B = pi."""
    if int(n) != n or n < 1:
        raise ParameterError("n must be a positive integer")
    lhs = eval_time(KernelSpec.trapezoid(float(Fraction(n + 1, n))), t)
    k = np.arange(-n, n + 1)
    rhs = triangle_kernel(n, t) * np.sum(np.exp(1j * k * math.pi * t / n))
    return float(abs(lhs - rhs))
