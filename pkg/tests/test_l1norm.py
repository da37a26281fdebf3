import math

import numpy as np
import pytest
from scipy.integrate import quad

from overshoot.errors import NonConvergenceError, ParameterError, ToleranceError
from overshoot.kernels import KernelSpec, LayeredFilter, envelope_constant, eval_time
from overshoot.l1norm import (QuadratureSpec, adaptive_gk15, kernel_l1, l1_lower_floor,
                              l1_vs_c2_check)
from overshoot.opnorm import operator_norm


def _scipy_l1(kernel, R, piece):
    """Oracle: scipy quad over [0, R] in pieces plus the envelope tail."""
    f = lambda u: abs(eval_time(kernel, u))
    edges = np.arange(0.0, R + piece / 2, piece)
    core = sum(quad(f, a, b, epsabs=1e-14, limit=200)[0] for a, b in zip(edges, edges[1:]))
    tail = envelope_constant(kernel) / R
    return 2 * core, 2 * (core + tail)


def test_gk15_rule():
    v, e, k = adaptive_gk15(np.exp, [0.0, 1.0], 1e-13)
    assert v == pytest.approx(math.e - 1, abs=1e-14)
    v, e, k = adaptive_gk15(lambda x: np.sqrt(np.abs(x)), [-1.0, 0.0, 1.0], 1e-10)
    assert v == pytest.approx(4 / 3, abs=1e-9) and e <= 1e-10


def test_quadrature_spec_validation():
    with pytest.raises(ParameterError):
        QuadratureSpec(abs_tol=0)
    with pytest.raises(ParameterError):
        QuadratureSpec(core_halfwidth=-1.0)


@pytest.mark.parametrize("B", [0.1, 1.0, math.pi, 10.0, 100.0])
def test_triangle_is_unity(B):
    r = kernel_l1(KernelSpec.triangle(1, B=B))
    assert abs(r.value - 1) < 1e-12


def test_triangle_spread_across_bandwidths():
    vals = [kernel_l1(KernelSpec.triangle(1, B=B)).value for B in (0.1, 1.0, math.pi, 100.0)]
    assert max(vals) - min(vals) < 1e-8


@pytest.mark.parametrize("leps", [3.0, 1.5, 2.5])
def test_trapezoid_against_scipy(leps):
    k = KernelSpec.trapezoid(leps)
    r = kernel_l1(k)
    lo, hi = _scipy_l1(k, 400.0, 2 / (leps - 1))
    assert lo - 1e-9 <= r.value <= hi + 1e-9
    assert r.cert_error <= 1e-10


def test_trapezoid_three_value():
    r = kernel_l1(KernelSpec.trapezoid(3.0))
    assert 1 < r.value < 1.5
    assert r.value == pytest.approx(4 / math.pi, abs=1e-10)


def test_nonincreasing_in_leps():
    leps = np.round(np.arange(1.1, 4.001, 0.1), 10)
    vals = [kernel_l1(KernelSpec.trapezoid(float(x))).value for x in leps]
    assert np.all(np.diff(vals) <= 1e-10)


def test_envelope_route_irrational():
    k = KernelSpec.trapezoid(math.sqrt(5))
    env = kernel_l1(k, QuadratureSpec(abs_tol=1e-3))
    assert env.route == "envelope" and env.cert_error <= 1e-3
    lo, hi = _scipy_l1(k, 400.0, 2 / (math.sqrt(5) - 1))
    assert lo - env.cert_error <= env.value <= hi + env.cert_error
    # sandwiched by its rational neighbours on the folded route
    a, b = (kernel_l1(KernelSpec.trapezoid(x)).value for x in (2.2, 2.25))
    assert b - env.cert_error <= env.value <= a + env.cert_error


def test_envelope_route_tolerance_failure():
    with pytest.raises(ToleranceError):
        kernel_l1(KernelSpec.trapezoid(math.sqrt(3)))


def test_sinc_divergence():
    with pytest.raises(NonConvergenceError) as info:
        kernel_l1(KernelSpec.sinc())
    # integral over one more octave of lobes adds (4/pi^2) log 2
    assert info.value.growth == pytest.approx(4 / math.pi**2 * math.log(2), rel=0.01)


def test_layered_triangle_inequality():
    f = LayeredFilter((1.0, 2.0, 3.0), (1.0, 0.5, 0.0))
    r = kernel_l1(KernelSpec.layered(f))
    parts = [kernel_l1(KernelSpec.trapezoid(e, B=1.0)).value for e in (2.0, 3.0)]
    assert r.value <= 0.5 * parts[0] + 0.5 * parts[1] + r.cert_error
    assert l1_lower_floor(KernelSpec.layered(f)).holds


def test_l1_below_operator_norm():
    for leps, L in [(3.0, 2.0), (2.0, 1.5), (1.5, 1.25), (2.5, 3.0)]:
        k = KernelSpec.trapezoid(leps)
        assert kernel_l1(k).value <= operator_norm(k, L).value + 1e-8


def test_l1_vs_c2_examples():
    r = l1_vs_c2_check([2.0, 2.5, 3.0], 2)
    assert r.holds and r.min_l1 <= math.sqrt(2) + r.cert_error
    assert r.min_opnorm == pytest.approx(math.sqrt(2), abs=1e-6)
    r = l1_vs_c2_check([1.5], 1.5)
    assert r.holds and r.min_l1 <= math.sqrt(5)
    with pytest.raises(ParameterError):
        l1_vs_c2_check([1.0], 2)


def test_floor():
    r = l1_lower_floor(KernelSpec.triangle(1))
    assert r.holds and abs(r.excess) < 1e-12
    r = l1_lower_floor(KernelSpec.trapezoid(3.0))
    assert r.holds and r.excess > 10 * r.cert_error
