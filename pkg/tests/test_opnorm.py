import math
from fractions import Fraction

import numpy as np
import pytest

from overshoot.bounds import RationalRate, c2_new_bound, c2_sota_bound
from overshoot.errors import NonConvergenceError, ParameterError, PreconditionError, ToleranceError
from overshoot.kernels import KernelSpec, LayeredFilter, eval_time
from overshoot.opnorm import (GridSpec, lattice_sum, operator_norm, reconstruct,
                              sample_instants, shannon_reconstruct)

from oracles import lattice_sum_bruteforce


def test_sample_instants():
    assert sample_instants(2, math.pi, [1])[0] == pytest.approx(0.5, abs=1e-16)
    assert sample_instants(1, math.pi, [3])[0] == pytest.approx(3.0, abs=1e-15)
    assert sample_instants(1.5, 2 * math.pi, [-2])[0] == pytest.approx(-2 / 3, abs=1e-15)
    assert list(sample_instants(2, math.pi, (0, 3))) == pytest.approx([0, 0.5, 1.0])
    with pytest.raises(ParameterError):
        sample_instants(0.5, math.pi, [0])


def test_gridspec_validation():
    with pytest.raises(ParameterError):
        GridSpec(points=1)
    with pytest.raises(ParameterError):
        GridSpec(truncation=1)
    with pytest.raises(ParameterError):
        GridSpec(target_tail=0)


def test_examples():
    r = operator_norm(KernelSpec.trapezoid(3.0), 2)
    assert r.value == pytest.approx(math.sqrt(2), abs=1e-6)
    assert r.method == "opnorm" and r.cert_error < 1e-8
    r = operator_norm(KernelSpec.trapezoid(2.0), 2)
    assert r.value == pytest.approx(1.5, abs=1e-6)


def test_sinc_diverges():
    with pytest.raises(NonConvergenceError) as info:
        operator_norm(KernelSpec.sinc(), 1)
    err = info.value
    # growth per doubling of the term count is (2/pi) log 2
    assert err.growth == pytest.approx(2 / math.pi * math.log(2), rel=0.02)
    values = [v for _, v in err.estimates]
    assert np.all(np.diff(values) > 0)


@pytest.mark.parametrize("leps,L", [(3.0, 2.0), (2.0, 1.5), (1.5, 1.25), (2.5, 1.75)])
def test_lattice_matches_bruteforce(leps, L):
    k = KernelSpec.trapezoid(leps)
    g = lambda u: eval_time(k, u)
    t = np.random.default_rng(1).uniform(0, 1 / L, 7)
    folded, tail = lattice_sum(k, L, t)
    assert tail == 0.0
    for ti, fi in zip(t, folded):
        brute = lattice_sum_bruteforce(g, L, ti, 400_000)
        # brute force misses a tail of at most c L (1/(M-1) + 1/M)
        assert brute <= fi + 1e-12
        assert fi - brute < 2e-5


def test_truncated_route_brackets_lattice():
    k = KernelSpec.trapezoid(2.0)
    r = operator_norm(k, 1.5, GridSpec(points=2001, truncation=50_000, target_tail=1e-4),
                      method="truncated")
    exact = operator_norm(k, 1.5).value
    assert r.details["route"] == "truncated"
    assert r.value <= exact + 1e-12
    assert exact <= r.value + r.cert_error


def test_truncated_tail_failure():
    with pytest.raises(ToleranceError):
        operator_norm(KernelSpec.trapezoid(2.0), 2, GridSpec(truncation=100), method="truncated")
    with pytest.raises(ParameterError):
        operator_norm(KernelSpec.trapezoid(math.sqrt(2)), 2, method="lattice")


def test_periodicity():
    k = KernelSpec.trapezoid(2.0)
    t = np.linspace(0, 1, 50)
    for L in (1.5, 2.0, 1.25):
        a, _ = lattice_sum(k, L, t)
        b, _ = lattice_sum(k, L, t + 1 / L)
        c, _ = lattice_sum(k, L, t + 7 / L)
        assert np.max(np.abs(a - b)) < 1e-12 and np.max(np.abs(a - c)) < 1e-11


@pytest.mark.parametrize("n,m", [(1, 1), (2, 1), (3, 1)])
def test_equals_c2_new_for_integer_m(n, m):
    rate = RationalRate(n, m)
    norm = operator_norm(KernelSpec.trapezoid(float(rate.leps)), float(rate.L))
    assert norm.value == pytest.approx(c2_new_bound(rate).value, abs=1e-6)


@pytest.mark.parametrize("n", [1, 2])
def test_equals_full_period_bound_for_half_m(n):
    rate = RationalRate(n, Fraction(1, 2))
    norm = operator_norm(KernelSpec.trapezoid(float(rate.leps)), float(rate.L))
    assert norm.value == pytest.approx(c2_new_bound(rate, window="period").value, abs=1e-6)


@pytest.mark.parametrize("leps", [1.5, 2.0, 3.0])
def test_below_sota(leps):
    r = operator_norm(KernelSpec.trapezoid(leps), leps)
    assert r.value <= c2_sota_bound(leps).value + r.cert_error


@pytest.mark.parametrize("leps,L", [(1.5, 1.25), (2.0, 1.5), (3.0, 2.0), (1.5, 1.5)])
def test_refinement_never_increases_norm(leps, L):
    k = KernelSpec.trapezoid(leps)
    vals = [operator_norm(k, j * L).value for j in (1, 2, 3, 4)]
    for j in range(1, 4):
        assert vals[j] <= vals[0] + 1e-8
    assert vals[3] <= vals[1] + 1e-8


def test_bandwidth_invariance():
    ref = operator_norm(KernelSpec.trapezoid(2.5), 1.75).value
    for B in (1.0, 10.0):
        assert operator_norm(KernelSpec.trapezoid(2.5, B=B), 1.75).value == \
            pytest.approx(ref, abs=1e-9)


def test_layered_and_triangle():
    f = LayeredFilter((math.pi, 1.5 * math.pi, 2 * math.pi), (1.0, 0.5, 0.0))
    r = operator_norm(KernelSpec.layered(f), 2)
    parts = [operator_norm(KernelSpec.trapezoid(e), 2).value for e in (1.5, 2.0)]
    assert r.value <= 0.5 * sum(parts) + r.cert_error
    # the nonnegative triangle kernel sums to exactly one at its own rate
    assert operator_norm(KernelSpec.triangle(2), 1).value == pytest.approx(1.0, abs=1e-9)


def test_reconstruct_constant():
    M = 100_000
    x = np.ones(2 * M + 1)
    t = np.linspace(-3, 3, 13)
    r = reconstruct(x, KernelSpec.trapezoid(3.0), 2, t, first_index=-M)
    assert np.all(np.abs(r.value - 1) <= r.tail_bound)
    assert np.max(r.tail_bound) < 1e-3


def test_reconstruct_extremal_signal():
    L = 2
    M = 1_000_000
    l = np.arange(-M, M + 1)
    f = lambda t: np.cos(np.pi * (t - 0.25)) / np.cos(np.pi / 4)
    r = reconstruct(f(l / L), KernelSpec.trapezoid(3.0), L, 0.25, first_index=-M)
    assert r.value == pytest.approx(math.sqrt(2), abs=1e-6)


def test_reconstruct_is_linear():
    rng = np.random.default_rng(4)
    x, y = rng.standard_normal(301), rng.standard_normal(301)
    k, t = KernelSpec.trapezoid(2.0), np.linspace(-10, 10, 17)
    lhs = reconstruct(2.5 * x - 0.5 * y, k, 1.5, t, first_index=-150).value
    rhs = 2.5 * reconstruct(x, k, 1.5, t, first_index=-150).value - \
        0.5 * reconstruct(y, k, 1.5, t, first_index=-150).value
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_reconstruct_preconditions():
    with pytest.raises(PreconditionError):
        reconstruct(np.ones(5), KernelSpec.trapezoid(3.0), 1.5, 0.0)
    with pytest.raises(PreconditionError):
        reconstruct(np.ones(5), KernelSpec.triangle(1), 2.0, 0.0)
    r = reconstruct(np.ones(5), KernelSpec.trapezoid(3.0), 1.5, 0.0, allow_ftn=True)
    assert math.isfinite(r.value)


def test_shannon():
    x = np.zeros(21)
    x[10] = 1.0
    assert shannon_reconstruct(x, math.pi, 0.0, 10, first_index=-10).value == 1.0
    for k in (1, -3, 7):
        assert abs(shannon_reconstruct(x, math.pi, float(k), 10, first_index=-10).value) < 1e-15
    M = 10_000
    l = np.arange(-M, M + 1)
    f = lambda t: np.sin(np.pi * t / 2 + 0.3)
    r = shannon_reconstruct(f(l), math.pi, np.array([0.3, 1.7, -2.2]), M, first_index=-M)
    assert r.terms == 2 * M + 1
    assert np.max(np.abs(r.value - f(np.array([0.3, 1.7, -2.2])))) < 1e-3
