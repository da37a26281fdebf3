"""Acceptance suite: one test group per criterion, at the stated tolerances.

A per-criterion PASS/FAIL summary is printed at the end of the run.
"""

import io
import math
import time
from contextlib import redirect_stdout
from fractions import Fraction

import numpy as np
import pytest

from overshoot import cli
from overshoot.bounds import (RationalRate, best_upper_bound, c1_corollary_bound, c1_cos_bound,
                              c1_sqrt_bound, c2_new_bound, c2_sota_bound,
                              layered_overshoot_bound)
from overshoot.errors import PreconditionError
from overshoot.kernels import KernelSpec, LayeredFilter, lemma1_sum
from overshoot.l1norm import kernel_l1
from overshoot.opnorm import operator_norm, reconstruct
from overshoot.verify import extremal_check, lp_c1_trig, monte_carlo_lower_bound

from oracles import dense_max, phi_exp

HALF = Fraction(1, 2)


@pytest.mark.criterion(1, "closed-form anchor sqrt(2)")
def test_c1_closed_form_anchor(record_property):
    r2 = math.sqrt(2)
    vals = [c1_cos_bound(2).value, c1_sqrt_bound(2).value, c2_sota_bound(3).value]
    record_property("detail", f"values {vals}")
    for v in vals:
        assert abs(v - r2) < 1e-12


@pytest.mark.criterion(2, "operator norm equals c2_new_bound within 1e-6")
@pytest.mark.parametrize("n,m", [(1, 1), (2, 1), (3, 1), (1, HALF), (2, HALF)],
                         ids=["1-1", "2-1", "3-1", "1-half", "2-half"])
def test_c2_oracle_equivalence(n, m, record_property):
    rate = RationalRate(n, m)
    bound = c2_new_bound(rate).value
    norm = operator_norm(KernelSpec.trapezoid(float(rate.leps)), float(rate.L)).value
    record_property("detail", f"(n={n}, m={m}): c2_new={bound:.10f} opnorm={norm:.10f} "
                              f"diff={abs(norm - bound):.2e}")
    assert abs(norm - bound) < 1e-6


def test_c2_runtime():
    t0 = time.perf_counter()
    for n, m in [(1, 1), (2, 1), (3, 1), (1, HALF), (2, HALF)]:
        rate = RationalRate(n, m)
        c2_new_bound(rate)
        operator_norm(KernelSpec.trapezoid(float(rate.leps)), float(rate.L))
    assert time.perf_counter() - t0 < 30


@pytest.mark.criterion(3, "c2_new values against the dense-grid oracle")
def test_c3_new_bound_values(record_property):
    r11 = c2_new_bound(RationalRate(1, 1)).value
    rhalf = c2_new_bound(RationalRate(1, HALF)).value
    o11, _ = dense_max(lambda t: phi_exp(1, 2, t), -0.25, 0.25)
    ohalf, _ = dense_max(lambda t: phi_exp(1, 1, t), -0.25, 0.25)
    record_property("detail", f"(1,1) {r11:.12f} oracle {o11:.12f}; "
                              f"(1,1/2) {rhalf:.12f} oracle {ohalf:.12f}")
    assert abs(r11 - 1.5) < 1e-9
    assert abs(rhalf - 1.621234) < 1e-5
    assert abs(r11 - o11) < 1e-9
    assert abs(rhalf - ohalf) < 1e-9


@pytest.mark.criterion(4, "new bound strictly below c1_cos and c1_sqrt")
@pytest.mark.parametrize("L", [1.125, 1.2, 1.25, 1.333, 1.5])
def test_c4_strict_improvement(L, record_property):
    # 1.333 stands for 4/3
    rate = RationalRate.from_L(Fraction(L).limit_denominator(10))
    if rate.m == HALF:
        new = c1_corollary_bound(2 * rate.n).value
    else:
        new = c2_new_bound(rate).value
    old = min(c1_cos_bound(L).value, c1_sqrt_bound(L).value)
    record_property("detail", f"L={L} rate={rate}: new={new:.6f} < {old:.6f}")
    assert new < old


@pytest.mark.criterion(5, "triangle lattice sums equal 1/(an)")
def test_c5_triangle_lattice_sum():
    rng = np.random.default_rng(5)
    t0 = time.perf_counter()
    for n in (1, 2, 3):
        for a in (1.0, 1.5, 2.0):
            for t in rng.uniform(-20, 20, 100):
                r = lemma1_sum(n, a, t)
                assert abs(r.value - 1 / (a * n)) < r.tail_bound + 1e-8
    assert time.perf_counter() - t0 < 5


@pytest.mark.criterion(6, "triangle L1 norm is one")
@pytest.mark.parametrize("B", [1.0, math.pi, 10.0])
def test_c6_triangle_l1(B):
    r = kernel_l1(KernelSpec.triangle(1, B=B))
    assert abs(r.value - 1) < 1e-6


@pytest.mark.criterion(7, "sandwich: Monte Carlo <= LP <= best upper bound")
@pytest.mark.parametrize("N,N1", [(1, 4), (2, 6), (4, 12)])
def test_c7_sandwich(N, N1, record_property):
    mc = monte_carlo_lower_bound(N, N1, trials=2000, seed=7)
    lp = lp_c1_trig(N, N1)
    ub = best_upper_bound(N1 / (2 * N))
    record_property("detail", f"(N={N}, N1={N1}): mc={mc.ratio:.6f} lp={lp.value:.9f} "
                              f"upper={ub.value:.9f} ({ub.method})")
    assert mc.ratio <= lp.value + lp.slack + 1e-9
    assert lp.value <= ub.value + ub.cert_error + 1e-9


@pytest.mark.criterion(8, "extremal signal ratio 1/cos(pi/(2L))")
def test_c8_extremal():
    for L in range(2, 17):
        r = extremal_check(L)
        assert abs(r.ratio - 1 / math.cos(math.pi / (2 * L))) < 1e-12


def _random_poly(rng, top):
    k = np.arange(9)
    w = top * k / 8
    a, b = rng.standard_normal(9), rng.standard_normal(9)
    return lambda t: np.cos(np.multiply.outer(t, w)) @ a + np.sin(np.multiply.outer(t, w)) @ b


@pytest.mark.criterion(9, "reconstruction exactness and precondition")
@pytest.mark.parametrize("leps,L", [(3.0, 2.0), (2.0, 1.5), (1.5, 1.25), (2.0, 2.0)])
def test_c9_reconstruction(leps, L):
    rng = np.random.default_rng(int(10 * leps + L))
    f = _random_poly(rng, 0.9 * math.pi)
    M = 200_000
    l = np.arange(-M, M + 1)
    x = f(l / L)
    t = rng.uniform(-5, 5, 100)
    got = reconstruct(x, KernelSpec.trapezoid(leps), L, t, first_index=-M).value
    assert np.max(np.abs(got - f(t))) < 1e-6


@pytest.mark.criterion(9, "reconstruction exactness and precondition")
def test_c9_precondition():
    with pytest.raises(PreconditionError):
        reconstruct(np.ones(11), KernelSpec.trapezoid(3.0), 1.9, 0.0)


@pytest.mark.criterion(10, "B-independence")
def test_c10_bandwidth_independence():
    filt = LayeredFilter((1.0, 2.0, 3.0), (1.0, 0.5, 0.0))
    ref = None
    for B in (1.0, math.pi, 10.0):
        scaled = LayeredFilter(tuple(B * w for w in filt.breakpoints), filt.amplitudes)
        vals = [layered_overshoot_bound(scaled, 2).value]
        for leps, L in [(3.0, 2.0), (2.0, 1.5), (1.5, 1.25), (2.5, 2.0)]:
            vals.append(operator_norm(KernelSpec.trapezoid(leps, B=B), L).value)
        vals.append(operator_norm(KernelSpec.triangle(2, B=B), 1.0).value)
        if ref is None:
            ref = vals
        assert np.max(np.abs(np.array(vals) - ref)) < 1e-9


def _run(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli.main(argv)
    return code, buf.getvalue()


@pytest.mark.criterion(11, "determinism of sweep and verify")
def test_c11_determinism(tmp_path):
    outs = []
    for jobs in ("1", "1", "4"):
        p = tmp_path / f"sweep_{len(outs)}.csv"
        code, _ = _run(["sweep", "--l-min", "1.05", "--l-max", "2.0", "--step", "0.05",
                        "--out", str(p), "--jobs", jobs])
        assert code == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1] == outs[2]

    runs = [_run(["verify", "--N", "2", "--N1", "6", "--trials", "1000", "--seed", "7",
                  "--workers", w]) for w in ("1", "1", "4")]
    assert runs[0] == runs[1] == runs[2]
    assert runs[0][0] == 0
