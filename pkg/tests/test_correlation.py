"""Correlation averages, Gowers norms, discrepancy, the exponential-sum
inequality, and the sin-margin constant."""

import math
import random

import numpy as np
import pytest

from liouville_lab.correlation import (
    CorrelationSpec,
    CostGuard,
    correlation_average,
    correlation_running,
    cyclic_block_weights,
    delta_for_q,
    erdos_turan_discrepancy,
    fourier_indicator_expand,
    gowers_norm,
    is_cyclic_block,
    max_exp_sum_check,
)
from liouville_lab.multfn import CONSTANT_ONE, LIOUVILLE, omega_mod_fn
from liouville_lab.sieve import lambda_range


def test_constant_function_mean_is_one():
    spec = CorrelationSpec((CONSTANT_ONE,), (1,), (0,), 500)
    assert correlation_average(spec) == 1


def test_spec_validation():
    with pytest.raises(ValueError):
        CorrelationSpec((), (), (), 10)
    with pytest.raises(ValueError):
        CorrelationSpec((LIOUVILLE,), (0,), (1,), 10)
    with pytest.raises(ValueError):
        CorrelationSpec((LIOUVILLE,), (1,), (1,), 10, kind="median")


def test_linear_independence_flag():
    dep = CorrelationSpec((LIOUVILLE,) * 2, (1, 2), (1, 2), 10)
    indep = CorrelationSpec((LIOUVILLE,) * 2, (1, 1), (0, 1), 10)
    assert not dep.linearly_independent
    assert indep.linearly_independent


def test_correlation_matches_direct_small():
    from liouville_lab.arith import liouville

    spec = CorrelationSpec((LIOUVILLE,) * 2, (2, 3), (1, -5), 400)
    want = sum(liouville(2 * n + 1) * liouville(3 * n - 5) for n in range(1, 401)) / 400
    got = correlation_average(spec)
    assert abs(got - want) < 1e-12


def test_correlation_log_matches_direct_small():
    from liouville_lab.arith import liouville

    spec = CorrelationSpec((LIOUVILLE,), (1,), (1,), 300, kind="log")
    num = sum(liouville(n + 1) / n for n in range(1, 301))
    den = sum(1 / n for n in range(1, 301))
    assert abs(correlation_average(spec) - num / den) < 1e-12


def test_correlation_order4_function():
    g = omega_mod_fn(4)
    spec = CorrelationSpec((g,), (1,), (0,), 2000)
    from liouville_lab.arith import factorize

    want = (
        sum(1j ** (factorize(n).omega % 4) for n in range(1, 2001)) / 2000
    )
    assert abs(correlation_average(spec) - want) < 1e-9


def test_liouville_mean_small_at_million():
    spec = CorrelationSpec((LIOUVILLE,), (1,), (0,), 10**6)
    assert abs(correlation_average(spec)) < 0.01


def test_two_point_small_at_million():
    spec = CorrelationSpec((LIOUVILLE,) * 2, (1, 1), (0, 1), 10**6)
    assert abs(correlation_average(spec)) < 0.05


def test_running_profile_shape():
    spec = CorrelationSpec((LIOUVILLE,), (1,), (0,), 10**4)
    ns, means = correlation_running(spec, points=50)
    assert len(ns) == len(means) <= 50
    assert (means <= 1 + 1e-12).all()


def test_gowers_constant_is_one():
    for k in (1, 2, 3):
        assert abs(gowers_norm(np.ones(64), k) - 1.0) < 1e-9


def test_gowers_linear_phase_full_u2():
    alpha = 0.6180339887498949
    f = np.exp(2j * np.pi * alpha * np.arange(1, 513))
    assert abs(gowers_norm(f, 2) - 1.0) < 1e-6


def test_gowers_modulation_invariance():
    rng = np.random.default_rng(12)
    f = np.exp(2j * np.pi * rng.random(256))
    alpha, beta = 0.137, 0.7431
    ns = np.arange(1, 257)
    for k in (2, 3):
        phase = np.exp(2j * np.pi * (alpha * ns + (beta * ns * ns if k == 3 else 0)))
        assert abs(gowers_norm(f * phase, k) - gowers_norm(f, k)) < 1e-6


def test_gowers_lambda_fixture():
    lam = lambda_range(1, 4096).lambda_.astype(complex)
    val = gowers_norm(lam, 2)
    assert abs(val - 0.16204370819834793) < 1e-9
    assert val < 0.35  # far from the trivial bound 1


def test_gowers_monotone_in_k():
    rng = np.random.default_rng(3)
    for _ in range(3):
        f = np.exp(2j * np.pi * rng.random(128)) * rng.random(128)
        u1, u2, u3 = (gowers_norm(f, k) for k in (1, 2, 3))
        assert u1 <= u2 + 1e-9 <= u3 + 2e-9


def test_gowers_guards():
    with pytest.raises(CostGuard):
        gowers_norm(np.ones(10**4 + 1), 3)
    with pytest.raises(ValueError):
        gowers_norm(2.0 * np.ones(16), 2)
    with pytest.raises(ValueError):
        gowers_norm(np.ones(16), 4)


def test_erdos_turan_grid():
    res = erdos_turan_discrepancy(np.arange(100) / 100.0, 30)
    assert res.star_discrepancy <= 0.011
    assert res.bound >= res.star_discrepancy


def test_erdos_turan_constant_sequence():
    res = erdos_turan_discrepancy(np.zeros(60), 25)
    assert res.star_discrepancy == 1.0
    assert res.bound >= 1.0


def test_erdos_turan_golden_rotation():
    phi = (1 + 5**0.5) / 2
    pts = (np.arange(1, 1001) * phi) % 1.0
    res = erdos_turan_discrepancy(pts, 40)
    assert res.bound >= res.star_discrepancy


def test_erdos_turan_dominates_on_random_data():
    rng = np.random.default_rng(4)
    for _ in range(10):
        pts = rng.random(rng.integers(10, 400))
        res = erdos_turan_discrepancy(pts, int(rng.integers(1, 60)))
        assert res.bound >= res.star_discrepancy


def test_max_exp_sum_basic():
    res = max_exp_sum_check(4, 2, 3000, seed=1)
    assert res.ok
    assert abs(res.rhs - math.sqrt(2)) < 1e-12
    assert res.max_lhs <= res.rhs + 1e-9


def test_max_exp_sum_projection_properties():
    res = max_exp_sum_check(9, 4, 500, seed=2)
    w = res.argmax_weights
    assert w.min() >= -1e-12 and w.max() <= 1 + 1e-12
    assert abs(w.sum() - 4) < 1e-9


def test_max_exp_sum_block_equality():
    for n, m, rot in ((7, 3, 2), (12, 5, 0), (10, 10, 4)):
        w = cyclic_block_weights(n, m, rot)
        roots = np.exp(2j * np.pi * np.arange(1, n + 1) / n)
        lhs = abs(w @ roots)
        rhs = abs(roots[:m].sum())
        assert abs(lhs - rhs) < 1e-12
        assert is_cyclic_block(w)
    assert not is_cyclic_block([0.5, 0.5, 1.0])
    assert not is_cyclic_block([1.0, 0.0, 1.0, 0.0])


def test_max_exp_sum_full_weight_vanishes():
    res = max_exp_sum_check(6, 6, 50, seed=0)
    assert res.rhs < 1e-12 and res.max_lhs < 1e-9


def test_delta_examples():
    assert abs(delta_for_q(2) - (1 - 2 / math.pi) / 2) < 1e-15
    assert abs(delta_for_q(4) - 0.04984184192144697) < 1e-12
    assert abs(delta_for_q(100) - math.pi**2 / (12 * 100**2)) / delta_for_q(100) < 0.01


def test_delta_positive_decreasing():
    vals = [delta_for_q(q) for q in range(2, 1001)]
    assert all(v > 0 for v in vals)
    assert all(a > b for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        delta_for_q(1)


def test_fourier_indicator_trivial():
    d, e = fourier_indicator_expand(4, 1, [1, 1, 1, 1])
    assert d == e == 0
    d, e = fourier_indicator_expand(4, 1, [0, 2, 3])
    assert d == e == 1


def test_fourier_indicator_random_agreement():
    rng = random.Random(6)
    for q in (2, 3, 4, 6):
        samples = [rng.randrange(q) for _ in range(1000)]
        v = rng.randrange(q)
        d, e = fourier_indicator_expand(q, v, samples)
        assert d == e


def test_three_point_desk_echo():
    spec = CorrelationSpec((LIOUVILLE,) * 3, (1, 1, 1), (0, 1, 2), 10**6)
    assert abs(correlation_average(spec)) <= 1 - 2 * delta_for_q(2)
