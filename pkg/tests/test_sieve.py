"""Sieve layer: exact lambda/Omega segments, polynomial value sieving against
the factorization oracle, smoothness counting, and the binary sign cache."""

import os

import numpy as np
import pytest

from liouville_lab.arith import is_probable_prime, liouville
from liouville_lab.polynomial import parse_polynomial
from liouville_lab.sieve import (
    FactorizationMismatch,
    RangeTooLarge,
    default_factor_split,
    is_smooth,
    lambda_poly_range,
    lambda_range,
    poly_sieve_detail,
    property_s_density,
    read_sign_cache,
    run_length_encode,
    write_sign_cache,
)

X2P1 = parse_polynomial("x^2+1")


def test_lambda_range_first_ten():
    assert lambda_range(1, 10).lambda_.tolist() == [1, -1, -1, 1, -1, 1, -1, -1, 1, 1]


def test_lambda_range_domain_starts_at_one():
    with pytest.raises(ValueError):
        lambda_range(0, 5)


def test_lambda_at_million():
    assert lambda_range(10**6, 10**6).lambda_.tolist() == [1]  # 2^6 5^6, Omega 12


def test_lambda_range_against_oracle():
    seg = lambda_range(1, 3000)
    for n in range(1, 3001):
        assert seg.lambda_[n - 1] == liouville(n)


def test_segment_independence():
    full = lambda_range(1, 2000).lambda_
    left = lambda_range(1, 997).lambda_
    right = lambda_range(998, 2000).lambda_
    assert np.array_equal(full, np.concatenate([left, right]))


def test_range_guard(monkeypatch):
    monkeypatch.setenv("LLAB_MAX_MEM", str(24 * 1000))
    with pytest.raises(RangeTooLarge):
        lambda_range(1, 2000)


def test_poly_range_examples():
    assert lambda_poly_range(X2P1, 1, 5).tolist() == [-1, -1, 1, -1, 1]
    # lambda(2), lambda(6), lambda(12) = -1, +1, -1
    assert lambda_poly_range(parse_polynomial("x^2+x"), 1, 3).tolist() == [-1, 1, -1]
    assert lambda_poly_range(parse_polynomial("x^4+2"), 1, 1).tolist() == [-1]


def test_poly_range_negative_and_zero_values():
    # x^2 - 4 vanishes at 2 and is negative at 1; lambda(0) = 1, even extension
    poly = parse_polynomial("x^2-4")
    got = lambda_poly_range(poly, 1, 5)
    assert got.tolist() == [liouville(n * n - 4) for n in range(1, 6)]
    assert got[1] == 1


def test_default_factor_split():
    assert default_factor_split(parse_polynomial("x^2+1")) is not None
    split = default_factor_split(parse_polynomial("x^3+2x"))
    assert split is not None and len(split) == 2
    assert default_factor_split(parse_polynomial("x^4+2")) is None


def test_factor_validation():
    quartic = parse_polynomial("x^2+1") * parse_polynomial("x^2+2x+2")
    with pytest.raises(FactorizationMismatch):
        lambda_poly_range(quartic, 1, 10, factors=[parse_polynomial("x^2+1")] * 2)
    with pytest.raises(FactorizationMismatch):
        lambda_poly_range(quartic, 1, 10, factors=[parse_polynomial("x^4+2"), parse_polynomial("1")])


def test_constant_multiplier_folded():
    poly = parse_polynomial("2x^2+2")
    got = lambda_poly_range(poly, 1, 50, factors=[parse_polynomial("x^2+1")])
    want = [liouville(2 * n * n + 2) for n in range(1, 51)]
    assert got.tolist() == want


FIXTURE_POLYS = [
    (parse_polynomial("x^2+1"), None),
    (parse_polynomial("x^2+x"), None),
    (
        parse_polynomial("x^2+1") * parse_polynomial("x^2+2x+2"),
        [parse_polynomial("x^2+1"), parse_polynomial("x^2+2x+2")],
    ),
    (parse_polynomial("x^3+2x"), None),
]


@pytest.mark.parametrize("poly,factors", FIXTURE_POLYS)
def test_oracle_equivalence_small(poly, factors):
    got = lambda_poly_range(poly, 1, 4000, factors=factors)
    want = np.array([liouville(poly(n)) for n in range(1, 4001)], dtype=np.int8)
    assert np.array_equal(got, want)


def test_per_value_path_range_guard():
    with pytest.raises(RangeTooLarge):
        lambda_poly_range(parse_polynomial("x^4+2"), 1, 10**5 + 10)


def test_huge_offset_falls_back_to_factorization():
    n0 = 10**16
    seg = lambda_range(n0, n0 + 15)
    assert seg.lambda_.tolist() == [liouville(n) for n in range(n0, n0 + 16)]
    got = lambda_poly_range(X2P1, 10**12, 10**12 + 5)
    assert got.tolist() == [liouville(n * n + 1) for n in range(10**12, 10**12 + 6)]


def test_detail_rejects_unsieveable_values():
    with pytest.raises(RangeTooLarge):
        poly_sieve_detail(X2P1, 10**12, 10**12 + 5)


def test_residuals_are_unit_or_prime():
    detail = poly_sieve_detail(X2P1, 1, 2000)
    for r in detail.residual:
        r = int(r)
        assert r == 1 or (r > detail.prime_bound and is_probable_prime(r))
    # omega + residual indicator reassembles Omega(P(n))
    from liouville_lab.arith import factorize

    for i, n in enumerate(range(1, 2001)):
        omega = int(detail.omega_acc[i]) + (1 if int(detail.residual[i]) > 1 else 0)
        assert omega == factorize(n * n + 1).omega


def test_sign_balance_fixture_consecutive_pairs():
    lam = lambda_poly_range(parse_polynomial("x^2+x"), 1, 10**6)
    plus = int((lam == 1).sum())
    assert (plus, 10**6 - plus) == (499446, 500554)


def test_is_smooth():
    assert is_smooth(8, 2)
    assert not is_smooth(10, 3)
    assert not is_smooth(10001, 100)
    assert is_smooth(1, 1)
    assert not is_smooth(2, 1)


def test_property_s_density_examples():
    from fractions import Fraction

    assert property_s_density(parse_polynomial("x"), 1, 1, 100) == 1
    assert property_s_density(X2P1, 1, 1, 10) == Fraction(1, 10)
    assert property_s_density(X2P1, 2, 1, 1000) == Fraction(103, 1000)


def test_property_s_density_brute_force_agreement():
    from fractions import Fraction
    from liouville_lab.arith import factorize

    count = 0
    for n in range(2, 301, 3):
        val = n * n + 1
        if val > 1 and max(p for p, _ in factorize(val).factors) <= n:
            count += 1
    assert property_s_density(X2P1, 3, 2, 300) == Fraction(count, 300)


def test_run_length_encode():
    assert run_length_encode([1, 1, 1, -1, -1, 1]) == "+3-2+1"
    assert run_length_encode([]) == ""


def test_sign_cache_roundtrip(tmp_path):
    lam = lambda_range(1, 137).lambda_
    path = os.fspath(tmp_path / "signs.llab")
    write_sign_cache(path, lam)
    with open(path, "rb") as fh:
        header = fh.read(8)
    assert header[:4] == b"LLAB"
    assert int.from_bytes(header[4:6], "little") == 1
    back = read_sign_cache(path)
    assert np.array_equal(back, lam)


def test_sign_cache_rejects_garbage(tmp_path):
    path = os.fspath(tmp_path / "bad.bin")
    with open(path, "wb") as fh:
        fh.write(b"NOPE\x01\x00\x00\x00")
    with pytest.raises(ValueError):
        read_sign_cache(path)
