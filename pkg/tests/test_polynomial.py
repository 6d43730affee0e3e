"""Integer polynomials: parsing, evaluation, square detection, roots mod p."""

import random

import pytest

from liouville_lab.polynomial import (
    DegenerateQuadratic,
    IntPolynomial,
    UnsupportedDegree,
    is_non_square,
    parse_polynomial,
    poly_square_root,
    quadratic_discriminant,
    roots_mod_p,
)
from liouville_lab.sieve import primes_up_to


def test_parse_both_formats():
    assert parse_polynomial("x^2+1").coeffs == (1, 0, 1)
    assert parse_polynomial("1,0,1").coeffs == (1, 0, 1)
    assert parse_polynomial("2x^3-4x+7").coeffs == (7, -4, 0, 2)
    assert parse_polynomial("-x^2+3").coeffs == (3, 0, -1)
    assert parse_polynomial("x").coeffs == (0, 1)
    for bad in ("x/2", "1.5,2", "x^2+0.5", ""):
        with pytest.raises(ValueError):
            parse_polynomial(bad)


def test_eval_examples():
    assert parse_polynomial("x^2+1")(4) == 17
    assert parse_polynomial("x^3+2x")(3) == 33
    assert parse_polynomial("x^4+2")(2) == 18


def test_eval_exact_bignum():
    p = parse_polynomial("x^3+2x")
    n = 10**30
    assert p(n) == n**3 + 2 * n


def test_is_non_square_examples():
    assert not is_non_square(parse_polynomial("x^2"))
    assert not is_non_square(parse_polynomial("2x^2"))
    assert is_non_square(parse_polynomial("x^2+x"))
    assert not is_non_square(parse_polynomial("-x^2-1"))  # negative lead
    assert not is_non_square(parse_polynomial("4"))  # constants are c*1^2


def test_is_non_square_random_squares():
    rng = random.Random(23)
    for _ in range(300):
        q = IntPolynomial.from_coeffs(
            [rng.randrange(-10, 11) for _ in range(rng.randrange(1, 4))] + [rng.randrange(1, 11)]
        )
        c = rng.randrange(1, 11)
        assert not is_non_square((q * q).scale(c))


def test_is_non_square_random_squarefree_products():
    rng = random.Random(29)
    for _ in range(300):
        roots = rng.sample(range(-12, 13), rng.randrange(1, 4))
        poly = IntPolynomial((1,))
        for r in roots:
            poly = poly * IntPolynomial((-r, 1))
        assert is_non_square(poly)


def test_poly_square_root_roundtrip():
    q = parse_polynomial("3x^2-2x+5")
    assert poly_square_root(q * q) == q.scale(-1) or poly_square_root(q * q) == q
    assert poly_square_root(parse_polynomial("x^2+1")) is None


def test_quadratic_discriminant():
    assert quadratic_discriminant(1, 0, -1) == 4
    assert quadratic_discriminant(1, 0, 2) == -8
    assert quadratic_discriminant(4, -8, -1) == 80  # (8n)^2 + 16 at n = 1
    with pytest.raises(DegenerateQuadratic):
        quadratic_discriminant(0, 1, 1)


def test_roots_mod_p_examples():
    p = parse_polynomial("x^2+1")
    assert roots_mod_p(p, 2) == [1]
    assert roots_mod_p(p, 5) == [2, 3]
    assert roots_mod_p(p, 3) == []


def test_roots_mod_p_agrees_with_exhaustion():
    rng = random.Random(31)
    primes = [int(v) for v in primes_up_to(499)]
    for _ in range(120):
        coeffs = [rng.randrange(-50, 51) for _ in range(rng.randrange(2, 6))]
        if all(c == 0 for c in coeffs):
            coeffs[-1] = 1
        poly = IntPolynomial.from_coeffs(coeffs)
        if poly.is_zero:
            poly = IntPolynomial((1,))
        p = rng.choice(primes)
        expected = [r for r in range(p) if poly(r) % p == 0]
        assert roots_mod_p(poly, p) == expected


def test_roots_mod_p_requires_prime_modulus():
    from liouville_lab.arith import NotPrime

    with pytest.raises(NotPrime):
        roots_mod_p(parse_polynomial("x^2+1"), 15)


def test_roots_mod_p_large_prime_paths():
    big = 2**31 - 1  # Mersenne prime above the exhaustion cutoff
    lin = parse_polynomial("3x+5")
    (root,) = roots_mod_p(lin, big)
    assert (3 * root + 5) % big == 0
    quad = parse_polynomial("x^2+1")
    for r in roots_mod_p(quad, big):
        assert (r * r + 1) % big == 0
    with pytest.raises(UnsupportedDegree):
        roots_mod_p(parse_polynomial("x^3+2"), big)


def test_roots_mod_p_split_density_sanity():
    # average root count of x^2 - D over primes hovers around 1 (report-style)
    primes = [int(v) for v in primes_up_to(3000)[2:]]
    for d in (2, 3, 5):
        poly = IntPolynomial((-d, 0, 1))
        avg = sum(len(roots_mod_p(poly, p)) for p in primes) / len(primes)
        assert abs(avg - 1.0) < 0.25
