"""Functional equation on Z_q: verification, enumeration, classification,
the divisibility solver, hyperbola counts, periodicity detection."""

import random

import pytest

from liouville_lab.arith import liouville
from liouville_lab.funceq import (
    InsufficientData,
    ModulusTooLarge,
    PreconditionViolated,
    PsiTable,
    WrongResidueClass,
    character_family_psi,
    classify_solution,
    detect_recurrence_periodicity,
    enumerate_solutions,
    falsify_periodicity,
    functional_equation_violation,
    hyperbola_point_count,
    satisfies_functional_equation,
    solve_divisibility,
)
from liouville_lab.polynomial import parse_polynomial
from liouville_lab.sieve import lambda_poly_range


def test_psi_table_basics():
    t = PsiTable.parse("+,-,-")
    assert t.values == (1, -1, -1)
    assert t.q == 3 and t.is_primitive
    assert PsiTable((1, 1, 1, 1)).minimal_period() == 1
    assert PsiTable((1, -1, 1, -1)).minimal_period() == 2
    with pytest.raises(ValueError):
        PsiTable((1, 0))


def test_constant_table_satisfies():
    for q in (1, 2, 3, 4, 6, 9):
        assert satisfies_functional_equation(PsiTable((1,) * q))


def test_character_table_satisfies():
    assert satisfies_functional_equation(character_family_psi(3, 0, 1))


def test_violation_reported():
    witness = functional_equation_violation(PsiTable((1, 1, -1)))
    assert witness is not None
    x, y, z = witness
    assert 0 <= min(witness) and max(witness) < 3


def test_three_variable_product_identity():
    # (x^2+1)(y^2+1)(z^2+1) = (xyz-x-y-z)^2 + (xy+yz+zx-1)^2, the identity
    # behind the whole equation
    rng = random.Random(2)
    for _ in range(200):
        x, y, z = (rng.randrange(-50, 51) for _ in range(3))
        lhs = (x * x + 1) * (y * y + 1) * (z * z + 1)
        rhs = (x * y * z - x - y - z) ** 2 + (x * y + y * z + z * x - 1) ** 2
        assert lhs == rhs


def test_enumerate_small_q():
    assert [rec.table.values for rec in enumerate_solutions(1)] == [(1,)]
    sols3 = {rec.table.values for rec in enumerate_solutions(3)}
    assert sols3 == {(1, 1, 1), (1, -1, -1)}
    rec = next(r for r in enumerate_solutions(3) if r.primitive)
    assert (rec.character_modulus, rec.r, rec.sign) == (3, 0, 1)


def test_enumerate_q5_no_primitive():
    sols = enumerate_solutions(5)
    assert [rec.table.values for rec in sols] == [(1, 1, 1, 1, 1)]


def test_enumerate_guard():
    with pytest.raises(ModulusTooLarge):
        enumerate_solutions(25)


def test_enumeration_matches_family_for_valid_q():
    # Necessity and sufficiency at desk scale: for q with every prime factor
    # = 3 (mod 4), squarefree and odd, the solution set with psi(0) = 1 is
    # exactly the induced character family.
    for q in (1, 3, 7, 11, 21):
        got = {rec.table.values for rec in enumerate_solutions(q)}
        expected = set()
        for qc in range(1, q + 1):
            if q % qc:
                continue
            try:
                fam = character_family_psi(qc, 0, 1)
            except Exception:
                continue
            expected.add(tuple(fam.value(x) for x in range(q)))
        assert got == expected


def test_enumeration_even_q_parity_family():
    sols = {rec.table.values for rec in enumerate_solutions(2)}
    assert sols == {(1, 1), (1, -1)}
    rec = next(r for r in enumerate_solutions(2) if r.table.values == (1, -1))
    assert (rec.character_modulus, rec.r, rec.sign) == (1, 1, 1)


def test_enumeration_prime_square_modulus_has_no_primitive():
    for q in (9, 18):
        assert all(not rec.primitive for rec in enumerate_solutions(q))


def test_enumeration_no_primitive_when_1_mod_4_prime_divides():
    for q in (5, 10, 13, 15, 17, 20):
        assert all(not rec.primitive for rec in enumerate_solutions(q)), q


def test_character_family_sufficiency():
    # every family member solves the equation at its own period, r twists included
    for qc in (1, 3, 7, 11, 19):
        for sign in (-1, 1):
            for r in (0, 1):
                assert satisfies_functional_equation(character_family_psi(qc, r, sign))


def test_even_q_primitives_reduce_after_parity_twist():
    # 4 | q: any primitive solution times some (-1)^(rx) becomes q/2-periodic
    for q in (4, 8, 12, 20, 24):
        for rec in enumerate_solutions(q):
            if not rec.primitive:
                continue
            vals = rec.table.values
            reduced = False
            for r in (0, 1):
                twisted = tuple(vals[x] * (-1) ** (r * x % 2) for x in range(q))
                if all(twisted[x] == twisted[x % (q // 2)] for x in range(q)):
                    reduced = True
            assert reduced


def test_primitive_solutions_are_even_functions():
    for q in (3, 7, 11, 21, 19):
        for rec in enumerate_solutions(q):
            if rec.primitive:
                vals = rec.table.values
                assert all(vals[x] == vals[(-x) % q] for x in range(q))


def test_classify_examples():
    assert classify_solution(PsiTable((1,))) == (1, 0, 1)
    assert classify_solution(PsiTable((1, -1, -1))) == (3, 0, 1)
    assert classify_solution(character_family_psi(7, 0, 1)) == (7, 0, 1)
    with pytest.raises(PreconditionViolated):
        classify_solution(PsiTable((1, 1, -1)))


def test_classify_negative_sign():
    flipped = PsiTable(tuple(-v for v in character_family_psi(3, 0, 1).values))
    assert classify_solution(flipped) == (3, 0, -1)


def _random_admissible(rng, q):
    import math

    while True:
        a = tuple(rng.randrange(q) for _ in range(3))
        big_a = 4 * (a[0] * a[1] + a[1] * a[2] + a[2] * a[0])
        if math.gcd(big_a - 1, q) == 1:
            return a


def test_solve_divisibility_trivial_family():
    x1, x2, x3 = solve_divisibility(7, 2, 5, 0, 25)
    assert (x1 + x2) % 7 == 0 and x2 == -x1
    num = 4 * x1 * x2 * x3 - x1 - x2 - x3
    den = 4 * (x1 * x2 + x2 * x3 + x3 * x1) - 1
    assert num % den == 0


def test_solve_divisibility_examples():
    for q, a, c in ((3, (1, 1, 1), 10), (5, (1, 2, 3), 100)):
        x1, x2, x3 = solve_divisibility(q, *a, c)
        assert all(abs(x) >= c for x in (x1, x2, x3))
        assert (x1 % q, x2 % q, x3 % q) == a
        num = 4 * x1 * x2 * x3 - x1 - x2 - x3
        den = 4 * (x1 * x2 + x2 * x3 + x3 * x1) - 1
        assert num % den == 0


def test_solve_divisibility_gcd_precondition():
    with pytest.raises(PreconditionViolated):
        solve_divisibility(5, 1, 1, 4, 10)  # 4*(1+4+4) - 1 = 35 shares 5 with q


def test_solve_divisibility_random_grid():
    rng = random.Random(99)
    for q in (3, 7, 11, 15, 19, 21):
        for _ in range(20):
            a = _random_admissible(rng, q)
            x = solve_divisibility(q, *a, 10)
            assert all(abs(v) >= 10 for v in x)
            assert tuple(v % q for v in x) == a


def test_hyperbola_counts():
    assert hyperbola_point_count(3) == 1
    assert hyperbola_point_count(7) == 3
    assert hyperbola_point_count(11) == 5
    with pytest.raises(WrongResidueClass):
        hyperbola_point_count(13)


def test_detect_alternating():
    assert detect_recurrence_periodicity([1, -1] * 8, 1) == (0, 2)


def test_detect_multiplicative_recurrence():
    seq = [1, -1]
    for _ in range(40):
        seq.append(seq[-1] * seq[-2])
    assert detect_recurrence_periodicity(seq, 2) == (0, 3)


def test_detect_with_preperiod():
    seq = [1, 1, 1, -1] + [1, -1, -1] * 20
    pre, period = detect_recurrence_periodicity(seq, 2)
    assert period == 3
    assert all(seq[i] == seq[i + 3] for i in range(pre, len(seq) - 3))


def test_detect_insufficient_data():
    with pytest.raises(InsufficientData):
        detect_recurrence_periodicity([1, -1, 1], 3)


def test_detect_lambda_quadratic_not_periodic():
    lam = lambda_poly_range(parse_polynomial("x^2+1"), 1, 10**4).tolist()
    assert detect_recurrence_periodicity(lam, 5, max_period=100) is None


def test_falsify_examples():
    rows = falsify_periodicity(parse_polynomial("x^2+1"), 2, 10)
    by_key = {(w.modulus, w.phase): (w.n1, w.n2) for w in rows}
    assert by_key[(1, 0)] == (1, 3)  # lambda(2) = -1, lambda(10) = +1
    assert by_key[(2, 0)] == (2, 8)  # lambda(5) = -1, lambda(65) = +1
    assert liouville(5) == -1 and liouville(65) == 1


def test_falsify_square_has_no_witness():
    rows = falsify_periodicity(parse_polynomial("x^2"), 3, 30)
    assert all(w.n1 is None for w in rows)


def test_falsify_requires_headroom():
    with pytest.raises(ValueError):
        falsify_periodicity(parse_polynomial("x^2+1"), 20, 30)
