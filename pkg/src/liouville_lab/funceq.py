"""The three-variable functional equation for sign patterns on Z_q.

A table psi: Z_q -> {-1,+1} is tested against

    psi(x) psi(y) psi(z) = psi((4xyz - x - y - z) / (4(xy + yz + zx) - 1))

for all triples whose denominator is invertible mod q. Solutions are
enumerated exactly (each triple is one GF(2) parity constraint, so the
solution set is the kernel of a bit matrix), classified against the
character family sign * (-1)^(r x) * chi(4x^2 + 1), and complemented by the
constructive solver for the divisibility relation that transfers the
equation from Z_q to the integers, hyperbola point counts, and periodicity
detection/falsification for recurrence-generated sign sequences.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .arith import NotPrime, crt_combine, is_probable_prime, jacobi, sqrt_mod_prime
from .multfn import BadModulus
from .polynomial import IntPolynomial
from .sieve import lambda_poly_range

logger = logging.getLogger(__name__)

ENUMERATION_LIMIT = 24


class ModulusTooLarge(ValueError):
    """Raised when exhaustive enumeration is requested beyond the guard."""


class PreconditionViolated(ValueError):
    """Raised when an input fails a documented precondition."""


class SearchExhausted(RuntimeError):
    """Raised when the prime search in the divisibility solver hits its bound."""


class WrongResidueClass(ValueError):
    """Raised for a prime in the wrong class mod 4."""


class InsufficientData(ValueError):
    """Raised when a sequence is too short for the pigeonhole argument."""


@dataclass(frozen=True)
class PsiTable:
    """A function Z_q -> {-1,+1} stored as a length-q tuple."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("period must be >= 1")
        if any(v not in (-1, 1) for v in self.values):
            raise ValueError("entries must be +-1")

    @property
    def q(self) -> int:
        return len(self.values)

    def value(self, x: int) -> int:
        return self.values[x % self.q]

    def minimal_period(self) -> int:
        for d in sorted(_divisors(self.q)):
            if all(self.values[x] == self.values[x % d] for x in range(self.q)):
                return d
        return self.q

    @property
    def is_primitive(self) -> bool:
        return self.minimal_period() == self.q

    @classmethod
    def parse(cls, text: str) -> "PsiTable":
        vals = []
        for tok in text.replace(" ", "").split(","):
            if tok in ("+", "+1", "1"):
                vals.append(1)
            elif tok in ("-", "-1"):
                vals.append(-1)
            else:
                raise ValueError(f"bad table entry {tok!r}")
        return cls(tuple(vals))


def _divisors(n: int) -> list[int]:
    out = []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            out.append(d)
            if d * d != n:
                out.append(n // d)
    return sorted(out)


def _all_factors_are_3_mod_4(n: int) -> bool:
    if n % 2 == 0:
        return False
    m, p = n, 3
    while p * p <= m:
        while m % p == 0:
            if p % 4 != 3:
                return False
            m //= p
        p += 2
    return m == 1 or m % 4 == 3


def character_family_psi(character_modulus: int, r: int, sign: int) -> PsiTable:
    """Table of sign * (-1)^(r x) * jacobi(4x^2+1, q) over one full period.

    The modulus must be odd, squarefree, with every prime factor = 3 (mod 4);
    then 4x^2+1 is never divisible by it and all entries are +-1. With r = 1
    the minimal period is 2q (the parity twist is not q-periodic for odd q).
    """
    q = character_modulus
    if q < 1 or q % 2 == 0:
        raise BadModulus(f"modulus must be odd and positive, got {q}")
    if not _all_factors_are_3_mod_4(q):
        raise BadModulus(f"{q} has a prime factor not congruent to 3 mod 4")
    if not all(e == 1 for _, e in _factor_pairs(q)):
        raise BadModulus(f"{q} is not squarefree")
    if r not in (0, 1):
        raise ValueError(f"r must be 0 or 1, got {r}")
    if sign not in (-1, 1):
        raise ValueError(f"sign must be +-1, got {sign}")
    period = q if r == 0 else 2 * q
    vals = []
    for x in range(period):
        chi = jacobi(4 * x * x + 1, q)
        assert chi != 0
        vals.append(sign * (-1) ** (r * x % 2) * chi)
    return PsiTable(tuple(vals))


def _factor_pairs(n: int) -> list[tuple[int, int]]:
    out = []
    m, p = n, 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


def _equation_triples(q: int):
    for x in range(q):
        for y in range(q):
            xy = x * y
            for z in range(q):
                den = (4 * (xy + y * z + z * x) - 1) % q
                if math.gcd(den, q) != 1:
                    continue
                num = (4 * x * y * z - x - y - z) % q
                w = num * pow(den, -1, q) % q if q > 1 else 0
                yield x, y, z, w


def functional_equation_violation(psi: PsiTable) -> Optional[tuple[int, int, int]]:
    """First triple (x, y, z) violating the equation, or None."""
    vals = psi.values
    for x, y, z, w in _equation_triples(psi.q):
        if vals[x] * vals[y] * vals[z] != vals[w]:
            return (x, y, z)
    return None


def satisfies_functional_equation(psi: PsiTable) -> bool:
    return functional_equation_violation(psi) is None


@dataclass(frozen=True)
class SolutionRecord:
    """One solution with its induction and character-family annotations."""

    table: PsiTable
    primitive: bool
    induced_from: int  # minimal period
    character_modulus: Optional[int]
    r: Optional[int]
    sign: Optional[int]


def _solution_masks(q: int) -> list[int]:
    """GF(2) kernel of the parity system, as bitmasks with psi(0) fixed to +1.

    Writing psi(x) = (-1)^(e_x), every admissible triple is one linear
    constraint e_x + e_y + e_z + e_w = 0 over GF(2); repeated indices cancel,
    so each constraint is the XOR of the incident variable bits.
    """
    rows = set()
    for x, y, z, w in _equation_triples(q):
        mask = 0
        for i in (x, y, z, w):
            mask ^= 1 << i
        mask &= ~1  # e_0 = 0
        if mask:
            rows.add(mask)
    pivots: dict[int, int] = {}
    for row in rows:
        while row:
            top = row.bit_length() - 1
            if top in pivots:
                row ^= pivots[top]
            else:
                pivots[top] = row
                break
    free = [i for i in range(1, q) if i not in pivots]
    kernel = []
    for f in free:
        vec = 1 << f
        # each pivot row expresses its top bit via strictly lower bits
        for top in sorted(pivots):
            if (pivots[top] & vec).bit_count() % 2:
                vec ^= 1 << top
        kernel.append(vec)
    masks = [0]
    for basis in kernel:
        masks = masks + [m ^ basis for m in masks]
    return sorted(masks)


def enumerate_solutions(q: int) -> list[SolutionRecord]:
    """All solutions on Z_q with psi(0) = +1, annotated and re-verified."""
    if q < 1:
        raise ValueError(f"period must be >= 1, got {q}")
    if q > ENUMERATION_LIMIT:
        raise ModulusTooLarge(f"enumeration capped at q = {ENUMERATION_LIMIT}")
    records = []
    for mask in _solution_masks(q):
        table = PsiTable(tuple(-1 if mask >> x & 1 else 1 for x in range(q)))
        assert satisfies_functional_equation(table)
        records.append(_annotate(table))
    records.sort(key=lambda rec: rec.table.values)
    return records


def _annotate(table: PsiTable) -> SolutionRecord:
    period = table.minimal_period()
    core = PsiTable(table.values[:period])
    match = classify_solution(core)
    if match is None:
        return SolutionRecord(table, period == table.q, period, None, None, None)
    qc, r, sign = match
    return SolutionRecord(table, period == table.q, period, qc, r, sign)


def classify_solution(psi: PsiTable) -> Optional[tuple[int, int, int]]:
    """Match psi to (q', r, sign) with psi(x) = sign*(-1)^(rx)*chi_{q'}(4x^2+1).

    Requires psi to satisfy the functional equation. Returns None (with a
    loud diagnostic, since no solution should fall outside the family) when
    no parameters match.
    """
    witness = functional_equation_violation(psi)
    if witness is not None:
        raise PreconditionViolated(f"table violates the equation at {witness}")
    q = psi.q
    sign = psi.values[0]
    r_options = (0,) if q % 2 else (0, 1)
    for qc in _divisors(q):
        if not _all_factors_are_3_mod_4(qc) and qc != 1:
            continue
        if any(e > 1 for _, e in _factor_pairs(qc)):
            continue
        for r in r_options:
            if all(
                psi.values[x] == sign * (-1) ** (r * x % 2) * jacobi(4 * x * x + 1, qc)
                for x in range(q)
            ):
                return (qc, r, sign)
    logger.warning(
        "solution of period %d matches no character family member; "
        "this would contradict the classification",
        q,
    )
    return None


def _trivial_divisibility_triple(
    q: int, residues: tuple[int, int, int], c: int
) -> Optional[tuple[int, int, int]]:
    """(x, -x, s) triples: the quotient is -s exactly, so any pair of residues
    summing to 0 mod q admits a solution with no prime search."""
    a1, a2, a3 = residues
    for i, j, k in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
        r = (a1, a2, a3)
        if (r[i] + r[j]) % q == 0:
            x = _lift_at_least(r[i], q, c)
            s = _lift_at_least(r[k], q, c)
            out = [0, 0, 0]
            out[i], out[j], out[k] = x, -x, s
            return tuple(out)  # type: ignore[return-value]
    return None


def _lift_at_least(residue: int, q: int, c: int) -> int:
    x = residue % q
    if x < c:
        x += q * ((c - x + q - 1) // q)
    return x


def _find_prime_in_class(
    residue: int,
    modulus: int,
    lower: int,
    bound: int,
    accept=None,
) -> int:
    """Smallest odd prime = residue (mod modulus) in (lower, bound], subject
    to an optional extra predicate."""
    cand = residue % modulus
    if cand <= lower:
        cand += modulus * ((lower - cand) // modulus + 1)
    while cand <= bound:
        if cand % 2 and is_probable_prime(cand) and (accept is None or accept(cand)):
            return cand
        cand += modulus
    raise SearchExhausted(
        f"no admissible prime = {residue} (mod {modulus}) in ({lower}, {bound}]"
    )


def solve_divisibility(
    q: int,
    a1: int,
    a2: int,
    a3: int,
    c: int,
    prime_search_bound: int = 10**7,
) -> tuple[int, int, int]:
    """Integers x_i = a_i (mod q), |x_i| >= C, with
    4(x1x2+x2x3+x3x1) - 1 | 4x1x2x3 - x1 - x2 - x3.

    Constructive route: pick k with the q-part of a1+a2 inside q^k, split
    d = gcd(a1+a2, q^k), take the first primes p = (a1+a2)/d (mod qd) and
    r = 1 - A (mod 4qd) such that (r-1)/4 is a square mod p, then CRT the
    congruences x1 = a1 (mod 4qd), 4 x1^2 = -1 (mod r), x1 = sqrt((r-1)/4)
    (mod p), and read off x2 = dp - x1 and x3 from the quotient identity
    (the denominator collapses to -r exactly).
    """
    if q < 1 or c < 1:
        raise ValueError("need q >= 1 and C >= 1")
    res = (a1 % q, a2 % q, a3 % q)
    big_a = 4 * (res[0] * res[1] + res[1] * res[2] + res[2] * res[0])
    if math.gcd(big_a - 1, q) != 1:
        raise PreconditionViolated(
            "gcd(4(a1 a2 + a2 a3 + a3 a1) - 1, q) must be 1"
        )
    trivial = _trivial_divisibility_triple(q, res, c)
    if trivial is not None:
        return _check_divisibility_triple(q, res, c, trivial)
    b1, _, _ = res
    s12 = res[0] + res[1]  # in [1, 2q); not 0 mod q, else the trivial route fired
    k = s12.bit_length() + 1  # ensures d captures the full q-part of a1+a2
    d = math.gcd(s12, q**k)
    t = s12 // d
    assert math.gcd(t, q * d) == 1
    p = _find_prime_in_class(t, q * d, 2, prime_search_bound)

    def _solvable(r_cand: int) -> bool:
        return r_cand != p and jacobi(((r_cand - 1) // 4) % p, p) >= 0

    r = _find_prime_in_class(
        (1 - big_a) % (4 * q * d), 4 * q * d, p, prime_search_bound, accept=_solvable
    )
    assert r % 4 == 1
    s = sqrt_mod_prime(r - 1, r, trusted=True)  # sqrt of -1 mod r
    assert s is not None
    x1_mod_r = s * pow(2, -1, r) % r  # 4 x1^2 = -1 (mod r)
    x1_mod_p = sqrt_mod_prime(((r - 1) // 4) % p, p, trusted=True)
    assert x1_mod_p is not None
    x1_base, x1_mod = crt_combine(
        [(b1 % (4 * q * d), 4 * q * d), (x1_mod_r, r), (x1_mod_p, p)]
    )
    x1 = _lift_at_least(x1_base, x1_mod, d * p * r + c + 1)
    x2 = d * p - x1
    num = (1 - r) // 4 - x1 * x2
    assert num % (d * p) == 0
    x3 = num // (d * p)
    den = 4 * (x1 * x2 + x2 * x3 + x3 * x1) - 1
    assert den == -r
    return _check_divisibility_triple(q, res, c, (x1, x2, x3))


def _check_divisibility_triple(
    q: int, res: tuple[int, int, int], c: int, xs: tuple[int, int, int]
) -> tuple[int, int, int]:
    x1, x2, x3 = xs
    for x, a in zip(xs, res):
        assert x % q == a % q, "residue condition failed"
        assert abs(x) >= c, "size condition failed"
    den = 4 * (x1 * x2 + x2 * x3 + x3 * x1) - 1
    num = 4 * x1 * x2 * x3 - x1 - x2 - x3
    assert den != 0 and num % den == 0, "divisibility failed"
    return xs


def hyperbola_point_count(p: int) -> int:
    """#{x in Z_p : 4x^2 + 1 is a square mod p} for prime p = 3 (mod 4)."""
    if not is_probable_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p % 4 != 3:
        raise WrongResidueClass(f"{p} is not 3 mod 4")
    xs = np.arange(p, dtype=np.int64)
    is_square = np.zeros(p, dtype=bool)
    is_square[(xs * xs) % p] = True
    vals = (4 * xs * xs + 1) % p
    return int(is_square[vals].sum())


def _tail_start_for_period(seq: np.ndarray, d: int) -> int:
    """Least i such that seq[j] == seq[j+d] for all j >= i (within the data)."""
    if d >= len(seq):
        return len(seq)
    mism = np.nonzero(seq[:-d] != seq[d:])[0]
    return int(mism[-1]) + 1 if mism.size else 0


def detect_recurrence_periodicity(
    seq: Sequence[int], order: int, max_period: Optional[int] = None
) -> Optional[tuple[int, int]]:
    """Eventual (preperiod, period) of a +-1 sequence produced by an
    order-`order` recurrence; None when no verified period exists in the data.

    Scans the width-(order+1) state vectors for a repeat; a repeat at
    (n1, n2) proposes period n2 - n1, accepted only if the tail really is
    periodic within the provided data (so noise cannot fake a period). The
    accepted period is then minimized over its divisors, and the preperiod
    over the data. `max_period` restricts the candidate periods considered.
    """
    arr = np.asarray(seq, dtype=np.int8)
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    needed = 2 ** (order + 1) + order + 1
    if len(arr) < needed:
        raise InsufficientData(f"need at least {needed} terms for order {order}")
    width = order + 1
    seen: dict[bytes, int] = {}
    checked: dict[int, int] = {}
    for n in range(len(arr) - width + 1):
        key = arr[n : n + width].tobytes()
        n1 = seen.setdefault(key, n)
        if n1 == n:
            continue
        d = n - n1
        if max_period is not None and d > max_period:
            continue
        if d not in checked:
            checked[d] = _tail_start_for_period(arr, d)
        if checked[d] <= n1:
            period = d
            for div in _divisors(d):
                if _tail_start_for_period(arr, div) <= n1:
                    period = div
                    break
            return (_tail_start_for_period(arr, period), period)
    return None


@dataclass(frozen=True)
class PeriodicityWitness:
    """Least same-phase pair with disagreeing signs, or None below the bound."""

    modulus: int
    phase: int
    n1: Optional[int]
    n2: Optional[int]


def falsify_periodicity(
    p: IntPolynomial, qmax: int, x: int
) -> list[PeriodicityWitness]:
    """For each modulus q <= qmax and phase b < q, the least pair n1 < n2 <= x
    with n1 = n2 = b (mod q) and lambda(P(n1)) != lambda(P(n2))."""
    if x < 2 * qmax:
        raise ValueError(f"need x >= 2*qmax = {2 * qmax}")
    lam = lambda_poly_range(p, 1, x)
    rows = []
    for q in range(1, qmax + 1):
        for b in range(q):
            first_n = b if b >= 1 else q
            sub = lam[first_n - 1 :: q]
            if sub.size == 0:
                rows.append(PeriodicityWitness(q, b, None, None))
                continue
            diff = np.nonzero(sub != sub[0])[0]
            if diff.size:
                rows.append(
                    PeriodicityWitness(q, b, first_n, first_n + q * int(diff[0]))
                )
            else:
                rows.append(PeriodicityWitness(q, b, None, None))
    return rows
