"""Toolkit for reducible cubics x(x^2 - Bx + C): the shifted-product
reduction (k-selection, square-completion companion y, the congruence
n^2 = Delta (mod 2k)), the norm-form product identity, the induced
four-linear-factor polynomial, and sign censuses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Optional

from .arith import crt_combine, factorize, liouville, sqrt_mod_prime_power
from .polynomial import IntPolynomial, is_non_square
from .sieve import lambda_poly_range

_LOCAL_ENUM_LIMIT = 1 << 12


class SquareDiscriminant(ValueError):
    """Raised when B^2 - 4C is a perfect square (the linear-factor regime)."""


class DegenerateShifts(ValueError):
    """Raised when the four-term shift multiset collapses to <= 2 values."""


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def _local_square_roots(a: int, p: int, e: int) -> list[int]:
    """All roots of x^2 = a (mod p^e); exhaustive below the enumeration limit,
    otherwise the +-lift classes of one Hensel root."""
    mod = p**e
    if mod <= _LOCAL_ENUM_LIMIT:
        a %= mod
        return [x for x in range(mod) if (x * x - a) % mod == 0]
    x0 = sqrt_mod_prime_power(a, p, e)
    if x0 is None:
        return []
    roots = {x0 % mod, (-x0) % mod}
    if p == 2 and e >= 3:
        half = mod // 2
        roots |= {(x0 + half) % mod, (-x0 + half) % mod}
    return sorted(roots)


def smallest_sqrt_mod(a: int, modulus: int) -> Optional[int]:
    """Smallest nonnegative root of x^2 = a (mod modulus) over the enumerated
    CRT combinations of local roots."""
    if modulus == 1:
        return 0
    locals_: list[tuple[list[int], int]] = []
    for p, e in factorize(modulus).factors:
        roots = _local_square_roots(a, p, e)
        if not roots:
            return None
        locals_.append((roots, p**e))
    combos = 1
    for roots, _ in locals_:
        combos *= len(roots)
    if combos > 10**5:
        locals_ = [([roots[0]], mod) for roots, mod in locals_]
    best: Optional[int] = None
    for choice in product(*[roots for roots, _ in locals_]):
        r, _ = crt_combine([(c, mod) for c, (_, mod) in zip(choice, locals_)])
        if best is None or r < best:
            best = r
    return best


@dataclass(frozen=True)
class CubicReduction:
    """Data turning lambda(n(n^2 - Bn + C)) on a progression into a product of
    four linear Liouville factors."""

    b: int
    c: int
    delta: int  # B^2 - 4C, not a perfect square
    k: int  # positive even shift with square companion discriminant
    y: int  # (|k| - 2B)^2 - y^2 = 16C
    n0: int  # smallest root of n^2 = Delta (mod 2k)
    t1: int  # Vieta roots of x(x + k) + B|k| - Delta
    t2: int
    lambda_k: int  # Liouville value of |k|, the census sign bookkeeping


def build_reduction(b: int, c: int) -> CubicReduction:
    """Construct the reduction for P(x) = x(x^2 - Bx + C), B >= 0.

    k = 2B + 2C + 2 when C >= 0, else 2B - 2C - 2; the companion y makes
    k^2 - 4B|k| + 4*Delta a perfect square, and the congruence
    n^2 = Delta (mod 2|k|) is solved constructively prime power by prime
    power (Hensel above 8 for p = 2) and combined by CRT.
    """
    if b < 0:
        raise ValueError(f"B must be >= 0, got {b}")
    delta = b * b - 4 * c
    if _is_square(delta):
        raise SquareDiscriminant(f"Delta = {delta} is a perfect square")
    if c >= 0:
        k, y = 2 * b + 2 * c + 2, 2 * c - 2
    else:
        k, y = 2 * b - 2 * c - 2, -2 * c + 2
    assert k > 0 and k % 2 == 0
    assert (k - 2 * b) ** 2 - y * y == 16 * c
    disc = k * k - 4 * b * k + 4 * delta
    assert disc == y * y
    t1 = (-k + abs(y)) // 2
    t2 = (-k - abs(y)) // 2
    assert t1 + t2 == -k and t1 * t2 == b * k - delta
    n0 = smallest_sqrt_mod(delta, 2 * k)
    assert n0 is not None, "n^2 = Delta (mod 2k) must be solvable by construction"
    assert (n0 * n0 - delta) % (2 * k) == 0
    return CubicReduction(b, c, delta, k, y, n0, t1, t2, liouville(k))


def verify_norm_identity(n: int, k: int, delta: int) -> bool:
    """(n^2 - D)((n+k)^2 - D) == (n(n+k) - D)^2 - D k^2, exactly."""
    lhs = (n * n - delta) * ((n + k) * (n + k) - delta)
    rhs = (n * (n + k) - delta) ** 2 - delta * k * k
    return lhs == rhs


def four_term_product(red: CubicReduction) -> tuple[IntPolynomial, tuple[int, ...]]:
    """The product of the four linear factors (2k x + n0 + s) for
    s in (t1, t2, B, B+k), with its distinct-shift certificate.

    More than two distinct shifts force the product to be non-square; the
    excluded collapse is (t1, t2) = (-k, 0) with B = -k, impossible for
    B >= 0.
    """
    shifts = (red.t1, red.t2, red.b, red.b + red.k)
    if len(set(shifts)) <= 2:
        raise DegenerateShifts(f"shift multiset {shifts} certifies nothing")
    poly = IntPolynomial((1,))
    for s in shifts:
        poly = poly * IntPolynomial((red.n0 + s, 2 * red.k))
    assert is_non_square(poly)
    return poly, shifts


@dataclass(frozen=True)
class CubicCensus:
    """Sign counts of lambda(n(n^2 - Bn + C)) up to X, plus the counts on the
    arithmetic progression n = n0 (mod 2k) the reduction uses."""

    b: int
    c: int
    x: int
    plus_count: int
    minus_count: int
    reduction: Optional[CubicReduction]
    progression_plus: Optional[int]
    progression_minus: Optional[int]


def cubic_sign_census(b: int, c: int, x: int) -> CubicCensus:
    """Exact census via the factor sieve (factors x and x^2 - Bx + C)."""
    if b < 0:
        raise ValueError(f"B must be >= 0, got {b}")
    if x < 1:
        raise ValueError(f"X must be >= 1, got {x}")
    poly = IntPolynomial((0, c, -b, 1))
    lam = lambda_poly_range(
        poly, 1, x, factors=[IntPolynomial((0, 1)), IntPolynomial((c, -b, 1))]
    )
    plus = int((lam == 1).sum())
    minus = x - plus
    red = prog_plus = prog_minus = None
    if not _is_square(b * b - 4 * c):
        red = build_reduction(b, c)
        start = red.n0 if red.n0 >= 1 else 2 * red.k
        sub = lam[start - 1 :: 2 * red.k]
        prog_plus = int((sub == 1).sum())
        prog_minus = int(sub.size - prog_plus)
    return CubicCensus(b, c, x, plus, minus, red, prog_plus, prog_minus)
