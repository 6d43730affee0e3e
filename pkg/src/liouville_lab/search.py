"""Reproducible brute-force searches: least-witness tables for
lambda(a m^3 + b) and lambda(a m^2 + b), the Beukers exponent precondition,
the almost-all-polynomials experiment, and squarefree-kernel lifting of
witnesses to generalized Fermat instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

import numpy as np

from .arith import factorize, liouville
from .multfn import LIOUVILLE, MultFn
from .sieve import lambda_range


class CostGuard(ValueError):
    """Raised when an exhaustive experiment would exceed its cost cap."""


@dataclass
class WitnessTable:
    """Least m with lambda(a m^e + b) = +-1 per grid cell; empty `misses`
    means the claim reproduced in full."""

    exponent: int  # 3 for the cubic table, 2 for the quadratic one
    amax: int
    bmax: int
    mbound: int
    entries: dict[tuple[int, int], tuple[Optional[int], Optional[int]]] = field(
        default_factory=dict
    )
    misses: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return not self.misses


def _witness_table(exponent: int, amax: int, bmax: int, mbound: int) -> WitnessTable:
    if min(amax, bmax, mbound) < 1:
        raise ValueError("grid bounds must be >= 1")
    top = amax * mbound**exponent + bmax
    lam = lambda_range(1, top).lambda_
    powers = np.arange(1, mbound + 1, dtype=np.int64) ** exponent
    table = WitnessTable(exponent, amax, bmax, mbound)
    for a in range(1, amax + 1):
        base = a * powers
        for b in range(1, bmax + 1):
            signs = lam[base + b - 1]
            m_plus = m_minus = None
            plus_hits = np.nonzero(signs == 1)[0]
            minus_hits = np.nonzero(signs == -1)[0]
            if plus_hits.size:
                m_plus = int(plus_hits[0]) + 1
            else:
                table.misses.append((a, b, 1))
            if minus_hits.size:
                m_minus = int(minus_hits[0]) + 1
            else:
                table.misses.append((a, b, -1))
            table.entries[(a, b)] = (m_plus, m_minus)
    return table


def multivariate_cubic_table(amax: int, bmax: int, mbound: int) -> WitnessTable:
    """Least m+- with lambda(a m^3 + b) = +-1, m <= mbound, per 1 <= a, b."""
    return _witness_table(3, amax, bmax, mbound)


def multivariate_quadratic_table(amax: int, bmax: int, mbound: int) -> WitnessTable:
    """Least m+- with lambda(a m^2 + b) = +-1, m <= mbound, per 1 <= a, b."""
    return _witness_table(2, amax, bmax, mbound)


def reverify_witness_table(table: WitnessTable) -> bool:
    """Re-check every recorded witness through the factorization path."""
    for (a, b), (m_plus, m_minus) in table.entries.items():
        for sign, m in ((1, m_plus), (-1, m_minus)):
            if m is None:
                continue
            if liouville(a * m**table.exponent + b) != sign:
                return False
    return True


def beukers_precondition(p: int, q: int, r: int) -> bool:
    """Exact check that 1/p + 1/q + 1/r > 1 (the spherical exponent regime)."""
    if min(p, q, r) < 1:
        raise ValueError("exponents must be >= 1")
    return Fraction(1, p) + Fraction(1, q) + Fraction(1, r) > 1


@dataclass
class AlmostAllResult:
    """Fraction of the sampled degree-d polynomials with no n <= H attaining
    the target value, with the least witness per polynomial."""

    degree: int
    height: int
    horizon: int
    order: int
    target_exponent: int
    total: int
    fraction_missed: Fraction
    witnesses: dict[tuple[int, ...], Optional[int]]
    exhaustive: bool


def almost_all_experiment(
    degree: int,
    height: int,
    horizon: int,
    order: int = 2,
    target_exponent: int = 1,
    g: Optional[MultFn] = None,
    sample: Optional[int] = None,
    seed: int = 0,
    cost_cap: int = 10**7,
) -> AlmostAllResult:
    """For polynomials of the given degree, height <= `height`, positive
    leading coefficient: the fraction with no n <= horizon where g(P(n))
    has the target exponent.

    Exhaustive when the grid fits under `cost_cap` evaluations, otherwise a
    fixed-seed uniform sample of `sample` polynomials (CostGuard if neither
    applies). Coefficient tuples are (lead, ..., constant).
    """
    if degree < 1 or height < 1 or horizon < 0:
        raise ValueError("need degree >= 1, height >= 1, horizon >= 0")
    fn = g if g is not None else (LIOUVILLE if order == 2 else MultFn(order, 1))
    if fn.order != order:
        raise ValueError("order disagrees with the supplied function")
    target_exponent %= order
    span = 2 * height + 1
    total_polys = height * span**degree
    rng = np.random.default_rng(seed)
    if sample is None:
        if total_polys * max(horizon, 1) > cost_cap:
            raise CostGuard(
                f"{total_polys} polynomials x {horizon} values exceeds {cost_cap}"
            )
        coeff_iter = (
            (lead, *rest)
            for lead in range(1, height + 1)
            for rest in product(*[range(-height, height + 1)] * degree)
        )
        exhaustive = True
    else:
        coeff_iter = (
            (
                int(rng.integers(1, height + 1)),
                *(int(rng.integers(-height, height + 1)) for _ in range(degree)),
            )
            for _ in range(sample)
        )
        total_polys = sample
        exhaustive = False
    witnesses: dict[tuple[int, ...], Optional[int]] = {}
    missed = 0
    for coeffs in coeff_iter:
        hit = None
        for n in range(1, horizon + 1):
            value = 0
            for c in coeffs:
                value = value * n + c
            if fn.exponent(value) == target_exponent:
                hit = n
                break
        witnesses[coeffs] = hit
        if hit is None:
            missed += 1
    return AlmostAllResult(
        degree,
        height,
        horizon,
        order,
        target_exponent,
        total_polys,
        Fraction(missed, total_polys),
        witnesses,
        exhaustive,
    )


@dataclass(frozen=True)
class WitnessLift:
    """A lambda-certified instance h z^2 = a m^e1 + b n^e2 with gcd(m,n,z)=1."""

    a: int
    b: int
    e1: int
    e2: int
    m: int
    n: int
    h: int
    z: int
    lambda_h: int


def coprime_witness_lift(
    a: int, b: int, exponents: tuple[int, int], m: int, n: int = 1
) -> WitnessLift:
    """Extract (h, z) with h squarefree and h z^2 = a m^e1 + b n^e2.

    lambda(h) = lambda(a m^e1 + b n^e2) since z^2 has even Omega; the
    coprimality gcd(m, n, z) = 1 is asserted (trivial at n = 1).
    """
    e1, e2 = exponents
    if min(e1, e2) < 1 or m < 1 or n < 1:
        raise ValueError("exponents and arguments must be >= 1")
    if math.gcd(m, n) != 1:
        raise ValueError("m and n must be coprime")
    value = a * m**e1 + b * n**e2
    if value == 0:
        raise ValueError("witness value is 0")
    h, z = 1, 1
    for p, e in factorize(abs(value)).factors:
        z *= p ** (e // 2)
        if e % 2:
            h *= p
    if value < 0:
        h = -h
    assert h * z * z == value
    assert math.gcd(math.gcd(m, n), z) == 1
    lam = liouville(h)
    assert lam == liouville(value)
    return WitnessLift(a, b, e1, e2, m, n, h, z, lam)
