"""Continued-fraction Pell machinery: sqrt expansions, fundamental units,
negative-Pell solvability, and unit-composition solution generation.

All arithmetic is arbitrary precision; fundamental solutions grow
exponentially in D and must never be silently truncated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .sieve import primes_up_to


class PerfectSquare(ValueError):
    """Raised when a Pell routine receives a square D."""


def _require_nonsquare(d: int) -> int:
    if d < 2:
        raise PerfectSquare(f"need a nonsquare D >= 2, got {d}")
    r = math.isqrt(d)
    if r * r == d:
        raise PerfectSquare(f"{d} is a perfect square")
    return r


def sqrt_cf(d: int) -> tuple[int, tuple[int, ...]]:
    """Canonical continued fraction of sqrt(D): (a0, periodic part).

    Uses the standard (m, den, a) recurrence; the period closes at the first
    state repeat, which for sqrt expansions is the first a = 2*a0 with
    denominator 1 (verified by the recurrence returning to its start state).
    """
    a0 = _require_nonsquare(d)
    m, den, a = 0, 1, a0
    period = []
    while True:
        m = den * a - m
        den = (d - m * m) // den
        a = (a0 + m) // den
        period.append(a)
        if den == 1 and a == 2 * a0:
            return (a0, tuple(period))


@dataclass(frozen=True)
class PellSolution:
    """Nonnegative (x, y) with x^2 - D y^2 = N, checked exactly."""

    d: int
    x: int
    y: int
    n: int

    def __post_init__(self) -> None:
        if self.x * self.x - self.d * self.y * self.y != self.n:
            raise ValueError(
                f"({self.x}, {self.y}) does not solve x^2 - {self.d} y^2 = {self.n}"
            )


def fundamental_solution(d: int, sign: int) -> Optional[PellSolution]:
    """Minimal positive solution of x^2 - D y^2 = sign from the CF convergents.

    sign = -1 is solvable exactly when the CF period length is odd; returns
    None otherwise.
    """
    if sign not in (-1, 1):
        raise ValueError(f"sign must be +-1, got {sign}")
    a0, period = sqrt_cf(d)
    ell = len(period)
    # Convergent h/k just before the end of the first period.
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    for a in period[: ell - 1]:
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
    value = h * h - d * k * k
    assert value in (-1, 1)
    if value == sign:
        return PellSolution(d, h, k, sign)
    if sign == -1:
        return None  # even period: x^2 - D y^2 = -1 has no solution
    # Odd period: square the -1 unit to get the +1 unit.
    x = h * h + d * k * k
    y = 2 * h * k
    return PellSolution(d, x, y, 1)


@dataclass(frozen=True)
class PellContext:
    """D together with its CF expansion and fundamental units."""

    d: int
    cf_head: int
    cf_period: tuple[int, ...]
    fundamental_plus: PellSolution
    fundamental_minus: Optional[PellSolution]

    @classmethod
    def for_d(cls, d: int) -> "PellContext":
        a0, period = sqrt_cf(d)
        plus = fundamental_solution(d, 1)
        minus = fundamental_solution(d, -1)
        assert plus is not None
        assert (minus is not None) == (len(period) % 2 == 1)
        return cls(d, a0, period, plus, minus)


def compose(base: PellSolution, unit: PellSolution) -> PellSolution:
    """Brahmagupta composition with the +1 unit: stays on the same N."""
    assert base.d == unit.d and unit.n == 1
    d = base.d
    x = base.x * unit.x + d * base.y * unit.y
    y = base.x * unit.y + base.y * unit.x
    return PellSolution(d, x, y, base.n)


def generate_solutions(
    base: PellSolution, ctx: PellContext, count: int
) -> list[PellSolution]:
    """The `count` solutions after `base` under composition with the
    fundamental +1 unit; strictly increasing and exact by construction."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if base.d != ctx.d:
        raise ValueError("base and context disagree on D")
    out = []
    current = base
    for _ in range(count):
        current = compose(current, ctx.fundamental_plus)
        assert current.y > (out[-1].y if out else base.y)
        out.append(current)
    return out


@dataclass(frozen=True)
class NegativePellRow:
    """One prime p = 1 (mod 4) with its fundamental x^2 - p y^2 = -1 solution
    and the derived (n, y) with 4n^2 + 1 = p y^2."""

    p: int
    x: int
    y: int
    n: int

    @property
    def n_mod_2(self) -> int:
        return self.n % 2


def _census_row(p: int) -> NegativePellRow:
    sol = fundamental_solution(p, -1)
    assert sol is not None, f"negative Pell unsolvable for prime {p} = 1 (mod 4)"
    assert sol.x % 2 == 0, f"odd x in negative Pell solution for {p}"
    n = sol.x // 2
    assert 4 * n * n + 1 == p * sol.y * sol.y
    return NegativePellRow(p, sol.x, sol.y, n)


def negative_pell_census(bound: int, threads: int = 1) -> list[NegativePellRow]:
    """Fundamental negative-Pell data for every prime p = 1 (mod 4), p <= bound.

    Solvability is Legendre's theorem made effective; x is always even, so
    x = 2n gives 4n^2 + 1 = p y^2, and the parity class of n is recorded.
    Rows merge in prime order regardless of the worker count.
    """
    ps = [int(p) for p in primes_up_to(bound) if p % 4 == 1]
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_census_row, ps))
    return [_census_row(p) for p in ps]
