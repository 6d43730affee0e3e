"""Integer polynomials: exact evaluation, square detection, discriminants,
and roots modulo primes."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .arith import NotPrime, is_probable_prime, sqrt_mod_prime


class DegenerateQuadratic(ValueError):
    """Raised when a quadratic operation receives leading coefficient 0."""


class UnsupportedDegree(ValueError):
    """Raised when roots modulo a large prime are requested for degree >= 3."""


_ROOTS_EXHAUSTIVE_LIMIT = 1 << 16


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial; coefficients are stored constant term first
    with no trailing zeros (the zero polynomial is the empty tuple)."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.coeffs and self.coeffs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        if any(not isinstance(c, int) for c in self.coeffs):
            raise ValueError("coefficients must be integers")

    @classmethod
    def from_coeffs(cls, seq: Sequence[int]) -> "IntPolynomial":
        coeffs = list(seq)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return cls(tuple(int(c) for c in coeffs))

    @property
    def degree(self) -> int:
        """Degree of the polynomial; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        if not self.coeffs:
            return 0
        return self.coeffs[-1]

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, n: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        if self.is_zero or other.is_zero:
            return IntPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial.from_coeffs(out)

    def scale(self, c: int) -> "IntPolynomial":
        return IntPolynomial.from_coeffs([c * a for a in self.coeffs])

    def content(self) -> int:
        """Positive gcd of the coefficients (0 for the zero polynomial)."""
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def primitive_part(self) -> "IntPolynomial":
        g = self.content()
        if g <= 1:
            return self
        return IntPolynomial(tuple(c // g for c in self.coeffs))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else str(abs(c))
                term = f"{mag}x" if i == 1 else f"{mag}x^{i}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts)


_MONOMIAL = re.compile(r"^([+-]?\d*)(?:x(?:\^(\d+))?)?$")


def parse_polynomial(text: str) -> IntPolynomial:
    """Parse 'c0,c1,...,cd' or symbolic sums of monomials like 'x^2+1',
    '2x^3-4x+7'. Rejects non-integer coefficients."""
    text = text.strip().replace(" ", "")
    if not text:
        raise ValueError("empty polynomial")
    if "," in text:
        try:
            return IntPolynomial.from_coeffs([int(t) for t in text.split(",")])
        except ValueError as exc:
            raise ValueError(f"bad coefficient list {text!r}") from exc
    chunks = re.findall(r"[+-]?[^+-]+", text)
    coeffs: dict[int, int] = {}
    for chunk in chunks:
        m = _MONOMIAL.match(chunk)
        if not m or (m.group(1) in ("", "+", "-") and "x" not in chunk):
            raise ValueError(f"bad monomial {chunk!r} in {text!r}")
        raw_c, raw_e = m.groups()
        if "x" in chunk:
            exp = int(raw_e) if raw_e is not None else 1
            c = {"": 1, "+": 1, "-": -1}.get(raw_c, None)
            if c is None:
                c = int(raw_c)
        else:
            exp = 0
            c = int(raw_c)
        coeffs[exp] = coeffs.get(exp, 0) + c
    out = [0] * (max(coeffs) + 1)
    for e, c in coeffs.items():
        out[e] = c
    return IntPolynomial.from_coeffs(out)


def poly_square_root(p: IntPolynomial) -> Optional[IntPolynomial]:
    """Exact Q with Q*Q == p, or None. Coefficient recursion from the top."""
    if p.is_zero:
        return IntPolynomial(())
    if p.degree % 2 == 1 or p.leading < 0:
        return None
    m = p.degree // 2
    lead = math.isqrt(p.leading)
    if lead * lead != p.leading:
        return None
    q = [0] * (m + 1)
    q[m] = lead
    for i in range(m - 1, -1, -1):
        # coefficient of x^(m+i) in Q^2: 2*q[m]*q[i] + sum of middle products
        acc = sum(q[u] * q[m + i - u] for u in range(i + 1, m) if 0 <= m + i - u <= m)
        num = p.coeffs[m + i] - acc
        if num % (2 * lead) != 0:
            return None
        q[i] = num // (2 * lead)
    cand = IntPolynomial.from_coeffs(q)
    return cand if cand * cand == p else None


def is_non_square(p: IntPolynomial) -> bool:
    """True iff p has positive leading coefficient and is not c*Q(x)^2 for any
    integer c and integer polynomial Q."""
    if p.is_zero:
        raise ValueError("zero polynomial")
    if p.leading < 0:
        return False
    # p = c*Q^2 for some integer c iff the primitive part of p is a square.
    return poly_square_root(p.primitive_part()) is None


def quadratic_discriminant(a: int, b: int, c: int) -> int:
    """b^2 - 4ac; raises DegenerateQuadratic when a = 0."""
    if a == 0:
        raise DegenerateQuadratic("leading coefficient is 0")
    return b * b - 4 * a * c


def roots_mod_p(p: IntPolynomial, modulus: int) -> list[int]:
    """Sorted residues r with p(r) = 0 (mod modulus), modulus prime.

    Exhaustive evaluation for primes <= 2^16; direct formulas for degree <= 2
    reductions above that; UnsupportedDegree otherwise.
    """
    if not is_probable_prime(modulus):
        raise NotPrime(f"{modulus} is not prime")
    reduced = [c % modulus for c in p.coeffs]
    while reduced and reduced[-1] == 0:
        reduced.pop()
    if modulus <= _ROOTS_EXHAUSTIVE_LIMIT:
        if not reduced:
            return list(range(modulus))
        xs = np.arange(modulus, dtype=np.int64)
        acc = np.zeros(modulus, dtype=np.int64)
        for c in reversed(reduced):
            acc = (acc * xs + c) % modulus
        return np.nonzero(acc == 0)[0].tolist()
    if not reduced:
        raise UnsupportedDegree("polynomial vanishes identically modulo p")
    deg = len(reduced) - 1
    if deg == 0:
        return []
    if deg == 1:
        b, a = reduced[0], reduced[1]
        return [(-b * pow(a, -1, modulus)) % modulus]
    if deg == 2:
        c0, c1, c2 = reduced
        disc = (c1 * c1 - 4 * c2 * c0) % modulus
        s = sqrt_mod_prime(disc, modulus, trusted=True)
        if s is None:
            return []
        inv = pow(2 * c2, -1, modulus)
        return sorted({(-c1 + s) * inv % modulus, (-c1 - s) * inv % modulus})
    raise UnsupportedDegree(
        f"degree {deg} roots above 2^16 need the per-value factorization path"
    )
