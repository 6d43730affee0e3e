"""Segmented sieves for Liouville/Omega values of polynomial arguments.

The core routine sieves the values F(n), n in [A, B], of a primitive linear
or quadratic integer factor F by all primes p <= sqrt(max |F(n)|), removing
the full p-adic valuation at every sieved root. What remains of each value
is then 1 or a single prime above the sieving bound (two primes above
sqrt(V) cannot divide a value <= V), which settles Omega exactly.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .arith import factorize, jacobi, liouville
from .polynomial import IntPolynomial

MAGIC = b"LLAB"
CACHE_VERSION = 1

_PER_VALUE_LIMIT = 10**5
_PRIME_SIEVE_CAP = 1 << 28  # largest tolerable sqrt(max |F(n)|) sieving bound
_DEFAULT_MAX_BYTES = 2**31


class RangeTooLarge(ValueError):
    """Raised when a requested range exceeds the configured memory guard."""


class FactorizationMismatch(ValueError):
    """Raised when declared factors do not multiply back to the polynomial."""


def max_range_length() -> int:
    """Range-length cap: 10^9 contract bound, tightened by LLAB_MAX_MEM (bytes)."""
    budget = int(os.environ.get("LLAB_MAX_MEM", _DEFAULT_MAX_BYTES))
    return max(1, min(10**9, budget // 24))


_prime_lock = threading.Lock()
_prime_limit = 1
_prime_cache = np.empty(0, dtype=np.int64)


def primes_up_to(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (cached, thread-safe)."""
    global _prime_limit, _prime_cache
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    with _prime_lock:
        if limit > _prime_limit:
            flags = np.ones(limit + 1, dtype=bool)
            flags[:2] = False
            for i in range(2, math.isqrt(limit) + 1):
                if flags[i]:
                    flags[i * i :: i] = False
            _prime_cache = np.nonzero(flags)[0].astype(np.int64)
            _prime_limit = limit
        cut = np.searchsorted(_prime_cache, limit, side="right")
        return _prime_cache[:cut]


def _tonelli_trusted(a: int, p: int) -> Optional[int]:
    """sqrt mod an odd prime without revalidating primality (hot path)."""
    from .arith import _tonelli_shanks  # noqa: PLC0415

    a %= p
    if a == 0:
        return 0
    if jacobi(a, p) == -1:
        return None
    return _tonelli_shanks(a, p)


def _factor_roots_mod_p(coeffs: tuple[int, ...], p: int) -> tuple[int, ...]:
    """Roots mod p of a primitive polynomial with degree <= 2."""
    cs = [c % p for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        return tuple(range(p))  # cannot happen for primitive factors
    if len(cs) == 1:
        return ()
    if p == 2:
        acc0 = coeffs[0] % 2
        acc1 = sum(coeffs) % 2
        return tuple(r for r, v in ((0, acc0), (1, acc1)) if v == 0)
    if len(cs) == 2:
        return ((-cs[0] * pow(cs[1], -1, p)) % p,)
    c0, c1, c2 = cs
    disc = (c1 * c1 - 4 * c2 * c0) % p
    s = _tonelli_trusted(disc, p)
    if s is None:
        return ()
    inv = pow(2 * c2, -1, p)
    r1 = (-c1 + s) * inv % p
    r2 = (-c1 - s) * inv % p
    return (r1,) if r1 == r2 else (r1, r2)


def _eval_factor(coeffs: tuple[int, ...], xs: np.ndarray) -> np.ndarray:
    vals = np.zeros_like(xs) + coeffs[-1]
    for c in reversed(coeffs[:-1]):
        vals = vals * xs + c
    return vals


def _value_bound(coeffs: tuple[int, ...], a: int, b: int) -> int:
    m = max(1, abs(a), abs(b))
    return sum(abs(c) * m**i for i, c in enumerate(coeffs))


def _factor_sieve(
    coeffs: tuple[int, ...], a: int, b: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Sieve |F(n)| for n in [a, b]; F primitive, degree 1 or 2.

    Returns (omega, zero_mask, residual, prime_bound): omega counts the prime
    factors below the bound with multiplicity, residual holds the unfactored
    cofactor (1 or a single prime above the bound).
    """
    length = b - a + 1
    bound = _value_bound(coeffs, a, b)
    if bound < 2**62:
        xs = np.arange(a, b + 1, dtype=np.int64)
        vals = _eval_factor(coeffs, xs)
    else:
        if length > _PER_VALUE_LIMIT:
            raise RangeTooLarge(
                f"values near 2^62 overflow the fast path; keep ranges <= {_PER_VALUE_LIMIT}"
            )
        xs = np.arange(a, b + 1, dtype=object)
        vals = _eval_factor(coeffs, xs)
    residual = np.abs(vals)
    zero = residual == 0
    has_zeros = bool(zero.any())
    if has_zeros:
        residual[zero] = 1
    omega = np.zeros(length, dtype=np.int16)
    maxv = int(residual.max())
    if maxv <= 1:
        return omega, zero, residual, 1
    limit = math.isqrt(maxv)
    if limit > _PRIME_SIEVE_CAP:
        raise RangeTooLarge(
            f"sieving bound {limit} exceeds {_PRIME_SIEVE_CAP}; values this large "
            "need the per-value factorization path"
        )
    for p in primes_up_to(limit).tolist():
        for r in _factor_roots_mod_p(coeffs, p):
            start = (r - a) % p
            if start >= length:
                continue
            idx = np.arange(start, length, p)
            if has_zeros:
                idx = idx[~zero[idx]]
            while idx.size:
                sub = residual[idx] // p
                residual[idx] = sub
                omega[idx] += 1
                idx = idx[sub % p == 0]
    big = residual > 1
    if bool((big & (residual <= limit)).any()):
        raise AssertionError("sieve left a residual below its own prime bound")
    return omega, zero, residual, limit


@dataclass
class SieveSegment:
    """Exact Omega (and hence Liouville) values on [start, start + length)."""

    start: int
    omega: np.ndarray  # int16, omega[i] = Omega(start + i)

    @property
    def length(self) -> int:
        return len(self.omega)

    @property
    def lambda_(self) -> np.ndarray:
        return np.where(self.omega & 1, -1, 1).astype(np.int8)

    def omega_mod(self, q: int) -> np.ndarray:
        return (self.omega % q).astype(np.int16)


@dataclass
class PolyValueSieve:
    """Diagnostic view of one factor's sieve pass: cofactors and partial Omega."""

    factor: IntPolynomial
    start: int
    end: int
    residual: np.ndarray
    omega_acc: np.ndarray
    prime_bound: int


def _check_range(x1: int, x2: int) -> int:
    if x2 < x1:
        raise ValueError(f"empty range [{x1}, {x2}]")
    length = x2 - x1 + 1
    cap = max_range_length()
    if length > cap:
        raise RangeTooLarge(f"range length {length} exceeds cap {cap}")
    return length


def _omega_with_residual(coeffs: tuple[int, ...], a: int, b: int) -> tuple[np.ndarray, np.ndarray]:
    """(full Omega of |F(n)|, zero mask): sieve accumulator plus the one
    large-prime residual. Short ranges whose values are too large to sieve
    fall back to per-value factorization."""
    if math.isqrt(_value_bound(coeffs, a, b)) > _PRIME_SIEVE_CAP:
        if b - a + 1 > _PER_VALUE_LIMIT:
            raise RangeTooLarge(
                f"values too large to sieve; per-value path caps ranges at {_PER_VALUE_LIMIT}"
            )
        poly = IntPolynomial(coeffs)
        vals = [poly(n) for n in range(a, b + 1)]
        omega = np.fromiter(
            (0 if v == 0 else factorize(v).omega for v in vals),
            dtype=np.int16,
            count=len(vals),
        )
        zero = np.fromiter((v == 0 for v in vals), dtype=bool, count=len(vals))
        return omega, zero
    omega, zero, residual, _ = _factor_sieve(coeffs, a, b)
    total = omega + (residual > 1)
    return total.astype(np.int16), zero


def lambda_range(x1: int, x2: int) -> SieveSegment:
    """Exact Liouville segment on [x1, x2], 1 <= x1 <= x2."""
    if x1 < 1:
        raise ValueError(f"domain starts at 1, got {x1}")
    _check_range(x1, x2)
    omega, _ = _omega_with_residual((0, 1), x1, x2)
    return SieveSegment(x1, omega)


def omega_range(x1: int, x2: int) -> np.ndarray:
    """Omega(n) for n in [x1, x2] as int16."""
    return lambda_range(x1, x2).omega


def poly_sieve_detail(factor: IntPolynomial, a: int, b: int) -> PolyValueSieve:
    """Run the sieve for a single primitive factor, keeping the cofactor array."""
    if factor.degree not in (1, 2):
        raise ValueError("detail view handles linear and quadratic factors")
    if factor.content() != 1:
        raise ValueError("factor must be primitive")
    _check_range(a, b)
    omega, zero, residual, bound = _factor_sieve(factor.coeffs, a, b)
    del zero
    return PolyValueSieve(factor, a, b, residual, omega, bound)


def default_factor_split(p: IntPolynomial) -> Optional[list[IntPolynomial]]:
    """Trivial factorizations the sieve can derive on its own: degree <= 2
    polynomials, and monomial-times-(degree <= 2) shapes like x^3 + 2x."""
    if p.is_zero:
        return None
    if p.degree <= 2:
        return [p]
    v = next(i for i, c in enumerate(p.coeffs) if c != 0)
    rest = IntPolynomial.from_coeffs(p.coeffs[v:])
    if v > 0 and rest.degree <= 2:
        return [IntPolynomial((0, 1))] * v + [rest]
    return None


def _validate_factors(
    p: IntPolynomial, factors: Sequence[IntPolynomial]
) -> tuple[list[IntPolynomial], int]:
    """Check that p == c * prod(factors) for an integer c; returns the
    primitive parts and the folded constant (factor contents included)."""
    prod = IntPolynomial((1,))
    for f in factors:
        if f.is_zero:
            raise FactorizationMismatch("zero factor")
        prod = prod * f
    if prod.degree != p.degree:
        raise FactorizationMismatch("declared factors have the wrong degree")
    if p.leading % prod.leading != 0:
        raise FactorizationMismatch("declared factors do not divide the polynomial")
    c = p.leading // prod.leading
    if prod.scale(c) != p:
        raise FactorizationMismatch("declared factors do not multiply back")
    primitive = []
    for f in factors:
        if f.degree == 0:
            c *= f.coeffs[0]
            continue
        if f.degree > 2:
            raise FactorizationMismatch("declared factors must have degree <= 2")
        cont = f.content()
        c *= cont
        primitive.append(f.primitive_part())
    return primitive, c


def lambda_poly_range(
    p: IntPolynomial,
    a: int,
    b: int,
    factors: Optional[Sequence[IntPolynomial]] = None,
) -> np.ndarray:
    """lambda(P(n)) for n in [a, b] as an int8 array of +-1.

    With linear/quadratic factors (declared or derivable) the sieve path is
    used; otherwise each value is factorized individually, which requires
    b - a <= 10^5.
    """
    if p.is_zero:
        raise ValueError("zero polynomial")
    length = _check_range(a, b)
    resolved = list(factors) if factors is not None else default_factor_split(p)
    if resolved is None:
        if length > _PER_VALUE_LIMIT:
            raise RangeTooLarge(
                f"per-value factorization path caps ranges at {_PER_VALUE_LIMIT}"
            )
        return np.array([liouville(p(n)) for n in range(a, b + 1)], dtype=np.int8)
    primitive, constant = _validate_factors(p, resolved)
    parity = np.zeros(length, dtype=np.int16)
    any_zero = np.zeros(length, dtype=bool)
    for f in primitive:
        omega, zero = _omega_with_residual(f.coeffs, a, b)
        parity += omega
        any_zero |= zero
    parity += factorize(constant).omega if abs(constant) != 1 else 0
    lam = np.where(parity & 1, -1, 1).astype(np.int8)
    lam[any_zero] = 1  # lambda(0) = 1 convention
    return lam


def is_smooth(n: int, bound: int) -> bool:
    """True iff every prime factor of n is <= bound (n >= 1; 1 is B-smooth
    for every B >= 1, and nothing else is 1-smooth)."""
    if n < 1:
        raise ValueError(f"smoothness is defined for positive integers, got {n}")
    if bound < 1:
        raise ValueError(f"smoothness bound must be >= 1, got {bound}")
    if n == 1:
        return True
    if bound == 1:
        return False
    return factorize(n).factors[-1][0] <= bound


def property_s_density(p: IntPolynomial, q: int, b: int, x: int) -> Fraction:
    """(1/x) * #{n <= x : n = b (mod q), P(n) is n-smooth}, exactly.

    Nonpositive values P(n) never count as smooth.
    """
    if q < 1 or not 1 <= b <= q or x < q:
        raise ValueError("need q >= 1, 1 <= b <= q, x >= q")
    count = 0
    for n in range(b, x + 1, q):
        val = p(n)
        if val >= 1 and is_smooth(val, n):
            count += 1
    return Fraction(count, x)


def run_length_encode(signs: Sequence[int]) -> str:
    """Compact '+3-2+1' style encoding of a +-1 sequence."""
    out: list[str] = []
    run_sign, run_len = 0, 0
    for s in signs:
        if s == run_sign:
            run_len += 1
        else:
            if run_len:
                out.append(("+" if run_sign > 0 else "-") + str(run_len))
            run_sign, run_len = s, 1
    if run_len:
        out.append(("+" if run_sign > 0 else "-") + str(run_len))
    return "".join(out)


def write_sign_cache(path: str, signs: Sequence[int]) -> None:
    """Binary sign cache: 8-byte header (magic 'LLAB', version u16 LE, flags
    u16 LE) then one bit per sign, LSB-first, bit set = sign -1. Flag bits
    0-2 hold the count of unused bits in the final byte."""
    arr = np.asarray(signs, dtype=np.int8)
    if arr.size and not bool(np.isin(arr, (-1, 1)).all()):
        raise ValueError("signs must be +-1")
    packed = np.packbits(arr == -1, bitorder="little")
    pad = (-arr.size) % 8
    header = MAGIC + CACHE_VERSION.to_bytes(2, "little") + pad.to_bytes(2, "little")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(packed.tobytes())


def read_sign_cache(path: str) -> np.ndarray:
    """Inverse of write_sign_cache; returns an int8 array of +-1."""
    with open(path, "rb") as fh:
        header = fh.read(8)
        body = fh.read()
    if len(header) != 8 or header[:4] != MAGIC:
        raise ValueError("not a sign cache file")
    version = int.from_bytes(header[4:6], "little")
    if version != CACHE_VERSION:
        raise ValueError(f"unsupported cache version {version}")
    pad = int.from_bytes(header[6:8], "little") & 0x7
    bits = np.unpackbits(np.frombuffer(body, dtype=np.uint8), bitorder="little")
    if pad:
        bits = bits[:-pad]
    return np.where(bits == 1, -1, 1).astype(np.int8)
