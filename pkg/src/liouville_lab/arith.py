"""Exact integer and modular arithmetic primitives.

Everything here is pure and deterministic: extended gcd, CRT, Jacobi
symbols, modular square roots (prime and prime-power moduli), a
Miller-Rabin primality test with a deterministic base set, Brent-rho
factorization, and the Liouville function on single integers.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class ZeroArgument(ValueError):
    """Raised when an operation requires a nonzero integer."""


class EvenModulus(ValueError):
    """Raised when a Jacobi-symbol modulus is even or nonpositive."""


class NotPrime(ValueError):
    """Raised when an argument required to be prime fails the primality test."""


class NonCoprimeModuli(ValueError):
    """Raised when CRT moduli share a common factor."""


def _small_primes(limit: int) -> tuple[int, ...]:
    flags = bytearray([1]) * limit
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit - 1) + 1):
        if flags[i]:
            flags[i * i :: i] = b"\x00" * len(flags[i * i :: i])
    return tuple(i for i in range(limit) if flags[i])


SMALL_PRIMES: tuple[int, ...] = _small_primes(1000)

# Verified deterministic Miller-Rabin base set for n below this bound.
_MR_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_RANDOM_ROUNDS = 30
_MR_SEED = 0x4C4C4142  # "LLAB"


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended Euclid: return (g, s, t) with g = s*a + t*b and g = gcd(a, b) >= 0.

    Convention: egcd(0, 0) == (0, 0, 0).
    """
    if a == 0 and b == 0:
        return (0, 0, 0)
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return (old_r, old_s, old_t)


def crt_combine(residues: Sequence[tuple[int, int]]) -> tuple[int, int]:
    """Combine congruences x = r_i (mod m_i) with pairwise-coprime moduli.

    Returns (r, M) with 0 <= r < M = prod(m_i).
    """
    r, big_m = 0, 1
    for r_i, m_i in residues:
        if m_i < 1:
            raise NonCoprimeModuli(f"modulus must be >= 1, got {m_i}")
        g = math.gcd(big_m, m_i)
        if g != 1:
            raise NonCoprimeModuli(f"moduli share the factor gcd={g}")
        # Solve r + big_m * t = r_i (mod m_i).
        t = ((r_i - r) * pow(big_m, -1, m_i)) % m_i if m_i > 1 else 0
        r += big_m * t
        big_m *= m_i
    return (r % big_m, big_m)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd n >= 1."""
    if n <= 0 or n % 2 == 0:
        raise EvenModulus(f"Jacobi modulus must be odd and positive, got {n}")
    a %= n
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _mr_composite_witness(a: int, d: int, s: int, n: int) -> bool:
    x = pow(a, d, n)
    if x in (1, n - 1):
        return False
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def is_probable_prime(n: int) -> bool:
    """Primality test: deterministic Miller-Rabin below ~3.3e24, 30 fixed-seed
    pseudorandom rounds above."""
    if n < 2:
        return False
    for p in SMALL_PRIMES[:25]:  # primes below 100
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < _MR_DETERMINISTIC_BOUND:
        bases: Iterable[int] = _MR_BASES
    else:
        rng = random.Random(_MR_SEED)
        bases = (rng.randrange(2, n - 1) for _ in range(_MR_RANDOM_ROUNDS))
    return not any(_mr_composite_witness(a % n, d, s, n) for a in bases)


def _tonelli_shanks(a: int, p: int) -> int:
    """One square root of a mod odd prime p; assumes (a|p) = 1, a in [1, p)."""
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while jacobi(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t * t % p, 1
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def sqrt_mod_prime(a: int, p: int, *, trusted: bool = False) -> Optional[int]:
    """Smallest x in [0, p) with x*x = a (mod p), or None if a is a nonresidue.

    `trusted=True` skips the primality check (bulk sieve path).
    """
    if not trusted and not is_probable_prime(p):
        raise NotPrime(f"{p} is not prime")
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return 1
    if jacobi(a, p) == -1:
        return None
    x = _tonelli_shanks(a, p)
    return min(x, p - x)


def _lift_odd_prime(root: int, b: int, p: int, beta: int) -> int:
    """Hensel-lift root of x^2 = b from mod p to mod p^beta (p odd, p not | b)."""
    x, mod = root, p
    for _ in range(beta - 1):
        mod *= p
        x = (x - (x * x - b) * pow(2 * x, -1, mod)) % mod
    return x


def _roots_mod_2_power(b: int, beta: int) -> list[int]:
    """All roots of x^2 = b (mod 2^beta) for odd b, [] if none."""
    if beta == 1:
        return [1]
    if beta == 2:
        return [1, 3] if b % 4 == 1 else []
    if b % 8 != 1:
        return []
    x, mod = 1, 8
    for _ in range(beta - 3):
        if (x * x - b) % (2 * mod) != 0:
            x += mod // 2
        mod *= 2
    assert (x * x - b) % mod == 0
    half = mod // 2
    return sorted({x % mod, (-x) % mod, (x + half) % mod, (-x + half) % mod})


def sqrt_mod_prime_power(a: int, p: int, alpha: int) -> Optional[int]:
    """Smallest x in [0, p^alpha) with x*x = a (mod p^alpha), or None.

    Odd p roots are Hensel-lifted; p = 2 handles moduli 2, 4, 8 by
    enumeration and lifts from mod 8 upward.
    """
    if not is_probable_prime(p):
        raise NotPrime(f"{p} is not prime")
    if alpha < 1:
        raise ValueError(f"exponent must be >= 1, got {alpha}")
    mod = p**alpha
    a %= mod
    if a == 0:
        return 0
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    if v % 2 == 1:
        return None
    beta = alpha - v
    scale = p ** (v // 2)
    if p == 2:
        roots = _roots_mod_2_power(a, beta)
        return scale * roots[0] if roots else None
    r0 = sqrt_mod_prime(a % p, p, trusted=True)
    if r0 is None:
        return None
    x = _lift_odd_prime(r0, a, p, beta)
    pb = p**beta
    return scale * min(x, pb - x)


def vp(n: int, p: int) -> int:
    """p-adic valuation of n (largest k with p^k | n); requires n != 0."""
    if n == 0:
        raise ZeroArgument("valuation of 0 is undefined")
    if not is_probable_prime(p):
        raise NotPrime(f"{p} is not prime")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of a nonzero integer: n = sign * prod p^e."""

    n: int
    factors: tuple[tuple[int, int], ...]  # (prime, exponent), primes increasing

    def __post_init__(self) -> None:
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise ValueError("factor primes must be strictly increasing")

    @property
    def omega(self) -> int:
        """Number of prime factors counted with multiplicity."""
        return sum(e for _, e in self.factors)

    @property
    def liouville(self) -> int:
        return -1 if self.omega % 2 else 1

    def reassemble(self) -> int:
        value = 1
        for p, e in self.factors:
            value *= p**e
        return value if self.n > 0 else -value


def _brent_rho(n: int, c: int) -> int:
    """Brent's cycle variant of Pollard rho with increment c; returns a factor
    of n (possibly n itself on failure)."""
    if n % 2 == 0:
        return 2
    y, m = 2, 128
    g = r = q = 1
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return g


def _split(m: int, out: list[int]) -> None:
    if m == 1:
        return
    if is_probable_prime(m):
        out.append(m)
        return
    c = 1
    while True:
        d = _brent_rho(m, c)
        if 1 < d < m:
            break
        c += 1  # fixed restart schedule keeps the output deterministic
    _split(d, out)
    _split(m // d, out)


def factorize(n: int) -> Factorization:
    """Full factorization of a nonzero integer via trial division then Brent rho."""
    if n == 0:
        raise ZeroArgument("cannot factor 0")
    m = abs(n)
    pairs: list[tuple[int, int]] = []
    for p in SMALL_PRIMES:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            pairs.append((p, e))
    if m > 1:
        if is_probable_prime(m):
            pairs.append((m, 1))
        else:
            found: list[int] = []
            _split(m, found)
            for p in sorted(set(found)):
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                pairs.append((p, e))
            assert m == 1
    pairs.sort()
    return Factorization(n, tuple(pairs))


def liouville(n: int) -> int:
    """Liouville function, extended evenly to Z with liouville(0) = 1."""
    if n == 0:
        return 1
    return factorize(abs(n)).liouville
