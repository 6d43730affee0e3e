"""Root-of-unity valued completely multiplicative functions, real Dirichlet
characters via Jacobi symbols, and the pretentious distance.

A MultFn of order q is stored as an exponent rule p -> e(p) in Z_q, so the
group law stays exact integer arithmetic; complex values appear only at the
reporting boundary.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .arith import Factorization, factorize, is_probable_prime, jacobi
from .sieve import primes_up_to


class BadModulus(ValueError):
    """Raised for character moduli outside the supported family."""


@dataclass(frozen=True)
class MultFn:
    """Completely multiplicative g with values in the q-th roots of unity.

    g(p) = exp(2*pi*i*e(p)/q) where e(p) is `default_exponent` except on the
    finitely many override primes. Extended evenly to Z with g(0) = 1.
    """

    order: int
    default_exponent: int = 0
    overrides: tuple[tuple[int, int], ...] = ()
    name: str = ""

    completely_multiplicative = True  # the only flavor supported

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")
        object.__setattr__(self, "default_exponent", self.default_exponent % self.order)
        cleaned = []
        for p, e in self.overrides:
            if not is_probable_prime(p):
                raise ValueError(f"override key {p} is not prime")
            cleaned.append((p, e % self.order))
        object.__setattr__(self, "overrides", tuple(sorted(cleaned)))

    def prime_exponent(self, p: int) -> int:
        for q, e in self.overrides:
            if q == p:
                return e
        return self.default_exponent

    def exponent(self, n: int, factorization: Optional[Factorization] = None) -> int:
        """Exponent of g(n) in Z_q; g(0) = 1 and g(-n) = g(n)."""
        if n == 0:
            return 0
        fac = factorization if factorization is not None else factorize(abs(n))
        total = sum(v * self.prime_exponent(p) for p, v in fac.factors)
        return total % self.order

    def value(self, n: int) -> complex:
        return root_of_unity(self.exponent(n), self.order)

    def prime_value(self, p: int) -> complex:
        return root_of_unity(self.prime_exponent(p), self.order)


def root_of_unity(exponent: int, order: int) -> complex:
    """exp(2*pi*i*exponent/order), with the order-1 and order-2 cases exact."""
    exponent %= order
    if exponent == 0:
        return 1 + 0j
    if 2 * exponent == order:
        return -1 + 0j
    return cmath.exp(2j * cmath.pi * exponent / order)


LIOUVILLE = MultFn(2, 1, name="liouville")
CONSTANT_ONE = MultFn(1, 0, name="one")


def omega_mod_fn(q: int) -> MultFn:
    """g(n) = exp(2*pi*i*Omega(n)/q); the Liouville function is q = 2."""
    return MultFn(q, 1, name=f"omega-mod:{q}")


def eval_multfn(g: MultFn, n: int) -> int:
    """Exponent of g(n) in Z_q (exact group law; see root_of_unity to render)."""
    return g.exponent(n)


def _squarefree_odd(q: int) -> bool:
    if q % 2 == 0:
        return False
    return all(e == 1 for _, e in factorize(q).factors) if q > 1 else True


@dataclass(frozen=True)
class RealCharacter:
    """Real character n -> jacobi(n, modulus) for odd squarefree modulus."""

    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 1 or not _squarefree_odd(self.modulus):
            raise BadModulus(f"modulus must be odd and squarefree, got {self.modulus}")

    def value(self, n: int) -> int:
        return jacobi(n, self.modulus)

    def prime_value(self, p: int) -> complex:
        return complex(jacobi(p, self.modulus))

    def table(self) -> np.ndarray:
        return np.array([jacobi(x, self.modulus) for x in range(self.modulus)], dtype=np.int8)


PrimeValued = Union[MultFn, RealCharacter, Callable[[int], complex]]


def _prime_value_fn(f: PrimeValued) -> Callable[[int], complex]:
    if isinstance(f, (MultFn, RealCharacter)):
        return f.prime_value
    if callable(f):
        return f
    raise TypeError(f"cannot read prime values from {f!r}")


def pretentious_distance(f: PrimeValued, g: PrimeValued, x: int, t: float = 0.0) -> float:
    """D(f, g*n^it; x) = sqrt(sum_{p <= x} (1 - Re f(p) conj(g(p)) p^{-it}) / p).

    Summation runs in fixed 2^16 prime blocks with fsum inside each block, so
    the result is deterministic regardless of threading.
    """
    if x < 2:
        raise ValueError(f"need x >= 2, got {x}")
    fv, gv = _prime_value_fn(f), _prime_value_fn(g)
    primes = primes_up_to(x).tolist()
    block_sums = []
    block = 1 << 16
    for i in range(0, len(primes), block):
        terms = []
        for p in primes[i : i + block]:
            w = fv(p) * gv(p).conjugate()
            if t:
                w *= cmath.exp(-1j * t * math.log(p))
            terms.append((1.0 - w.real) / p)
        block_sums.append(math.fsum(terms))
    return math.sqrt(max(math.fsum(block_sums), 0.0))
