"""Finitary correlation statistics: Cesaro and logarithmic correlation
averages of root-of-unity multiplicative functions along linear forms,
interval-normalized Gowers uniformity norms, the effective Erdos-Turan
discrepancy bound, the weighted exponential-sum maximization inequality,
and the q -> (q/pi) sin(pi/q) margin constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .arith import is_probable_prime
from .multfn import MultFn, root_of_unity
from .sieve import omega_range


class CostGuard(ValueError):
    """Raised when a computation would exceed its documented cost cap."""


@dataclass(frozen=True)
class CorrelationSpec:
    """Average of prod_i g_i(a_i n + h_i) over n <= x.

    kind is "cesaro" ((1/x) sum) or "log" (sum of f(n)/n over sum of 1/n).
    """

    functions: tuple[MultFn, ...]
    coefficients: tuple[int, ...]
    shifts: tuple[int, ...]
    x: int
    kind: str = "cesaro"

    def __post_init__(self) -> None:
        k = len(self.functions)
        if k < 1 or len(self.coefficients) != k or len(self.shifts) != k:
            raise ValueError("functions, coefficients and shifts must align, k >= 1")
        if any(a < 1 for a in self.coefficients):
            raise ValueError("coefficients must be positive")
        if self.x < 1:
            raise ValueError("x must be >= 1")
        if self.kind not in ("cesaro", "log"):
            raise ValueError(f"unknown average kind {self.kind!r}")

    @property
    def k(self) -> int:
        return len(self.functions)

    @property
    def linearly_independent(self) -> bool:
        """a_i h_j != a_j h_i for all i != j (pairwise independent forms)."""
        forms = list(zip(self.coefficients, self.shifts))
        return all(
            a1 * h2 != a2 * h1
            for i, (a1, h1) in enumerate(forms)
            for (a2, h2) in forms[i + 1 :]
        )


def _exponent_array(g: MultFn, a: int, h: int, x: int) -> np.ndarray:
    """Exponents of g(a n + h) in Z_order for n = 1..x (even extension,
    exponent 0 at argument 0)."""
    ns = np.arange(1, x + 1, dtype=np.int64)
    vals = np.abs(a * ns + h)
    zero = vals == 0
    if zero.any():
        vals = vals.copy()
        vals[zero] = 1
    maxv = int(vals.max())
    omega = omega_range(1, maxv)
    exps = g.default_exponent * omega[vals - 1].astype(np.int64)
    for p, e in g.overrides:
        diff = e - g.default_exponent
        if diff == 0:
            continue
        power = p
        while power <= maxv:
            exps[vals % power == 0] += diff
            power *= p
    exps[zero] = 0
    return exps % g.order


def _class_exponents(spec: CorrelationSpec) -> tuple[np.ndarray, int]:
    orders = [g.order for g in spec.functions]
    q_total = math.lcm(*orders)
    total = np.zeros(spec.x, dtype=np.int64)
    for g, a, h in zip(spec.functions, spec.coefficients, spec.shifts):
        total += _exponent_array(g, a, h, spec.x) * (q_total // g.order)
    return total % q_total, q_total


def correlation_average(spec: CorrelationSpec) -> complex:
    """The correlation average as a complex number of modulus <= 1.

    Values are accumulated as integer (or 1/n-weighted) counts per root-of-
    unity class and rendered to complex once at the end.
    """
    total, q_total = _class_exponents(spec)
    if spec.kind == "cesaro":
        counts = np.bincount(total, minlength=q_total)
        acc = sum(
            int(c) * root_of_unity(e, q_total) for e, c in enumerate(counts) if c
        )
        return acc / spec.x
    weights = 1.0 / np.arange(1, spec.x + 1, dtype=np.float64)
    sums = np.bincount(total, weights=weights, minlength=q_total)
    acc = sum(s * root_of_unity(e, q_total) for e, s in enumerate(sums) if s)
    return acc / weights.sum()


def correlation_running(
    spec: CorrelationSpec, points: int = 200
) -> tuple[np.ndarray, np.ndarray]:
    """|running Cesaro mean| at `points` checkpoints (for reporting/plots)."""
    total, q_total = _class_exponents(spec)
    vals = np.exp(2j * np.pi * total / q_total)
    cum = np.cumsum(vals)
    ns = np.unique(np.linspace(1, spec.x, min(points, spec.x), dtype=np.int64))
    return ns, np.abs(cum[ns - 1]) / ns


def _next_prime(n: int) -> int:
    cand = max(2, n)
    while not is_probable_prime(cand):
        cand += 1
    return cand


def _u2_power(fhat_scaled: np.ndarray) -> float:
    return float((np.abs(fhat_scaled) ** 4).sum())


def _gowers_power(values: np.ndarray, k: int) -> float:
    """||F||_{U^k(Z_M)}^(2^k) for F given on the full cyclic group."""
    m = len(values)
    if k == 1:
        return abs(values.mean()) ** 2
    if k == 2:
        return _u2_power(np.fft.fft(values) / m)
    conj = values.conj()
    total = 0.0
    chunk = max(1, (1 << 22) // m)
    base = np.arange(m)
    for start in range(0, m, chunk):
        hs = np.arange(start, min(start + chunk, m))
        rows = values[(base[None, :] + hs[:, None]) % m] * conj[None, :]
        total += _u2_power(np.fft.fft(rows, axis=1) / m)
    return total / m


def gowers_norm(f: Sequence[complex], k: int) -> float:
    """Interval-normalized U^k[N] norm (k = 1, 2, 3) of a 1-bounded sequence.

    The sequence on [1, N] is embedded in Z_M for a prime M >= 2^k N (so cube
    wraparound cannot occur inside the support) and normalized by the norm of
    the interval indicator; constants then score exactly 1.
    """
    if k not in (1, 2, 3):
        raise ValueError(f"k must be 1, 2 or 3, got {k}")
    arr = np.asarray(f, dtype=np.complex128)
    n = len(arr)
    if n < 1:
        raise ValueError("empty sequence")
    if k == 3 and n > 10**4:
        raise CostGuard("U^3 is capped at N = 10^4")
    if np.abs(arr).max() > 1 + 1e-9:
        raise ValueError("sequence must be bounded by 1")
    m = _next_prime((1 << k) * n)
    embedded = np.zeros(m, dtype=np.complex128)
    embedded[1 : n + 1] = arr
    indicator = np.zeros(m, dtype=np.complex128)
    indicator[1 : n + 1] = 1.0
    ratio = _gowers_power(embedded, k) / _gowers_power(indicator, k)
    return float(max(ratio, 0.0) ** (1.0 / (1 << k)))


@dataclass(frozen=True)
class DiscrepancyBound:
    """Effective Erdos-Turan bound next to the sorted true star discrepancy."""

    bound: float
    star_discrepancy: float
    m0: int


def erdos_turan_discrepancy(points: Sequence[float], m0: int) -> DiscrepancyBound:
    """bound = 3 (1/M0 + sum_{j<=M0} |E e(j x_n)| / j), with the true star
    discrepancy computed by sorting as a cross-check."""
    if m0 < 1:
        raise ValueError(f"M0 must be >= 1, got {m0}")
    pts = np.asarray(points, dtype=np.float64) % 1.0
    n = len(pts)
    if n == 0:
        raise ValueError("empty sequence")
    total = 0.0
    for j in range(1, m0 + 1):
        total += abs(np.exp(2j * np.pi * j * pts).mean()) / j
    bound = 3.0 * (1.0 / m0 + total)
    u = np.sort(pts)
    i = np.arange(1, n + 1)
    star = float(max((i / n - u).max(), (u - (i - 1) / n).max()))
    return DiscrepancyBound(bound, star, m0)


@dataclass(frozen=True)
class ExpSumCheck:
    """Outcome of the weighted exponential-sum maximization check."""

    n: int
    m: int
    rhs: float
    max_lhs: float
    ok: bool
    argmax_weights: np.ndarray


def cyclic_block_weights(n: int, m: int, rotation: int = 0) -> np.ndarray:
    """Indicator of a cyclic block of m of the n indices (the equality case)."""
    w = np.zeros(n)
    for i in range(m):
        w[(rotation + i) % n] = 1.0
    return w


def is_cyclic_block(w: Sequence[float], tol: float = 1e-9) -> bool:
    """True iff w is 0/1-valued with its support a cyclic interval."""
    arr = np.asarray(w, dtype=np.float64)
    near1 = np.abs(arr - 1) <= tol
    near0 = np.abs(arr) <= tol
    if not bool((near0 | near1).all()):
        return False
    m = int(near1.sum())
    if m in (0, len(arr)):
        return True
    joined = np.concatenate([near1, near1])
    best = run = 0
    for flag in joined:
        run = run + 1 if flag else 0
        best = max(best, run)
    return best >= m


def max_exp_sum_check(n: int, m: int, trials: int, seed: int = 0) -> ExpSumCheck:
    """Sample `trials` weight vectors w in [0,1]^n with sum w = m (uniform
    draws projected onto the capped-simplex slice) and check

        |sum_j w_j e(j/n)| <= |sum_{j<=m} e(j/n)|.
    """
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    roots = np.exp(2j * np.pi * np.arange(1, n + 1) / n)
    rhs = abs(roots[:m].sum())
    rng = np.random.default_rng(seed)
    w = rng.random((trials, n))
    lo = np.full(trials, -1.0)
    hi = np.full(trials, 1.0)
    buf = np.empty_like(w)
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        np.add(w, mid[:, None], out=buf)
        np.clip(buf, 0.0, 1.0, out=buf)
        s = buf.sum(axis=1)
        too_low = s < m
        lo = np.where(too_low, mid, lo)
        hi = np.where(too_low, hi, mid)
    proj = np.clip(w + hi[:, None], 0.0, 1.0)
    lhs = np.abs(proj @ roots)
    top = int(np.argmax(lhs))
    return ExpSumCheck(
        n, m, float(rhs), float(lhs[top]), bool((lhs <= rhs + 1e-9).all()), proj[top].copy()
    )


def delta_for_q(q: int) -> float:
    """delta with (q/pi) sin(pi/q) = 1 - 2 delta; positive and decreasing,
    asymptotically pi^2 / (12 q^2)."""
    if q < 2:
        raise ValueError(f"q must be >= 2, got {q}")
    return (1.0 - (q / math.pi) * math.sin(math.pi / q)) / 2.0


def fourier_indicator_expand(
    q: int, v: int, samples: Sequence[int]
) -> tuple[Fraction, Fraction]:
    """Mean of 1_{g != v} two ways: direct counting, and via the expansion
    1 - (1/q) sum_j (conj(v) g)^j collapsed exactly by root-of-unity
    orthogonality (the inner sum is q when g = v and 0 otherwise).

    Arguments are exponents in Z_q. Returns (direct, expansion); they agree
    exactly, and a complex evaluation of the expansion is cross-checked.
    """
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    samp = [s % q for s in samples]
    if not samp:
        raise ValueError("need at least one sample")
    v %= q
    count_eq = sum(1 for s in samp if s == v)
    direct = Fraction(len(samp) - count_eq, len(samp))
    inner_total = q * count_eq  # sum over samples of sum_j zeta^((s-v) j)
    expansion = 1 - Fraction(inner_total, q * len(samp))
    numeric = 1 - sum(
        root_of_unity((s - v) * j, q) for s in samp for j in range(q)
    ) / (q * len(samp))
    assert abs(numeric - complex(float(expansion))) < 1e-9
    return direct, expansion
