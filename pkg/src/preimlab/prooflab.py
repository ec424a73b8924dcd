"""Growth gauges, divisor-sum and divisibility bound checks, and the P/Q/R
split of a preimage set.

The L-gauges need log log log n > 0, so every one of them refuses
n < 16 (the first integer above e**e).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _kernels
from .arith import ArithWord, FactorSieve, Factorization, Fn, big_omega, big_omega_above
from .errors import DomainError, TruncationError
from .inverse import DEFAULT_CAP, Inverter
from .scan import map_chunks, sum_chunks

DOMAIN_FLOOR = 16


def _logs(n):
    if n < DOMAIN_FLOOR:
        raise DomainError(f"L-gauges need n >= {DOMAIN_FLOOR}, got {n}")
    l1 = math.log(n)
    l2 = math.log(l1)
    return l1, l2, math.log(l2)


def big_l(n: float) -> float:
    """L(n) = exp(log n * log log log n / log log n)."""
    l1, l2, l3 = _logs(n)
    return math.exp(l1 * l3 / l2)


def log_l_k_beta(n: float, k: int, beta: float) -> float:
    l1, l2, l3 = _logs(n)
    return l1 * l3**beta / l2**k


def l_k_beta(n: float, k: int, beta: float) -> float:
    """L_{k,beta}(n) = exp(log n * (log log log n)**beta / (log log n)**k)."""
    return math.exp(log_l_k_beta(n, k, beta))


def search_limit(n: int) -> float:
    """x = n log(2n), beyond which no preimage lies once n is large."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return n * math.log(2 * n)


@dataclass(frozen=True)
class BoundParams:
    k: int
    alpha: float
    beta: float | None = None
    eta: float = 0.5

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"k must be >= 1, got {self.k}")
        if not 0 < self.eta < 1:
            raise DomainError(f"eta must lie in (0, 1), got {self.eta}")
        if self.alpha >= self.k:
            raise DomainError(f"need alpha < k, got alpha={self.alpha}, k={self.k}")
        if self.beta is not None and not self.alpha < self.beta + 1 < self.k:
            raise DomainError(
                f"need alpha < beta + 1 < k, got alpha={self.alpha}, beta={self.beta}, k={self.k}"
            )


# ---------------------------------------------------------------------------
# sigma/phi extremes and divisibility counts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lemma3Report:
    n_min: int
    n_max: int
    c1_hat: float
    argmax: int
    c2_hat: float
    argmin: int


def lemma3_ratios(sieve: FactorSieve, n_min: int, n_max: int, workers: int = 1) -> Lemma3Report:
    """Extremes of sigma(n)/(n log log 3n) and phi(n) log log 3n / n, with witnesses."""
    if not 1 <= n_min <= n_max:
        raise DomainError(f"need 1 <= n_min <= n_max, got [{n_min}, {n_max}]")
    sieve.check(n_max, "n_max")
    spf = sieve.spf
    parts = map_chunks(lambda lo, hi: _kernels.lemma3_extrema(spf, lo, hi), n_min, n_max + 1, workers)
    c1, a1, c2, a2 = -math.inf, 0, math.inf, 0
    # strict comparisons keep the earliest chunk on ties
    for hi_val, hi_arg, lo_val, lo_arg in parts:
        if hi_val > c1:
            c1, a1 = float(hi_val), int(hi_arg)
        if lo_val < c2:
            c2, a2 = float(lo_val), int(lo_arg)
    return Lemma3Report(n_min, n_max, c1, a1, c2, a2)


def count_multiples(sieve: FactorSieve, a: Fn, d: int, x: float, workers: int = 1) -> int:
    """#{n <= x : d | a(n)}."""
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    nx = math.floor(x)
    if nx < 1:
        return 0
    sieve.check(nx, "x")
    spf, code = sieve.spf, a.code
    return int(sum_chunks(
        lambda lo, hi: _kernels.count_image_multiples(spf, lo, hi, code, d), 1, nx + 1, workers
    ))


def lemma4_bound(d: int, x: float, sieve: FactorSieve | None = None) -> float:
    """(x/d) (8 l log^2(e x))**l with l = Omega(d)."""
    if d < 2:
        raise DomainError(f"lemma4_bound needs d >= 2, got {d}")
    if x < 1:
        raise DomainError(f"x must be >= 1, got {x}")
    f = sieve.factor(d) if sieve is not None else Factorization.of(d)
    ell = big_omega(f)
    return x / d * (8 * ell * (1.0 + math.log(x)) ** 2) ** ell


# ---------------------------------------------------------------------------
# P/Q/R partition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartitionReport:
    n: int
    k: int
    a: Fn
    inner_word: ArithWord
    alpha: float
    eta: float
    x: float
    z: float
    threshold_P: float
    threshold_Q: float
    S: tuple[int, ...]
    P: tuple[int, ...]
    Q: tuple[int, ...]
    R: tuple[int, ...]
    preimage_totals: dict[str, int]

    REPORT_EXTRAS = ("extended_word",)

    @property
    def extended_word(self) -> ArithWord:
        return self.inner_word.then(self.a)


def partition_pqr(
    sieve: FactorSieve | None,
    a: Fn,
    inner_word: ArithWord,
    n: int,
    params: BoundParams,
    inverter: Inverter | None = None,
) -> PartitionReport:
    """Split S = {l : inner_word(l) = n} by rough and total prime-factor counts.

    P takes Omega_{>z}(l) >= log L_{k+1,alpha}(x); Q takes the rest with
    Omega(l) >= log x / (log log x)**(k + 1/2); R is what is left. Each part
    also carries the number of m with a(m) in that part.
    """
    if n < DOMAIN_FLOOR:
        raise DomainError(f"partition needs n >= {DOMAIN_FLOOR}, got {n}")
    k = len(inner_word)
    if params.k != k:
        raise DomainError(f"params.k = {params.k} does not match inner word length {k}")
    inv = inverter if inverter is not None else Inverter(sieve)
    x = search_limit(n)
    l1 = math.log(x)
    l2 = math.log(l1)
    z = math.exp(math.sqrt(l2))
    t_p = log_l_k_beta(x, k + 1, params.alpha)
    t_q = l1 / l2 ** (k + 0.5)

    levels = inv.levels(inner_word, n)
    if levels.truncated:
        raise TruncationError(f"preimage set of {n} under {inner_word} exceeds cap", levels.deepest)
    S = levels.deepest
    P, Q, R = [], [], []
    totals = {"P": 0, "Q": 0, "R": 0}
    for ell in S:
        f = inv.factor(ell)
        if big_omega_above(f, z) >= t_p:
            part, key = P, "P"
        elif big_omega(f) >= t_q:
            part, key = Q, "Q"
        else:
            part, key = R, "R"
        part.append(ell)
        totals[key] += len(inv.preimages(a, ell))
    return PartitionReport(
        n, k, a, inner_word, params.alpha, params.eta, x, z, t_p, t_q,
        S, tuple(P), tuple(Q), tuple(R), totals,
    )


# ---------------------------------------------------------------------------
# preimage-count ratio scan
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    n: int
    N: int | None
    ratio: float | None
    running_max: float
    running_argmax: int
    error: str | None = None


def theorem1_scan(
    sieve: FactorSieve | None,
    w: ArithWord,
    beta: float,
    n_min: int,
    n_max: int,
    cap: int = DEFAULT_CAP,
    inverter: Inverter | None = None,
) -> list[ScanRow]:
    """Rows of N(n) and N(n) L_{k,beta+1}(n) / n, with the running maximum.

    A truncated enumeration yields a row with ``N = None`` and an error marker.
    """
    if n_min < DOMAIN_FLOOR:
        raise DomainError(f"scan needs n_min >= {DOMAIN_FLOOR}, got {n_min}")
    if n_max < n_min:
        raise DomainError(f"empty scan range [{n_min}, {n_max}]")
    inv = inverter if inverter is not None else Inverter(sieve, cap)
    k = len(w)
    rows = []
    best, best_n = -math.inf, 0
    for n in range(n_min, n_max + 1):
        try:
            N = inv.count(w, n)
        except TruncationError:
            rows.append(ScanRow(n, None, None, best, best_n, "truncated"))
            continue
        ratio = N * l_k_beta(n, k, beta + 1) / n if N else 0.0
        if ratio > best:
            best, best_n = ratio, n
        rows.append(ScanRow(n, N, ratio, best, best_n))
    return rows


def scan_max(rows: list[ScanRow]) -> tuple[float, int]:
    return rows[-1].running_max, rows[-1].running_argmax

