"""Smooth-number counts and the Dickman function.

Smoothness is inclusive: n is y-smooth when no prime factor exceeds y, so
n = 1 is y-smooth for every y and p = 2 always has a smooth shift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _kernels
from .arith import FactorSieve, prime_count
from .errors import DomainError
from .scan import sum_chunks

ASYMPTOTIC_LABEL = "asymptotic main term (o(1) set to 0)"


def _range_count(kernel, sieve: FactorSieve, x: float, lo: int, workers: int) -> int:
    nx = math.floor(x)
    if nx < lo:
        return 0
    sieve.check(nx, "x")
    return int(sum_chunks(kernel, lo, nx + 1, workers))


def _check_y(y):
    if y < 1:
        raise DomainError(f"y must be >= 1, got {y}")
    # the kernels compare against an integer bound; p <= y iff p <= floor(y)
    return min(math.floor(y), 2**62)


def psi_count(sieve: FactorSieve, x: float, y: float, workers: int = 1) -> int:
    """Psi(x, y): integers n <= x with no prime factor above y."""
    yy = _check_y(y)
    spf = sieve.spf
    return _range_count(
        lambda lo, hi: _kernels.count_smooth(spf, lo, hi, yy), sieve, x, 1, workers
    )


def pi_smooth_shifted(sieve: FactorSieve, x: float, y: float, workers: int = 1) -> int:
    """Pi(x, y): primes p <= x with p - 1 free of prime factors above y."""
    yy = _check_y(y)
    spf = sieve.spf
    return _range_count(
        lambda lo, hi: _kernels.count_smooth_shifted_primes(spf, lo, hi, yy),
        sieve, x, 2, workers,
    )


def phi_smooth_count(sieve: FactorSieve, k: int, x: float, y: float, workers: int = 1) -> int:
    """Phi_k(x, y): m <= x whose k-th phi iterate is y-smooth (k = 0 gives Psi)."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    yy = _check_y(y)
    spf = sieve.spf
    return _range_count(
        lambda lo, hi: _kernels.count_smooth_phi_iterate(spf, lo, hi, k, yy),
        sieve, x, 1, workers,
    )


@dataclass(frozen=True)
class SmoothCounts:
    x: float
    y: float
    psi: int
    pi_smooth: int
    pi_x: int
    lhs: float
    rhs: float | None
    ratio: float | None


def hypothesis1_report(sieve: FactorSieve, x: float, y: float, workers: int = 1) -> SmoothCounts:
    """Psi(x,y)/x against Pi(x,y)/pi(x); ratio is None when Pi(x,y) = 0."""
    if x < y:
        raise DomainError(f"need x >= y, got x={x}, y={y}")
    psi = psi_count(sieve, x, y, workers)
    pis = pi_smooth_shifted(sieve, x, y, workers)
    pix = prime_count(sieve, x)
    lhs = psi / x
    if pis == 0:
        return SmoothCounts(x, y, psi, pis, pix, lhs, 0.0 if pix else None, None)
    rhs = pis / pix
    return SmoothCounts(x, y, psi, pis, pix, lhs, rhs, lhs / rhs)


# ---------------------------------------------------------------------------
# Dickman rho
# ---------------------------------------------------------------------------

# Power series of rho on each unit interval [k, k+1], in xi = k + 1 - u.
# With rho(k + 1 - xi) = sum a_j xi**j and rho(k - xi) = sum b_j xi**j,
# u rho'(u) = -rho(u - 1) gives a_{j+1} = (b_j + j a_j) / ((k + 1)(j + 1)).
# The constant a_0 = rho(k + 1) comes from u rho(u) = int_{u-1}^{u} rho, i.e.
# k a_0 = sum_{j>=1} a_j / (j + 1); all terms are positive, unlike the
# continuity condition rho(k) = sum a_j, which cancels badly for large k.
_N_TERMS = 90
_series: list[list[float]] = [[1.0] + [0.0] * (_N_TERMS - 1)]


def _series_for(k: int) -> list[float]:
    while len(_series) <= k:
        kk = len(_series)
        b = _series[-1]
        a = [0.0] * _N_TERMS
        for j in range(_N_TERMS - 1):
            a[j + 1] = (b[j] + j * a[j]) / (kk + 1) / (j + 1)
        a[0] = math.fsum(a[j] / (j + 1) for j in range(1, _N_TERMS)) / kk
        _series.append(a)
    return _series[k]


def dickman_rho(u: float) -> float:
    if u < 0:
        raise DomainError(f"dickman_rho needs u >= 0, got {u}")
    if u <= 1:
        return 1.0
    k = math.ceil(u) - 1
    a = _series_for(k)
    xi = k + 1 - u
    acc = 0.0
    for c in reversed(a):
        acc = acc * xi + c
    return acc


def iterated_log(k: int, u: float) -> float:
    """k-fold natural log; every intermediate must stay positive."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    v = u
    for depth in range(1, k + 1):
        if v <= 0:
            raise DomainError(f"log_{depth} undefined: log_{depth - 1}({u}) = {v} <= 0")
        v = math.log(v)
    return v


def rho_k_asymptotic(k: int, u: float) -> float:
    """Main term of rho_k(u) with the o(1) dropped.

    k = 0: (e / (u log u))**u; k >= 1: (1 / (log_k u * log_{k+1} u))**u.
    """
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    if k == 0:
        base = u * iterated_log(1, u)
        if base <= 0:
            raise DomainError(f"u log u must be positive, got u={u}")
        return (math.e / base) ** u
    lk = iterated_log(k, u)
    lk1 = iterated_log(k + 1, u)
    if lk1 <= 0:
        raise DomainError(f"log_{k + 1}({u}) = {lk1} is not positive")
    return (1.0 / (lk * lk1)) ** u


@dataclass(frozen=True)
class RhoTrendRow:
    u: float
    y: float
    phi_k_count: int
    density: float
    rho_k_main_term: float | None
    dickman: float
    note: str = "trend only: o(1) terms forbid any numerical tolerance"


def theorem2_trend(
    sieve: FactorSieve, k: int, x: float, us, workers: int = 1
) -> list[RhoTrendRow]:
    """Phi_k(x, x**(1/u)) / x next to the rho_k main term and Dickman rho(u)."""
    rows = []
    for u in us:
        y = x ** (1.0 / u)
        count = phi_smooth_count(sieve, k, x, y, workers)
        try:
            main = rho_k_asymptotic(k, u)
        except DomainError:
            main = None
        rows.append(RhoTrendRow(u, y, count, count / x, main, dickman_rho(u)))
    return rows


def hypothesis1_trend(sieve: FactorSieve, x: float, ys, workers: int = 1) -> list[SmoothCounts]:
    return [hypothesis1_report(sieve, x, y, workers) for y in ys]
