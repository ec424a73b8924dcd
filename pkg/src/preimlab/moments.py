"""Moment sums of Omega over phi and sigma values, next to the
exponents that Rankin's trick gives for them.

``sum_{n<=x} A**Omega_{>z}(a(n))`` and ``sum_{n<=x} B**Omega(a(n))`` are
computed exactly as histograms of Omega values, then weighted. The
analytic side is the exponent from the proof with every O-constant set to
1. It is a proof-shape exponent, reported for trend comparison and never
asserted as an upper bound.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
import numpy as np

from . import _kernels
from .arith import ArithWord, FactorSieve, Factorization, Fn
from .errors import DomainError
from .scan import map_chunks

EXPONENT_LABEL = "proof-shape exponent (O-constants set to 1)"
CUBE_ROOT_2 = 2.0 ** (1.0 / 3.0)


def _loglog(x):
    if x <= math.e:
        raise DomainError(f"log log x undefined or <= 0 at x = {x}")
    return math.log(math.log(x))


@dataclass(frozen=True)
class MomentParamsA:
    """Parameters for the large-prime-factor moment.

    ``z = exp((log log x)**0.5)`` and ``A = (log log x)**(1 - eta)`` unless
    overridden, in which case ``paper_parameterized`` is false.
    """

    REPORT_EXTRAS = ("paper_parameterized", "a_below_z_cube_root")

    x: float
    eta: float = 0.5
    A_override: float | None = None
    z_override: float | None = None
    z: float = field(init=False)
    A: float = field(init=False)

    def __post_init__(self):
        if self.x < 16:
            raise DomainError(f"x must be >= 16, got {self.x}")
        if not 0 < self.eta < 1:
            raise DomainError(f"eta must lie in (0, 1), got {self.eta}")
        ll = _loglog(self.x)
        z = math.exp(math.sqrt(ll)) if self.z_override is None else float(self.z_override)
        A = ll ** (1.0 - self.eta) if self.A_override is None else float(self.A_override)
        if z < 1:
            raise DomainError(f"z must be >= 1, got {z}")
        if A < 0:
            raise DomainError(f"A must be >= 0, got {A}")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "A", A)

    @property
    def paper_parameterized(self) -> bool:
        return self.A_override is None and self.z_override is None

    @property
    def a_below_z_cube_root(self) -> bool:
        """Whether A < z**(1/3), the regime where the comparison means anything."""
        return self.A < self.z ** (1.0 / 3.0)


class CVariant(enum.Enum):
    QUARTER = "quarter"
    THIRD = "third"


@dataclass(frozen=True)
class MomentParamsB:
    B: float
    x: float
    c_variant: CVariant = CVariant.QUARTER

    def __post_init__(self):
        if not 1 <= self.B < CUBE_ROOT_2:
            raise DomainError(f"B must satisfy 1 <= B < 2**(1/3), got {self.B}")
        if self.x < 16:
            raise DomainError(f"x must be >= 16, got {self.x}")
        if not isinstance(self.c_variant, CVariant):
            object.__setattr__(self, "c_variant", CVariant(self.c_variant))


@dataclass(frozen=True)
class MomentReport:
    params: MomentParamsA | MomentParamsB
    fn: Fn
    empirical_sum: float
    empirical_log_excess: float
    analytic_exponent: float
    c_used: float
    n_terms: int
    exponent_label: str = EXPONENT_LABEL


def gamma_fn(s: float) -> float:
    if s <= 0:
        raise DomainError(f"gamma_fn needs s > 0, got {s}")
    return math.gamma(s)


def analytic_exponent_rough(p: MomentParamsA) -> tuple[float, float]:
    """Rankin parameter c and ``(c-1) log x + Gamma(A) / ((c-1)**A (log z)**(A-1))``."""
    A, z, x = p.A, p.z, p.x
    if A <= 0 or z <= 1:
        raise DomainError(f"need A > 0 and z > 1, got A={A}, z={z}")
    lx, lz = math.log(x), math.log(z)
    cm1 = A / (lx ** (1.0 / (A + 1.0)) * lz ** ((A - 1.0) / (A + 1.0)))
    if cm1 >= 1:
        raise DomainError(f"Rankin parameter c = {1 + cm1} is not below 2 at x = {x}")
    exponent = cm1 * lx + gamma_fn(A) / (cm1**A * lz ** (A - 1.0))
    return exponent, 1.0 + cm1


def analytic_exponent_total(p: MomentParamsB) -> tuple[float, float]:
    lx = math.log(p.x)
    if p.c_variant is CVariant.QUARTER:
        cm1 = lx ** -0.25
        exponent = cm1 * lx + cm1**-3
    else:
        cm1 = lx ** (-1.0 / 3.0)
        exponent = cm1 * lx + cm1**-p.B
    if cm1 >= 1:
        raise DomainError(f"Rankin parameter c = {1 + cm1} is not below 2 at x = {p.x}")
    return exponent, 1.0 + cm1


def g_value(f: Factorization, A: float, z: float) -> float:
    """Multiplicative g with ``sum_{r | d} g(r) = A**Omega_{>z}(d)``."""
    if A < 0 or z < 1:
        raise DomainError(f"need A >= 0 and z >= 1, got A={A}, z={z}")
    r = 1.0
    for p, e in f.factors:
        if p <= z:
            return 0.0
        r *= A**e - A ** (e - 1)
    return r


def weighted_sum(hist, base: float) -> float:
    """``sum_j hist[j] * base**j`` with compensated summation.

    Switches to log space when a power would overflow.
    """
    hist = np.asarray(hist)
    js = np.flatnonzero(hist)
    if js.size == 0:
        return 0.0
    try:
        return math.fsum(int(hist[j]) * base ** int(j) for j in js)
    except OverflowError:
        logs = [math.log(int(hist[j])) + int(j) * math.log(base) for j in js]
        top = max(logs)
        return math.exp(top + math.log(math.fsum(math.exp(v - top) for v in logs)))


def _single(a) -> Fn:
    if isinstance(a, ArithWord):
        if len(a) != 1:
            raise DomainError(f"moment sums take a single function, got word {a}")
        return a.symbols[0]
    return a


def image_omega_histogram(sieve: FactorSieve, a, x: float, z: float, workers: int = 1):
    """``hist[j] = #{n <= x : Omega_{>z}(a(n)) = j}``.

    Only ``x <= sieve.limit`` is needed: Omega is additive over the prime
    powers of n, and images of prime powers beyond the table are trial
    factored.
    """
    fn = _single(a)
    nx = math.floor(x)
    sieve.check(nx, "x")
    spf, code, zf = sieve.spf, fn.code, float(z)
    hist = np.zeros(_kernels.HIST_SIZE, dtype=np.int64)
    kernel = lambda lo, hi: _kernels.image_omega_hist(spf, lo, hi, code, zf)  # noqa: E731
    for part in map_chunks(kernel, 1, nx + 1, workers):
        hist += part
    return hist


def empirical_moment_rough(
    sieve: FactorSieve, a, p: MomentParamsA, workers: int = 1
) -> MomentReport:
    fn = _single(a)
    hist = image_omega_histogram(sieve, fn, p.x, p.z, workers)
    total = weighted_sum(hist, p.A)
    try:
        exponent, c = analytic_exponent_rough(p)
    except DomainError:
        # degenerate overrides (A = 0, z = 1, c >= 2) have no analytic side
        exponent, c = math.nan, math.nan
    return MomentReport(p, fn, total, math.log(total / p.x), exponent, c, math.floor(p.x))


def empirical_moment_total(
    sieve: FactorSieve, a, p: MomentParamsB, workers: int = 1
) -> MomentReport:
    fn = _single(a)
    hist = image_omega_histogram(sieve, fn, p.x, 1.0, workers)
    total = weighted_sum(hist, p.B)
    exponent, c = analytic_exponent_total(p)
    return MomentReport(p, fn, total, math.log(total / p.x), exponent, c, math.floor(p.x))


def rough_prime_moment_sum(
    sieve: FactorSieve, T: float, a, A: float, z: float, workers: int = 1
) -> float:
    """``S(T) = sum_{p <= T} A**Omega_{>z}(a(p))``, with a(p) = p - 1 or p + 1."""
    fn = _single(a)
    if T < 2:
        return 0.0
    nt = math.floor(T)
    sieve.check(nt, "T")
    spf, code, zf = sieve.spf, fn.code, float(z)
    hist = np.zeros(_kernels.HIST_SIZE, dtype=np.int64)
    kernel = lambda lo, hi: _kernels.prime_image_omega_hist(spf, lo, hi, code, zf)  # noqa: E731
    for part in map_chunks(kernel, 2, nt + 1, workers):
        hist += part
    return weighted_sum(hist, A)
