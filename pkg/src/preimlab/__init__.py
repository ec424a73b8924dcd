"""Preimages of iterated totient and sum-of-divisors functions.

Exact preimage enumeration for phi, sigma and their compositions, moment
sums of Omega over their values, smooth-number counts, and the bound
checks that go with them.
"""

__version__ = "0.1.0"

from .arith import (
    ArithWord,
    FactorSieve,
    Factorization,
    Fn,
    big_omega,
    big_omega_above,
    build_sieve,
    factorize,
    iterate,
    phi,
    prime_count,
    rough_smooth_split,
    sigma,
)
from .errors import (
    DomainError,
    OutOfRangeError,
    PreimlabError,
    ResourceError,
    SieveFormatError,
    TruncationError,
)
