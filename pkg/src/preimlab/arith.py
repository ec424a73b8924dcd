"""Exact integer arithmetic: factorizations, phi, sigma, Omega, and the
smallest-prime-factor sieve that backs every range scan.

All logarithms in the package are natural.
"""

from __future__ import annotations

import enum
import math
import os
import struct
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import DomainError, OutOfRangeError, ResourceError, SieveFormatError

# spf entries are uint32, so 4 bytes per integer up to the limit.
DEFAULT_MEMORY_BUDGET = 2 << 30
SPF_MAGIC = b"SPF1"


# ---------------------------------------------------------------------------
# Factorization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    """``value = prod(p**e for p, e in factors)`` with primes strictly increasing."""

    factors: tuple[tuple[int, int], ...]
    value: int

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factorization {self.factors!r}")
            last = p
            prod *= p**e
        if prod != self.value:
            raise ValueError(f"factors {self.factors!r} do not multiply to {self.value}")

    @classmethod
    def of(cls, n: int) -> Factorization:
        """Factor ``n`` by trial division (for isolated inputs above a sieve)."""
        return cls(tuple(trial_factor(n)), n)

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)


def trial_factor(n: int) -> list[tuple[int, int]]:
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out = []
    for p in (2, 3):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
    p = 5
    step = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
        p += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return out


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def divisors(f: Factorization) -> list[int]:
    divs = [1]
    for p, e in f.factors:
        divs = [d * p**i for d in divs for i in range(e + 1)]
    divs.sort()
    return divs


def phi(f: Factorization) -> int:
    r = 1
    for p, e in f.factors:
        r *= p ** (e - 1) * (p - 1)
    return r


def sigma(f: Factorization) -> int:
    r = 1
    for p, e in f.factors:
        r *= (p ** (e + 1) - 1) // (p - 1)
    return r


def big_omega(f: Factorization) -> int:
    return sum(e for _, e in f.factors)


def big_omega_above(f: Factorization, z: float) -> int:
    """Prime factors strictly greater than ``z``, counted with multiplicity."""
    if z < 1:
        raise DomainError(f"z must be >= 1, got {z}")
    return sum(e for p, e in f.factors if p > z)


def rough_smooth_split(f: Factorization, z: float) -> tuple[int, int]:
    """Return ``(rough, smooth)``: the parts built from primes > z and <= z."""
    if z < 1:
        raise DomainError(f"z must be >= 1, got {z}")
    rough = smooth = 1
    for p, e in f.factors:
        if p > z:
            rough *= p**e
        else:
            smooth *= p**e
    return rough, smooth


# ---------------------------------------------------------------------------
# Composition words
# ---------------------------------------------------------------------------


class Fn(enum.Enum):
    PHI = "p"
    SIGMA = "s"

    def __call__(self, f: Factorization) -> int:
        return phi(f) if self is Fn.PHI else sigma(f)

    @property
    def code(self) -> int:
        return _kernels.PHI if self is Fn.PHI else _kernels.SIGMA

    @classmethod
    def parse(cls, s: str) -> Fn:
        key = s.strip().lower()
        if key in ("p", "phi"):
            return cls.PHI
        if key in ("s", "sigma"):
            return cls.SIGMA
        raise ValueError(f"unknown arithmetic function {s!r}")


@dataclass(frozen=True)
class ArithWord:
    """A composition ``a1 o a2 o ... o ak``; ``symbols[0]`` is applied last.

    The string form lists symbols outermost first, so ``"ps"`` is phi(sigma(m)).
    """

    symbols: tuple[Fn, ...]

    def __post_init__(self):
        if not self.symbols:
            raise DomainError("a word needs at least one symbol")

    @classmethod
    def iterate_of(cls, fn: Fn, k: int) -> ArithWord:
        if k < 1:
            raise DomainError(f"iterate length must be >= 1, got {k}")
        return cls((fn,) * k)

    @classmethod
    def phi_k(cls, k: int) -> ArithWord:
        return cls.iterate_of(Fn.PHI, k)

    @classmethod
    def sigma_k(cls, k: int) -> ArithWord:
        return cls.iterate_of(Fn.SIGMA, k)

    @classmethod
    def parse(cls, text: str) -> ArithWord:
        """Accept ``"ps"``, ``"phi"``, ``"sigma"``, ``"phi^3"``, ``"sigma^2"``."""
        t = text.strip().lower()
        if "^" in t:
            base, _, k = t.partition("^")
            try:
                return cls.iterate_of(Fn.parse(base), int(k))
            except ValueError as exc:
                raise ValueError(f"bad word {text!r}: {exc}") from None
        if t in ("phi", "sigma"):
            return cls((Fn.parse(t),))
        if not t or set(t) - {"p", "s"}:
            raise ValueError(f"bad word {text!r}: expected letters p/s or phi^k/sigma^k")
        return cls(tuple(Fn(c) for c in t))

    def __len__(self):
        return len(self.symbols)

    def __str__(self):
        return "".join(s.value for s in self.symbols)

    def then(self, fn: Fn) -> ArithWord:
        """Word that applies ``fn`` first and then this word."""
        return ArithWord(self.symbols + (fn,))

    def __call__(self, m: int) -> int:
        for fn in reversed(self.symbols):
            m = fn(Factorization.of(m))
        return m


# ---------------------------------------------------------------------------
# Sieve
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FactorSieve:
    """Smallest-prime-factor table; ``spf[m]`` for ``2 <= m <= limit``.

    ``spf[0] = 0`` and ``spf[1] = 1`` are padding. Treat the array as
    read-only; it may be shared across threads.
    """

    limit: int
    spf: np.ndarray = field(repr=False)

    @cached_property
    def primes(self) -> np.ndarray:
        idx = np.arange(self.spf.shape[0], dtype=np.int64)
        mask = self.spf == idx
        mask[:2] = False
        return np.flatnonzero(mask)

    def check(self, m, what="value"):
        if m > self.limit:
            raise OutOfRangeError(f"{what} {m} exceeds sieve limit {self.limit}")

    def is_prime(self, n: int) -> bool:
        if n <= self.limit:
            return n >= 2 and int(self.spf[n]) == n
        return is_prime(n)

    def factor(self, m: int) -> Factorization:
        """Factor ``m``; uses the table when possible, trial division above it."""
        if m > self.limit:
            return Factorization.of(m)
        return factorize(self, m)


def build_sieve(limit: int, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> FactorSieve:
    if limit < 2:
        raise DomainError(f"sieve limit must be >= 2, got {limit}")
    if 4 * (limit + 1) > memory_budget:
        raise ResourceError(
            f"sieve to {limit} needs {4 * (limit + 1)} bytes, budget is {memory_budget}"
        )
    if limit >= 2**32:
        raise ResourceError(f"sieve limit {limit} does not fit 32-bit table entries")
    spf = _kernels.spf_table(int(limit))
    spf.flags.writeable = False
    return FactorSieve(int(limit), spf)


def factorize(sieve: FactorSieve, m: int) -> Factorization:
    if m < 1:
        raise DomainError(f"cannot factor {m}")
    sieve.check(m)
    spf = sieve.spf
    value = m
    out = []
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        out.append((p, e))
    return Factorization(tuple(out), value)


def iterate(sieve: FactorSieve, w: ArithWord, m: int) -> int:
    """Apply ``w`` to ``m`` right to left, factoring each step with the sieve."""
    k = len(w)
    for step, fn in enumerate(reversed(w.symbols), 1):
        if m > sieve.limit:
            raise OutOfRangeError(
                f"step {step}/{k} ({fn.name}): intermediate {m} exceeds sieve limit {sieve.limit}"
            )
        m = fn(factorize(sieve, m))
    return m


def prime_count(sieve: FactorSieve, x: float) -> int:
    if x < 2:
        return 0
    sieve.check(math.floor(x), "x")
    return int(np.searchsorted(sieve.primes, math.floor(x), side="right"))


def phi_table(sieve: FactorSieve, hi: int | None = None) -> np.ndarray:
    """``out[m] = phi(m)`` for ``0 <= m <= hi`` (``out[0] = 0``)."""
    hi = sieve.limit if hi is None else hi
    sieve.check(hi)
    out = np.zeros(hi + 1, dtype=np.int64)
    out[1:] = _kernels.phi_values(sieve.spf, 1, hi + 1)
    return out


def sigma_table(sieve: FactorSieve, hi: int | None = None) -> np.ndarray:
    hi = sieve.limit if hi is None else hi
    sieve.check(hi)
    out = np.zeros(hi + 1, dtype=np.int64)
    out[1:] = _kernels.sigma_values(sieve.spf, 1, hi + 1)
    return out


# ---------------------------------------------------------------------------
# Cache file: b"SPF1", u64 LE limit, then spf[2..limit] as u32 LE.
# ---------------------------------------------------------------------------


def save_sieve(sieve: FactorSieve, path: str | os.PathLike) -> None:
    with open(path, "wb") as fh:
        fh.write(SPF_MAGIC)
        fh.write(struct.pack("<Q", sieve.limit))
        fh.write(sieve.spf[2:].astype("<u4", copy=False).tobytes())


def load_sieve(
    path: str | os.PathLike, memory_budget: int = DEFAULT_MEMORY_BUDGET
) -> FactorSieve:
    with open(path, "rb") as fh:
        head = fh.read(12)
        if len(head) < 12 or head[:4] != SPF_MAGIC:
            raise SieveFormatError(f"{path}: missing SPF1 header")
        (limit,) = struct.unpack("<Q", head[4:])
        if limit < 2 or limit >= 2**32:
            raise SieveFormatError(f"{path}: invalid limit {limit}")
        if 4 * (limit + 1) > memory_budget:
            raise ResourceError(f"{path}: limit {limit} exceeds memory budget")
        body = fh.read()
    want = 4 * (limit - 1)
    if len(body) != want:
        raise SieveFormatError(f"{path}: expected {want} table bytes, found {len(body)}")
    spf = np.empty(limit + 1, dtype=np.uint32)
    spf[0], spf[1] = 0, 1
    spf[2:] = np.frombuffer(body, dtype="<u4")
    if spf[2] != 2 or (limit >= 3 and spf[3] != 3):
        raise SieveFormatError(f"{path}: table contents are not a smallest-prime-factor sieve")
    spf.flags.writeable = False
    return FactorSieve(int(limit), spf)


def words_up_to(k: int) -> list[ArithWord]:
    """All words over {phi, sigma} of length 1..k, shortest first."""
    out: list[ArithWord] = []
    layer: list[Sequence[Fn]] = [()]
    for _ in range(k):
        layer = [w + (f,) for w in layer for f in Fn]
        out.extend(ArithWord(tuple(w)) for w in layer)
    return out
