"""Exact preimages of phi, sigma, and composition words over them.

Both single-step enumerators work by unique factorization: a preimage m is
a product of prime powers p**e with pairwise distinct p, and a(m) is the
product of the a(p**e). So we list the divisors d of n that are of the form
a(p**e), then pick a subset with distinct primes whose product is n. Primes
are chosen in decreasing order, which makes every m appear exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import ArithWord, FactorSieve, Factorization, Fn, divisors, is_prime
from .errors import DomainError, TruncationError

DEFAULT_CAP = 10**6


class _CapHit(Exception):
    pass


@dataclass(frozen=True)
class PreimageLevels:
    """Inverse images of ``target`` under the tails of ``word``.

    ``levels[j - 1]`` is the set of m with ``(a1 o ... o aj)(m) == target``.
    When ``truncated`` is true the levels are incomplete and their sizes
    must not be read as counts.
    """

    target: int
    word: ArithWord
    levels: tuple[tuple[int, ...], ...]
    truncated: bool

    @property
    def deepest(self) -> tuple[int, ...]:
        return self.levels[-1] if self.levels else ()


def _iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n."""
    r = int(round(n ** (1.0 / k)))
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


class Inverter:
    """Preimage enumerator with per-instance memoization.

    A sieve, when given, speeds factoring and primality tests for values up
    to its limit; results never depend on it.
    """

    def __init__(self, sieve: FactorSieve | None = None, cap: int = DEFAULT_CAP):
        if cap < 1:
            raise DomainError(f"cap must be >= 1, got {cap}")
        self.sieve = sieve
        self.cap = cap
        self._cache: dict[tuple[Fn, int], tuple[int, ...]] = {}

    def factor(self, n: int) -> Factorization:
        if self.sieve is not None and n <= self.sieve.limit:
            return self.sieve.factor(n)
        return Factorization.of(n)

    def _is_prime(self, n: int) -> bool:
        if self.sieve is not None:
            return self.sieve.is_prime(n)
        return is_prime(n)

    # -- single step ------------------------------------------------------

    def preimages(self, fn: Fn, n: int) -> tuple[int, ...]:
        """Sorted tuple of all m with fn(m) == n.

        Raises TruncationError (with the partial result) past ``cap``.
        """
        if n < 1:
            raise DomainError(f"target must be >= 1, got {n}")
        key = (fn, n)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out: list[int] = []
        try:
            if fn is Fn.PHI:
                self._phi_search(n, out)
            else:
                self._sigma_search(n, out)
        except _CapHit:
            raise TruncationError(
                f"{fn.name} preimages of {n} exceed cap {self.cap}",
                partial=tuple(sorted(out[: self.cap])),
            ) from None
        res = tuple(sorted(out))
        self._cache[key] = res
        return res

    def _emit(self, out, m):
        out.append(m)
        if len(out) > self.cap:
            raise _CapHit

    def _phi_search(self, n, out):
        # phi(p**e) = p**(e-1) * (p-1): p - 1 must divide n.
        primes = [d + 1 for d in divisors(self.factor(n)) if self._is_prime(d + 1)]
        primes.reverse()
        has_two = bool(primes) and primes[-1] == 2

        def walk(rem, start, m):
            if rem == 1:
                self._emit(out, m)
                if has_two:
                    # phi(2) = 1, so 2m is a preimage too (m is odd here)
                    self._emit(out, 2 * m)
                return
            if rem & 1:
                # every odd prime contributes an even p - 1
                return
            for i in range(start, len(primes)):
                p = primes[i]
                if p == 2:
                    # only powers of two remain: m * 2**(v+1) with phi = 2**v
                    if rem & (rem - 1) == 0:
                        self._emit(out, m * 2 * rem)
                    return
                if rem % (p - 1):
                    continue
                r = rem // (p - 1)
                mp = m * p
                while True:
                    walk(r, i + 1, mp)
                    if r % p:
                        break
                    r //= p
                    mp *= p

        walk(n, 0, 1)

    def _sigma_search(self, n, out):
        # Candidate prime powers p**e with sigma(p**e) dividing n. For e >= 2,
        # p**e < sigma(p**e) < (p+1)**e pins p to the floor of the e-th root.
        cands = []
        for d in divisors(self.factor(n)):
            if d < 3:
                continue
            if self._is_prime(d - 1):
                cands.append((d - 1, 1, d))
            e = 2
            while (1 << (e + 1)) - 1 <= d:
                p = _iroot(d, e)
                if p >= 2 and (p ** (e + 1) - 1) // (p - 1) == d and self._is_prime(p):
                    cands.append((p, e, d))
                e += 1
        cands.sort(reverse=True)

        def walk(rem, start, m, last_p):
            if rem == 1:
                self._emit(out, m)
                return
            for i in range(start, len(cands)):
                p, e, d = cands[i]
                if p == last_p or rem % d:
                    continue
                walk(rem // d, i + 1, m * p**e, p)

        walk(n, 0, 1, 0)

    # -- words ------------------------------------------------------------

    def levels(self, w: ArithWord, n: int) -> PreimageLevels:
        """Breadth-first inverse images; stops early and flags truncation at ``cap``."""
        if n < 1:
            raise DomainError(f"target must be >= 1, got {n}")
        levels: list[tuple[int, ...]] = []
        current: tuple[int, ...] = (n,)
        for fn in w.symbols:
            nxt: list[int] = []
            for ell in current:
                try:
                    part = self.preimages(fn, ell)
                except TruncationError as exc:
                    nxt.extend(exc.partial)
                    levels.append(tuple(sorted(nxt)[: self.cap]))
                    return PreimageLevels(n, w, tuple(levels), True)
                nxt.extend(part)
                if len(nxt) > self.cap:
                    levels.append(tuple(sorted(nxt)[: self.cap]))
                    return PreimageLevels(n, w, tuple(levels), True)
            # a function maps each m to one value, so the parts are disjoint
            current = tuple(sorted(nxt))
            levels.append(current)
        return PreimageLevels(n, w, tuple(levels), False)

    def count(self, w: ArithWord, n: int) -> int:
        res = self.levels(w, n)
        if res.truncated:
            raise TruncationError(
                f"preimages of {n} under {w} exceed cap {self.cap}", partial=res.deepest
            )
        return len(res.deepest)


def phi_preimages(n: int, sieve: FactorSieve | None = None, cap: int = DEFAULT_CAP) -> list[int]:
    return list(Inverter(sieve, cap).preimages(Fn.PHI, n))


def sigma_preimages(n: int, sieve: FactorSieve | None = None, cap: int = DEFAULT_CAP) -> list[int]:
    return list(Inverter(sieve, cap).preimages(Fn.SIGMA, n))


def iterated_preimages(
    w: ArithWord, n: int, cap: int = DEFAULT_CAP, sieve: FactorSieve | None = None
) -> PreimageLevels:
    return Inverter(sieve, cap).levels(w, n)


def count_preimages(
    w: ArithWord, n: int, cap: int = DEFAULT_CAP, sieve: FactorSieve | None = None
) -> int:
    """N(n) = #{m : w(m) = n}; raises TruncationError instead of undercounting."""
    return Inverter(sieve, cap).count(w, n)
