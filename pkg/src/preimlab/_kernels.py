"""Compiled inner loops over a smallest-prime-factor table.

Every function takes the raw ``spf`` array (``spf[m]`` is the least prime
dividing ``m`` for ``2 <= m < len(spf)``) and works on a half-open range
``[lo, hi)`` so callers can split a scan into independent chunks.
Values that fall beyond the table are factored by trial division.
"""

import numpy as np
from numba import njit

PHI = 0
SIGMA = 1

# Largest possible Omega for int64 values, with slack.
HIST_SIZE = 128


@njit(cache=True, nogil=True)
def spf_table(limit):
    spf = np.zeros(limit + 1, dtype=np.uint32)
    if limit >= 1:
        spf[1] = 1
    i = 2
    while i * i <= limit:
        if spf[i] == 0:
            spf[i] = i
            for j in range(i * i, limit + 1, i):
                if spf[j] == 0:
                    spf[j] = i
        i += 1
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i] = i
    return spf


@njit(cache=True, nogil=True)
def omega_above(spf, n, z):
    """Omega_{>z}(n) for any n >= 1."""
    c = 0
    size = spf.shape[0]
    if n >= size:
        p = 2
        while p * p <= n and n >= size:
            while n % p == 0:
                n //= p
                if p > z:
                    c += 1
            p += 1 if p == 2 else 2
        if n >= size:
            # n is now prime
            if n > z:
                c += 1
            return c
    while n > 1:
        p = np.int64(spf[n])
        n //= p
        if p > z:
            c += 1
    return c


@njit(cache=True, nogil=True)
def largest_prime_factor(spf, n):
    g = 1
    while n > 1:
        g = np.int64(spf[n])
        n //= g
    return g


@njit(cache=True, nogil=True)
def phi_of(spf, n):
    r = 1
    while n > 1:
        p = np.int64(spf[n])
        n //= p
        r *= p - 1
        while n % p == 0:
            n //= p
            r *= p
    return r


@njit(cache=True, nogil=True)
def sigma_of(spf, n):
    r = 1
    while n > 1:
        p = np.int64(spf[n])
        pe = p
        n //= p
        while n % p == 0:
            n //= p
            pe *= p
        r *= (pe * p - 1) // (p - 1)
    return r


@njit(cache=True, nogil=True)
def omega_above_of_image(spf, n, which, z):
    """Omega_{>z}(a(n)) with a = phi or sigma, summed over prime powers of n.

    Omega is completely additive, so only the images of the prime powers
    exactly dividing n need factoring.
    """
    total = 0
    while n > 1:
        p = np.int64(spf[n])
        e = 0
        pe = 1
        while n % p == 0:
            n //= p
            e += 1
            pe *= p
        if which == PHI:
            if e > 1 and p > z:
                total += e - 1
            total += omega_above(spf, p - 1, z)
        else:
            total += omega_above(spf, (pe * p - 1) // (p - 1), z)
    return total


@njit(cache=True, nogil=True)
def phi_values(spf, lo, hi):
    out = np.empty(hi - lo, dtype=np.int64)
    for n in range(lo, hi):
        out[n - lo] = phi_of(spf, n)
    return out


@njit(cache=True, nogil=True)
def sigma_values(spf, lo, hi):
    out = np.empty(hi - lo, dtype=np.int64)
    for n in range(lo, hi):
        out[n - lo] = sigma_of(spf, n)
    return out


@njit(cache=True, nogil=True)
def image_omega_hist(spf, lo, hi, which, z):
    h = np.zeros(HIST_SIZE, dtype=np.int64)
    for n in range(lo, hi):
        h[omega_above_of_image(spf, n, which, z)] += 1
    return h


@njit(cache=True, nogil=True)
def prime_image_omega_hist(spf, lo, hi, which, z):
    """Histogram of Omega_{>z}(a(p)) over primes p in [lo, hi)."""
    h = np.zeros(HIST_SIZE, dtype=np.int64)
    for p in range(max(lo, 2), hi):
        if spf[p] != p:
            continue
        v = p - 1 if which == PHI else p + 1
        h[omega_above(spf, v, z)] += 1
    return h


@njit(cache=True, nogil=True)
def count_smooth(spf, lo, hi, y):
    c = 0
    for n in range(max(lo, 1), hi):
        if largest_prime_factor(spf, n) <= y:
            c += 1
    return c


@njit(cache=True, nogil=True)
def count_smooth_shifted_primes(spf, lo, hi, y):
    c = 0
    for p in range(max(lo, 2), hi):
        if spf[p] == p and largest_prime_factor(spf, p - 1) <= y:
            c += 1
    return c


@njit(cache=True, nogil=True)
def count_smooth_phi_iterate(spf, lo, hi, k, y):
    c = 0
    for m in range(max(lo, 1), hi):
        v = m
        for _ in range(k):
            if v == 1:
                break
            v = phi_of(spf, v)
        if largest_prime_factor(spf, v) <= y:
            c += 1
    return c


@njit(cache=True, nogil=True)
def count_image_multiples(spf, lo, hi, which, d):
    c = 0
    for n in range(max(lo, 1), hi):
        v = phi_of(spf, n) if which == PHI else sigma_of(spf, n)
        if v % d == 0:
            c += 1
    return c


@njit(cache=True, nogil=True)
def lemma3_extrema(spf, lo, hi):
    """Max of sigma(n)/(n log log 3n) and min of phi(n) log log 3n / n.

    Ties keep the smallest n.
    """
    best_hi = -1.0
    arg_hi = 0
    best_lo = np.inf
    arg_lo = 0
    for n in range(max(lo, 1), hi):
        ll = np.log(np.log(3.0 * n))
        r1 = sigma_of(spf, n) / (n * ll)
        r2 = phi_of(spf, n) * ll / n
        if r1 > best_hi:
            best_hi = r1
            arg_hi = n
        if r2 < best_lo:
            best_lo = r2
            arg_lo = n
    return best_hi, arg_hi, best_lo, arg_lo
