import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import gcd_phi, naive_factor, naive_is_prime, naive_omega, naive_sigma
from preimlab import (
    ArithWord,
    DomainError,
    Factorization,
    Fn,
    OutOfRangeError,
    ResourceError,
    SieveFormatError,
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
from preimlab.arith import (
    divisors,
    is_prime,
    load_sieve,
    phi_table,
    save_sieve,
    sigma_table,
    words_up_to,
)

F = Factorization.of


def test_spf_small():
    s = build_sieve(10)
    assert [int(v) for v in s.spf[2:11]] == [2, 3, 2, 5, 2, 7, 2, 3, 2]
    s2 = build_sieve(2)
    assert s2.limit == 2 and int(s2.spf[2]) == 2
    s30 = build_sieve(30)
    assert int(s30.spf[25]) == 5 and int(s30.spf[29]) == 29


def test_spf_is_least_prime_divisor(sieve_small):
    spf = sieve_small.spf
    for m in range(2, 3000):
        p = int(spf[m])
        assert m % p == 0 and naive_is_prime(p)
        assert p == min(naive_factor(m))


def test_sieve_guards():
    with pytest.raises(DomainError):
        build_sieve(1)
    with pytest.raises(ResourceError):
        build_sieve(10**6, memory_budget=1000)
    with pytest.raises(ResourceError):
        build_sieve(2**32, memory_budget=2**40)


def test_sieve_table_read_only(sieve_small):
    with pytest.raises(ValueError):
        sieve_small.spf[5] = 3


def test_factorize_examples(sieve_small):
    assert factorize(sieve_small, 360).factors == ((2, 3), (3, 2), (5, 1))
    assert factorize(sieve_small, 1).factors == ()
    assert factorize(build_sieve(97), 97).factors == ((97, 1),)
    with pytest.raises(OutOfRangeError):
        factorize(build_sieve(10), 11)


def test_factorization_validates():
    with pytest.raises(ValueError):
        Factorization(((3, 1), (2, 1)), 6)
    with pytest.raises(ValueError):
        Factorization(((2, 1),), 3)


def test_phi_sigma_examples():
    assert phi(F(12)) == 4 and sigma(F(12)) == 28
    assert phi(F(1)) == 1 and sigma(F(1)) == 1
    p = 1_000_003
    assert phi(F(p)) == p - 1 and sigma(F(p)) == p + 1


def test_phi_sigma_against_naive():
    for n in range(1, 400):
        assert phi(F(n)) == gcd_phi(n)
        assert sigma(F(n)) == naive_sigma(n)


def test_tables_match_scalar(sieve_small):
    ph, sg = phi_table(sieve_small, 2000), sigma_table(sieve_small, 2000)
    assert ph[0] == 0 and sg[0] == 0
    for m in range(1, 2001):
        f = sieve_small.factor(m)
        assert ph[m] == phi(f) and sg[m] == sigma(f)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5000), st.integers(1, 5000))
def test_multiplicative(a, b):
    if math.gcd(a, b) != 1:
        return
    assert phi(F(a * b)) == phi(F(a)) * phi(F(b))
    assert sigma(F(a * b)) == sigma(F(a)) * sigma(F(b))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10**6))
def test_phi_sigma_bracket(m):
    f = F(m)
    assert phi(f) <= m <= sigma(f)
    if m > 1:
        assert phi(f) < m < sigma(f)


def test_omega_examples():
    assert big_omega(F(360)) == 6
    assert big_omega_above(F(360), 2) == 3
    assert big_omega_above(F(360), 5) == 0
    assert big_omega_above(F(1), 1) == 0
    assert rough_smooth_split(F(360), 2) == (45, 8)
    with pytest.raises(DomainError):
        big_omega_above(F(10), 0.5)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10**6), st.floats(1, 50), st.floats(1, 50))
def test_omega_properties(n, z1, z2):
    f = F(n)
    lo, hi = sorted((z1, z2))
    assert big_omega_above(f, 1) == big_omega(f) == naive_omega(n)
    assert big_omega_above(f, hi) <= big_omega_above(f, lo)
    rough, smooth = rough_smooth_split(f, lo)
    assert rough * smooth == n
    assert big_omega(F(rough)) == big_omega_above(f, lo)
    assert all(p <= lo for p, _ in F(smooth)) and all(p > lo for p, _ in F(rough))


def test_iterate_examples(sieve_small):
    assert iterate(sieve_small, ArithWord.phi_k(2), 12) == 2
    assert iterate(sieve_small, ArithWord.parse("ps"), 6) == 4
    assert iterate(sieve_small, ArithWord.parse("sp"), 6) == 3
    assert iterate(sieve_small, ArithWord.parse("ps"), 6) == ArithWord.parse("ps")(6)


def test_iterate_names_failing_step():
    s = build_sieve(10)
    with pytest.raises(OutOfRangeError, match="step 2/2"):
        iterate(s, ArithWord.sigma_k(2), 9)  # sigma(9) = 13 > 10


def test_word_parsing():
    assert ArithWord.parse("phi^3") == ArithWord.phi_k(3)
    assert ArithWord.parse("sigma") == ArithWord((Fn.SIGMA,))
    assert str(ArithWord.parse("PS")) == "ps"
    assert ArithWord.parse("p").then(Fn.SIGMA) == ArithWord.parse("ps")
    for bad in ("", "px", "phi^0", "tau^2"):
        with pytest.raises(ValueError):
            ArithWord.parse(bad)
    assert Fn.parse("phi") is Fn.PHI and Fn.parse("s") is Fn.SIGMA
    assert len(words_up_to(3)) == 14


def test_prime_count(sieve_small):
    assert prime_count(sieve_small, 10) == 4
    assert prime_count(sieve_small, 100) == 25
    assert prime_count(sieve_small, 1.5) == 0
    assert prime_count(sieve_small, 10.9) == 4
    running = 0
    for x in range(2, 10**4 + 1):
        running += naive_is_prime(x)
        if x % 97 == 0 or x == 10**4:
            assert prime_count(sieve_small, x) == running


def test_is_prime():
    s = build_sieve(10**5)
    for n in range(10**5):
        assert is_prime(n) == s.is_prime(n)
    assert is_prime(2**61 - 1) and not is_prime(2**61 + 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


def test_divisors():
    assert sorted(divisors(F(12))) == [1, 2, 3, 4, 6, 12]
    assert sorted(divisors(F(1))) == [1]


def test_sieve_cache_roundtrip(tmp_path):
    s = build_sieve(5000)
    path = tmp_path / "s.spf"
    save_sieve(s, path)
    t = load_sieve(path)
    assert t.limit == 5000 and np.array_equal(t.spf, s.spf)


def test_sieve_cache_rejects_bad_files(tmp_path):
    s = build_sieve(5000)
    good = tmp_path / "good.spf"
    save_sieve(s, good)
    raw = good.read_bytes()
    cases = {
        "magic": b"XXXX" + raw[4:],
        "short": raw[:-4],
        "long": raw + b"\0\0\0\0",
        "empty": b"",
        "content": raw[:12] + b"\x05\0\0\0" + raw[16:],
    }
    for name, blob in cases.items():
        p = tmp_path / f"{name}.spf"
        p.write_bytes(blob)
        with pytest.raises(SieveFormatError):
            load_sieve(p)
