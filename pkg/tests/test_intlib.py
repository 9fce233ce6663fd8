import math
import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from idemfactor.errors import BudgetExhausted, GcdNotOne, ModuliNotCoprime, ZeroHasNoFactorization
from idemfactor.intlib import Congruence, checked_prime_search, crt, dirichlet_prime_search, ext_gcd, is_prime, prime_divisors


@pytest.mark.parametrize("a,b,expected", [(240, 46, (2, -9, 47)), (0, 7, (7, 0, 1)), (-4, 6, (2, 1, 1))])
def test_ext_gcd_examples(a, b, expected):
    assert ext_gcd(a, b) == expected


def test_ext_gcd_bezout_bulk():
    rng = random.Random(5)
    for _ in range(10**4):
        a = rng.choice([0, rng.randint(-10**12, 10**12), rng.randint(-50, 50)])
        b = rng.choice([0, rng.randint(-10**12, 10**12), rng.randint(-50, 50)])
        g, u, v = ext_gcd(a, b)
        assert g == math.gcd(a, b) and a * u + b * v == g


@pytest.mark.parametrize("system,expected", [
    ([Congruence(2, 3), Congruence(3, 5)], Congruence(8, 15)),
    ([Congruence(4, 7)], Congruence(4, 7)),
    ([], Congruence(0, 1)),
])
def test_crt_examples(system, expected):
    assert crt(system) == expected


def test_crt_rejects_shared_factor():
    with pytest.raises(ModuliNotCoprime):
        crt([Congruence(1, 6), Congruence(2, 4)])


def test_congruence_normalizes():
    assert Congruence(-1, 5).residue == 4
    with pytest.raises(ValueError):
        Congruence(0, 0)


def test_crt_bulk():
    rng = random.Random(11)
    primes = list(sympy.primerange(2, 200))
    for _ in range(1000):
        mods = rng.sample(primes, rng.randint(1, 5))
        mods = [p ** rng.randint(1, 2) for p in mods]
        system = [Congruence(rng.randrange(m), m) for m in mods]
        out = crt(system)
        assert out.modulus == math.prod(mods)
        assert all(out.residue % c.modulus == c.residue for c in system)


def test_is_prime_examples():
    assert is_prime(97)
    assert not is_prime(1) and not is_prime(0) and not is_prime(-7)


@given(st.integers(min_value=-100, max_value=10**18))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


@pytest.mark.parametrize("n", [
    3317044064679887385961981,           # beyond the deterministic base set
    2**89 - 1, 2**127 - 1,                # Mersenne primes
    (2**61 - 1) * (2**31 - 1),            # semiprime past 64 bits
    3825123056546413051,                  # strong pseudoprime to bases 2..23
    318665857834031151167461,
])
def test_is_prime_large(n):
    assert is_prime(n) == sympy.isprime(n)


def test_prime_divisors_examples():
    assert prime_divisors(-30) == {2, 3, 5}
    assert prime_divisors(1) == set()
    with pytest.raises(ZeroHasNoFactorization):
        prime_divisors(0)


@given(st.integers(min_value=1, max_value=10**15))
def test_prime_divisors_matches_sympy(n):
    assert prime_divisors(n) == set(sympy.factorint(n))


def test_prime_divisors_hard_semiprime():
    p, q = 1000000007, 998244353
    assert prime_divisors(p * q * 12) == {2, 3, p, q}


@pytest.mark.parametrize("args,expected", [
    ((4, 3, frozenset(), 1, 10**3), (0, 3)),
    ((6, 1, frozenset({7}), 1, 10**3), (2, 13)),
    ((10, 3, frozenset(), 13, 10**3), (0, 3)),
])
def test_dirichlet_examples(args, expected):
    assert dirichlet_prime_search(*args) == expected


def test_dirichlet_errors():
    with pytest.raises(GcdNotOne):
        dirichlet_prime_search(6, 4)
    with pytest.raises(GcdNotOne):
        dirichlet_prime_search(0, 1)
    with pytest.raises(BudgetExhausted):
        dirichlet_prime_search(1, 24, f_max=4)   # 24..28 hold no prime


def test_dirichlet_negative_start():
    f, p = dirichlet_prime_search(5, -12)
    assert (f, p) == (3, 3)


def test_dirichlet_conditions_bulk():
    rng = random.Random(3)
    for _ in range(500):
        A = rng.randint(1, 500)
        B = rng.randint(-1000, 1000)
        if math.gcd(A, B) != 1:
            continue
        forbidden = frozenset(rng.sample(list(sympy.primerange(2, 100)), 3))
        other = rng.randint(1, 60)
        f, p = checked_prime_search(A, B, forbidden, other)
        assert p == A * f + B and p > 0 and sympy.isprime(p)
        assert p not in forbidden and math.gcd(p, other) == 1
        # minimality among admissible f
        for g in range(f):
            q = A * g + B
            assert q <= 0 or not sympy.isprime(q) or q in forbidden or math.gcd(q, other) != 1
