"""Rational-integer number theory used by the integerization steps."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import kernels
from .errors import BudgetExhausted, GcdNotOne, ModuliNotCoprime, PipelineInvariantViolated, ZeroHasNoFactorization


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, u, v) with u*a + v*b == g == gcd(a, b) >= 0."""
    r0, r1 = a, b
    s0, s1 = 1, 0
    t0, t1 = 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0 < 0:
        r0, s0, t0 = -r0, -s0, -t0
    return r0, s0, t0


@dataclass(frozen=True)
class Congruence:
    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        if not 0 <= self.residue < self.modulus:
            object.__setattr__(self, "residue", self.residue % self.modulus)

    def holds(self, n: int) -> bool:
        return (n - self.residue) % self.modulus == 0


def crt(system) -> Congruence:
    """Combine pairwise-coprime congruences into one."""
    r, m = 0, 1
    for c in system:
        g, s, _ = ext_gcd(m, c.modulus)
        if g != 1:
            raise ModuliNotCoprime(f"moduli {m} and {c.modulus} share the factor {g}")
        # r + m*k == c.residue (mod c.modulus), with s == m^-1
        k = ((c.residue - r) * s) % c.modulus
        r, m = r + m * k, m * c.modulus
    return Congruence(r % m, m)


def is_prime(n: int) -> bool:
    return kernels.is_probable_prime(n)


def _pollard_brent(n: int) -> int:
    """A nontrivial factor of the odd composite n."""
    for c in range(1, n):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"no factor found for {n}")  # unreachable for composite n


_TRIAL_LIMIT = 1000


def prime_divisors(n: int) -> set[int]:
    """Distinct primes dividing |n|."""
    if n == 0:
        raise ZeroHasNoFactorization("0 has no prime factorization")
    n = abs(n)
    out = set()
    p = 2
    while p < _TRIAL_LIMIT and p * p <= n:
        if n % p == 0:
            out.add(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            out.add(m)
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack.append(r)
            continue
        d = _pollard_brent(m)
        stack.extend((d, m // d))
    return out


def dirichlet_prime_search(A: int, B: int, forbidden=frozenset(), coprime_to: int = 1,
                           f_max: int = 10**6) -> tuple[int, int]:
    """Smallest f >= 0 with p = A*f + B a positive prime, p not forbidden, gcd(p, coprime_to) = 1.

    Scanning starts at the least f making A*f + B positive.
    """
    if A == 0:
        raise GcdNotOne("A must be nonzero")
    if math.gcd(A, B) != 1:
        raise GcdNotOne(f"gcd({A}, {B}) = {math.gcd(A, B)} != 1")
    if A > 0:
        f0 = 0 if B > 0 else (-B) // A + 1
        f_stop = f0 + f_max
    else:
        # the progression decreases; only finitely many positive terms
        if B <= 0:
            raise BudgetExhausted(f"no positive term in {A}*f + {B} for f >= 0")
        f0, f_stop = 0, min(f_max, (B - 1) // (-A))
    for f in range(f0, f_stop + 1):
        p = A * f + B
        if p in forbidden or math.gcd(p, coprime_to) != 1:
            continue
        if is_prime(p):
            return f, p
    raise BudgetExhausted(f"no admissible prime in {A}*f + {B} for f in [{f0}, {f_stop}]",
                          partial=f_stop)


def checked_prime_search(A, B, forbidden=frozenset(), coprime_to=1, f_max=10**6, retries=4):
    """dirichlet_prime_search with doubling budget and a postcondition check on the result."""
    budget = f_max
    for attempt in range(retries + 1):
        try:
            f, p = dirichlet_prime_search(A, B, forbidden, coprime_to, budget)
        except BudgetExhausted:
            if attempt == retries or A < 0:
                raise
            budget *= 2
            continue
        ok = f >= 0 and p == A * f + B and p > 0 and is_prime(p)
        if not ok or p in forbidden or math.gcd(p, coprime_to) != 1:
            raise PipelineInvariantViolated("prime_search", f"f={f}, p={p} breaks a posted condition")
        return f, p
    raise BudgetExhausted("unreachable")
