"""Pure-Python reference kernels. Always importable; the compiled module mirrors these."""

from math import isqrt

_DET_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
# all 13 bases above are a proof of primality below this bound
_DET_LIMIT = 3317044064679887385961981
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def _strong_probable_prime(n, a, d, s):
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def miller_rabin(n, extra_rounds=64):
    """Miller-Rabin; deterministic below ~3.3e24, else `extra_rounds` seeded random bases."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _DET_BASES:
        if not _strong_probable_prime(n, a, d, s):
            return False
    if n < _DET_LIMIT:
        return True
    import random

    rng = random.Random(n)
    for _ in range(extra_rounds):
        a = rng.randrange(2, n - 1)
        if not _strong_probable_prime(n, a, d, s):
            return False
    return True


def norm_form_scan(alpha, target, vmax):
    """All (u, v) with u >= 0, 0 <= v <= vmax and u*u - alpha*v*v == target."""
    out = []
    for v in range(vmax + 1):
        t = target + alpha * v * v
        if t < 0:
            continue
        u = isqrt(t)
        if u * u == t:
            out.append((u, v))
    return out
