# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Callers must respect the magnitude guards in kernels.py."""

from libc.math cimport sqrt

ctypedef unsigned long long u64
ctypedef long long i64

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"


cdef inline u64 _mulmod(u64 a, u64 b, u64 m) nogil:
    return <u64>((<u128>a * b) % m)


cdef inline u64 _powmod(u64 a, u64 e, u64 m) nogil:
    cdef u64 r = 1
    a %= m
    while e:
        if e & 1:
            r = _mulmod(r, a, m)
        a = _mulmod(a, a, m)
        e >>= 1
    return r


cdef bint _sprp(u64 n, u64 a, u64 d, int s) nogil:
    cdef u64 x = _powmod(a, d, n)
    cdef int i
    if x == 1 or x == n - 1:
        return True
    for i in range(s - 1):
        x = _mulmod(x, x, n)
        if x == n - 1:
            return True
    return False


def miller_rabin_u64(u64 n):
    """Deterministic Miller-Rabin for n < 2**64."""
    cdef u64[12] bases = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    cdef u64 d
    cdef int s = 0, i
    if n < 2:
        return False
    for i in range(12):
        if n % bases[i] == 0:
            return n == bases[i]
    d = n - 1
    while d % 2 == 0:
        d //= 2
        s += 1
    for i in range(12):
        if not _sprp(n, bases[i], d, s):
            return False
    return True


def norm_form_scan(i64 alpha, i64 target, i64 vmax):
    """All (u, v) with u >= 0, 0 <= v <= vmax and u*u - alpha*v*v == target."""
    cdef list out = []
    cdef i64 v, t, u
    for v in range(vmax + 1):
        t = target + alpha * v * v
        if t < 0:
            continue
        u = <i64>sqrt(<double>t)
        while u * u > t:
            u -= 1
        while (u + 1) * (u + 1) <= t:
            u += 1
        if u * u == t:
            out.append((u, v))
    return out
