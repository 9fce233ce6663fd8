"""Exact arithmetic in the ring of integers of Q(sqrt(alpha)), alpha > 1 square-free.

Elements are stored in half-coordinates (u + v*sqrt(alpha))/2 with u = v (mod 2);
when alpha = 2, 3 (mod 4) both u and v are even. The integral basis is {1, w}
with w = sqrt(alpha) or (1 + sqrt(alpha))/2, and "basis coordinates" (c1, c2)
mean c1 + c2*w.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

from .errors import (
    AlphaZeroModFour,
    NotDivisible,
    NotPositive,
    NotSquareFree,
    ParseError,
    RingMismatch,
)


@dataclass(frozen=True)
class RingSpec:
    alpha: int

    @property
    def branch(self) -> tuple[int, ...]:
        return (1,) if self.alpha % 4 == 1 else (2, 3)

    @property
    def is_one_mod_four(self) -> bool:
        return self.alpha % 4 == 1

    @property
    def omega(self) -> str:
        return f"(1+sqrt({self.alpha}))/2" if self.is_one_mod_four else f"sqrt({self.alpha})"

    @property
    def discriminant(self) -> int:
        return self.alpha if self.is_one_mod_four else 4 * self.alpha

    # convenient constructors
    def __call__(self, c1: int, c2: int = 0) -> QuadInt:
        return from_basis_coords(self, c1, c2)

    def zero(self) -> QuadInt:
        return QuadInt(self, 0, 0)

    def one(self) -> QuadInt:
        return QuadInt(self, 2, 0)

    def w(self) -> QuadInt:
        return from_basis_coords(self, 0, 1)

    def sqrt_alpha(self) -> QuadInt:
        return QuadInt(self, 0, 2)

    def __str__(self):
        return f"O(Q(sqrt({self.alpha})))"


def _is_square_free(n: int) -> bool:
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


@lru_cache(maxsize=None)
def make_ring(alpha: int) -> RingSpec:
    if alpha < 2:
        raise NotPositive(f"alpha must be >= 2, got {alpha}")
    if alpha % 4 == 0:
        raise AlphaZeroModFour(f"alpha not square-free: {alpha} = 0 (mod 4)")
    if not _is_square_free(alpha):
        raise NotSquareFree(f"alpha not square-free: {alpha}")
    return RingSpec(alpha)


@dataclass(frozen=True, slots=True)
class QuadInt:
    """(u + v*sqrt(alpha))/2 in the ring of integers."""

    ring: RingSpec
    u: int
    v: int

    def __post_init__(self):
        if (self.u - self.v) % 2:
            raise ValueError(f"parity violated: u={self.u}, v={self.v}")
        if not self.ring.is_one_mod_four and (self.u % 2 or self.v % 2):
            raise ValueError(f"not integral over Z[sqrt({self.ring.alpha})]: u={self.u}, v={self.v}")

    # --- coercion -----------------------------------------------------
    def _lift(self, other) -> QuadInt:
        if isinstance(other, QuadInt):
            if other.ring.alpha != self.ring.alpha:
                raise RingMismatch(f"alpha {self.ring.alpha} vs {other.ring.alpha}")
            return other
        if isinstance(other, int):
            return QuadInt(self.ring, 2 * other, 0)
        return NotImplemented

    # --- ring operations ------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.ring, self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return QuadInt(self.ring, -self.u, -self.v)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.ring, self.u - o.u, self.v - o.v)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        a = self.ring.alpha
        return QuadInt(self.ring, (self.u * o.u + a * self.v * o.v) // 2, (self.u * o.v + o.u * self.v) // 2)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        base = self
        if k < 0:
            if not self.is_unit():
                raise ValueError("negative exponent of a non-unit")
            base, k = self.conj() * self.norm(), -k
        out = self.ring.one()
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            return self.v == 0 and self.u == 2 * other
        if isinstance(other, QuadInt):
            return self.ring.alpha == other.ring.alpha and self.u == other.u and self.v == other.v
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.alpha, self.u, self.v))

    def __bool__(self):
        return self.u != 0 or self.v != 0

    # --- invariants of the element ----------------------------------------
    def conj(self) -> QuadInt:
        return QuadInt(self.ring, self.u, -self.v)

    def trace(self) -> int:
        return self.u

    def norm(self) -> int:
        return (self.u * self.u - self.ring.alpha * self.v * self.v) // 4

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def is_rational(self) -> bool:
        return self.v == 0

    def as_int(self) -> int:
        if self.v:
            raise ValueError(f"{self} is not rational")
        return self.u // 2

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def sign(self) -> int:
        """Sign of the real embedding with sqrt(alpha) > 0."""
        u, v = self.u, self.v
        if u >= 0 and v >= 0:
            return 1 if (u or v) else 0
        if u <= 0 and v <= 0:
            return -1
        # opposite signs: compare u^2 against alpha v^2
        big_u = u * u > self.ring.alpha * v * v
        return (1 if u > 0 else -1) if big_u else (1 if v > 0 else -1)

    def exact_div(self, d) -> QuadInt:
        d = self._lift(d)
        n = d.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero element")
        p = self * d.conj()
        if p.u % n or p.v % n:
            raise NotDivisible(f"{format_elem(self)} is not divisible by {format_elem(d)}")
        try:
            return QuadInt(self.ring, p.u // n, p.v // n)
        except ValueError as exc:
            raise NotDivisible(f"{format_elem(self)} is not divisible by {format_elem(d)}") from exc

    def divides(self, x) -> bool:
        """True when self | x."""
        if self.is_zero():
            return self._lift(x).is_zero()
        try:
            self._lift(x).exact_div(self)
        except NotDivisible:
            return False
        return True

    def coords(self) -> tuple[int, int]:
        return to_basis_coords(self)

    def __repr__(self):
        return f"QuadInt[{self.ring.alpha}]{format_elem(self)}"

    def __str__(self):
        return pretty(self)


def from_basis_coords(ring: RingSpec, c1: int, c2: int) -> QuadInt:
    if ring.is_one_mod_four:
        return QuadInt(ring, 2 * c1 + c2, c2)
    return QuadInt(ring, 2 * c1, 2 * c2)


def to_basis_coords(x: QuadInt) -> tuple[int, int]:
    if x.ring.is_one_mod_four:
        return (x.u - x.v) // 2, x.v
    return x.u // 2, x.v // 2


def fundamental_unit(ring: RingSpec) -> QuadInt:
    """Smallest unit > 1."""
    return _fundamental_unit(ring.alpha)


@lru_cache(maxsize=None)
def _fundamental_unit(alpha: int) -> QuadInt:
    ring = make_ring(alpha)
    if alpha < 40:
        u, v = _unit_by_search(alpha)
    else:
        u, v = _unit_by_continued_fraction(alpha)
    return QuadInt(ring, u, v)


def _unit_by_search(alpha: int) -> tuple[int, int]:
    strict = alpha % 4 != 1
    v = 1
    while True:
        for t in (alpha * v * v - 4, alpha * v * v + 4):
            if t < 0:
                continue
            u = isqrt(t)
            if u * u == t and (u - v) % 2 == 0 and not (strict and (u % 2 or v % 2)):
                return u, v
        v += 1


def _unit_by_continued_fraction(alpha: int) -> tuple[int, int]:
    # For alpha >= 40 every solution of u^2 - alpha v^2 = +-4 (and of p^2 - alpha q^2 = +-1)
    # has u/v within 1/(2v^2) of sqrt(alpha), so it is a convergent; the first hit is minimal.
    a0 = isqrt(alpha)
    m, d, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    one_mod_four = alpha % 4 == 1
    while True:
        n = p * p - alpha * q * q
        if n in (1, -1):
            return 2 * p, 2 * q
        if one_mod_four and n in (4, -4) and p % 2 and q % 2:
            return p, q
        m = d * a - m
        d = (alpha - m * m) // d
        a = (a0 + m) // d
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev


# --- text syntax ------------------------------------------------------------------

_PAIR = re.compile(r"^\(\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*\)$")
_TERM = re.compile(r"^([+-]?)(\d*)\*?(w?)$")


def parse_elem(ring: RingSpec, text: str) -> QuadInt:
    """Parse `a+b*w`, `a-b*w`, `a`, `b*w`, `w`, or a pair `(c1,c2)` of basis coordinates."""
    s = text.strip()
    m = _PAIR.match(s)
    if m:
        return from_basis_coords(ring, int(m.group(1)), int(m.group(2)))
    s = s.replace(" ", "")
    if not s:
        raise ParseError("empty element")
    c1 = c2 = 0
    for term in re.findall(r"[+-]?[^+-]+", s) if re.fullmatch(r"([+-]?[^+-]+)+", s) else [None]:
        t = _TERM.match(term) if term else None
        if t is None or (not t.group(2) and not t.group(3)) or ("*" in term and not (t.group(2) and t.group(3))):
            raise ParseError(f"cannot parse element {text!r}")
        sign = -1 if t.group(1) == "-" else 1
        coeff = int(t.group(2)) if t.group(2) else 1
        if t.group(3):
            c2 += sign * coeff
        else:
            c1 += sign * coeff
    return from_basis_coords(ring, c1, c2)


def format_elem(x: QuadInt) -> str:
    c1, c2 = to_basis_coords(x)
    return f"({c1},{c2})"


def pretty(x: QuadInt) -> str:
    c1, c2 = to_basis_coords(x)
    if c2 == 0:
        return str(c1)
    w = "w" if abs(c2) == 1 else f"{abs(c2)}*w"
    if c1 == 0:
        return w if c2 > 0 else f"-{w}"
    return f"{c1}{'+' if c2 > 0 else '-'}{w}"
