"""2x2 matrices over O_k, the four SL2 conjugation generators, and conjugation."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotInSL2, PipelineInvariantViolated, RingMismatch
from .quadring import QuadInt, RingSpec, format_elem, pretty


@dataclass(frozen=True)
class Mat2:
    """(p q; r s), row-major."""

    p: QuadInt
    q: QuadInt
    r: QuadInt
    s: QuadInt

    def __post_init__(self):
        alpha = self.p.ring.alpha
        if any(e.ring.alpha != alpha for e in (self.q, self.r, self.s)):
            raise RingMismatch("matrix entries from different rings")

    @property
    def ring(self) -> RingSpec:
        return self.p.ring

    @property
    def entries(self):
        return (self.p, self.q, self.r, self.s)

    def __matmul__(self, other: Mat2) -> Mat2:
        return mul(self, other)

    def __str__(self):
        return "(" + " ".join(pretty(e) for e in (self.p, self.q)) + "; " + " ".join(pretty(e) for e in (self.r, self.s)) + ")"


def mat(ring: RingSpec, p, q, r, s) -> Mat2:
    """Build from QuadInt or int entries."""
    lift = lambda e: e if isinstance(e, QuadInt) else ring(e)
    return Mat2(lift(p), lift(q), lift(r), lift(s))


def identity(ring: RingSpec) -> Mat2:
    return mat(ring, 1, 0, 0, 1)


def zero_matrix(ring: RingSpec) -> Mat2:
    return mat(ring, 0, 0, 0, 0)


def mul(A: Mat2, B: Mat2) -> Mat2:
    if A.ring.alpha != B.ring.alpha:
        raise RingMismatch("matrices over different rings")
    return Mat2(A.p * B.p + A.q * B.r, A.p * B.q + A.q * B.s, A.r * B.p + A.s * B.r, A.r * B.q + A.s * B.s)


def product(ms, ring: RingSpec) -> Mat2:
    out = identity(ring)
    for m in ms:
        out = mul(out, m)
    return out


def det(M: Mat2) -> QuadInt:
    return M.p * M.s - M.q * M.r


def is_identity(M: Mat2) -> bool:
    return M.p == 1 and M.q == 0 and M.r == 0 and M.s == 1


def in_SL2(M: Mat2) -> bool:
    return det(M) == 1


def is_idempotent(M: Mat2) -> bool:
    return mul(M, M) == M


def adjugate(M: Mat2) -> Mat2:
    return Mat2(M.s, -M.q, -M.r, M.p)


def inverse_sl2(M: Mat2) -> Mat2:
    if not in_SL2(M):
        raise NotInSL2(f"det {pretty(det(M))} != 1 for {M}")
    return adjugate(M)


def row_matrix(x: QuadInt, y: QuadInt) -> Mat2:
    """[x y] = (x y; 0 0)."""
    z = x.ring.zero()
    return Mat2(x, y, z, z)


def upper(a: QuadInt) -> Mat2:
    return mat(a.ring, 1, a, 0, 1)


def lower(a: QuadInt) -> Mat2:
    return mat(a.ring, 1, 0, a, 1)


KINDS = ("a11", "a12", "a21", "a22")


@dataclass(frozen=True)
class Conjugator:
    """One of the SL2 generators a11 = (a 1; -1 0), a12 = (1 a; 0 1), a21 = (1 0; a 1), a22 = (0 1; -1 a)."""

    kind: str
    a: QuadInt

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown conjugator kind {self.kind!r}")

    @property
    def ring(self):
        return self.a.ring

    def matrix(self) -> Mat2:
        return conjugator_matrix(self)

    def __str__(self):
        return f"{self.kind}({format_elem(self.a)})"


def conjugator_matrix(c) -> Mat2:
    if isinstance(c, Mat2):
        return c
    R, a = c.ring, c.a
    if c.kind == "a11":
        return mat(R, a, 1, -1, 0)
    if c.kind == "a12":
        return mat(R, 1, a, 0, 1)
    if c.kind == "a21":
        return mat(R, 1, 0, a, 1)
    return mat(R, 0, 1, -1, a)


def conjugate(M: Mat2, c) -> Mat2:
    """M^C = C^-1 M C."""
    C = conjugator_matrix(c)
    return mul(mul(inverse_sl2(C), M), C)


def conjugate_seq(M: Mat2, cs) -> Mat2:
    """M^{A1 A2 ... An}, applied left to right."""
    for c in cs:
        M = conjugate(M, c)
    return M


def swap_identity(x: QuadInt, y: QuadInt):
    """[x y]^{0_{2,2}} = (0 0; 1 0)[-y x]; returns (prefactor, row) after checking."""
    R = x.ring
    pre = mat(R, 0, 0, 1, 0)
    row = row_matrix(-y, x)
    if conjugate(row_matrix(x, y), Conjugator("a22", R.zero())) != mul(pre, row):
        raise PipelineInvariantViolated("mat2", "swap identity failed")
    return pre, row
