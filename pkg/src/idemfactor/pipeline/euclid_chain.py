"""Certificates for unimodular rows, rows with a zero entry, and unit columns."""

from __future__ import annotations

from dataclasses import dataclass

from ..certify import Certificate, _checked, cert_conjugate, cert_left_mul_idempotents, cert_trivial
from ..elemdecomp import AlternatingWord, DecompBudget, UPPER, decompose_ex, to_alternating
from ..errors import ChainBroken, NotUnimodular, PipelineInvariantViolated
from ..mat2 import Conjugator, conjugate_seq, mat, mul, product, row_matrix, zero_matrix
from ..quadring import QuadInt

MRS_TARGET = 9  # word-length target for each elementary decomposition


@dataclass(frozen=True)
class EuclidChain:
    """r_{-1} = x, r_0 = y, r_i = q_{i+1} r_{i+1} + r_{i+2}; rs[k] holds r_{k-1}."""

    word: AlternatingWord
    rs: tuple

    @property
    def n0(self) -> int:
        return self.word.n0

    def r(self, i: int) -> QuadInt:
        return self.rs[i + 1]


def build_chain(x: QuadInt, y: QuadInt, word: AlternatingWord) -> EuclidChain:
    rs = [x, y]
    for i, q in enumerate(word.qs):
        # r_{i+1} = r_{i-1} - q_i r_i   (list index shifted by one)
        rs.append(rs[i] - q * rs[i + 1])
    chain = EuclidChain(word, tuple(rs))
    for i in range(-1, 2 * word.n0 - 1):
        if chain.r(i) != word.qs[i + 1] * chain.r(i + 1) + chain.r(i + 2):
            raise ChainBroken(f"recurrence fails at i={i}")
    if chain.r(2 * word.n0) != 0 or chain.r(2 * word.n0 - 1) != 1:
        raise ChainBroken(f"chain ends in ({chain.r(2 * word.n0 - 1)}, {chain.r(2 * word.n0)}), expected (1, 0)")
    return chain


def column_word(x: QuadInt, y: QuadInt, z: QuadInt, w: QuadInt, budget: DecompBudget | None = None):
    """Alternating word whose product has first column (x, y).

    The trailing upper factor of the decomposition only moves the second column,
    so it is dropped; the completion (z, w) is re-chosen by the word itself.
    """
    M = mat(x.ring, x, z, y, w)
    dec = decompose_ex(M, budget)
    factors = list(dec.factors)
    while factors and factors[-1].side == UPPER:
        factors.pop()
    P = product([f.matrix() for f in factors], x.ring)
    word = to_alternating(factors, P)
    if P.p != x or P.r != y:
        raise PipelineInvariantViolated("column_word", "column word lost the first column")
    return word, dec


def unimodular_row_cert(x: QuadInt, y: QuadInt, z: QuadInt, w: QuadInt,
                        budget: DecompBudget | None = None) -> Certificate:
    """Certificate for [x y] given x*w - y*z = 1; counts (n0 + 2, 2 n0)."""
    R = x.ring
    if x * w - y * z != 1:
        raise NotUnimodular(f"x*w - y*z = {x * w - y * z} != 1")
    word, dec = column_word(x, y, z, w, budget)
    chain = build_chain(x, y, word)
    n0 = word.n0
    qs = word.qs
    conj = []
    for i, q in enumerate(qs):
        conj.append(Conjugator("a21" if i % 2 == 0 else "a12", -q))
    idem = []
    for h in range(n0):
        E = mat(R, 1, 0, qs[2 * h], 0)
        idem.append(conjugate_seq(E, conj[2 * h + 1:]))
    last = chain.r(2 * n0 - 1)
    idem.append(mat(R, 1, -1, 0, 0))
    idem.append(mat(R, 1, 0, 1 - last, 0))
    notes = [f"unimodular_row:n0={n0}"]
    if dec.fallback_steps:
        notes.append(f"decompose:fallback={dec.fallback_steps}")
    cert = Certificate(R, row_matrix(x, y), tuple(conj), tuple(idem), frozenset(), tuple(notes), (n0,))
    return _checked(cert)


def row_with_zero_cert(a: QuadInt, compact: bool = True) -> Certificate:
    """[a 0] = (1 -1; 0 0)(1 0; 1-a 0).

    With compact=True the rows [0 0] and [1 0], being idempotent already, get a
    single factor; compact=False keeps the two-factor form for every a != 0.
    """
    R = a.ring
    if a == 0 or (compact and a == 1):
        return cert_trivial(row_matrix(a, R.zero()), ("row_with_zero",))
    c = cert_trivial(mat(R, 1, 0, 1 - a, 0), ("row_with_zero",))
    return cert_left_mul_idempotents([mat(R, 1, -1, 0, 0)], c)


def column_unit_cert(x: QuadInt, sign: int = 1, budget: DecompBudget | None = None) -> Certificate:
    """Certificate for (x 0; sign 0): conjugation by a11(-sign x) gives the row [x, -sign]."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    R = x.ring
    row = unimodular_row_cert(x, R(-sign), R(sign), R.zero(), budget)
    cert = cert_conjugate(row, [Conjugator("a11", -sign * x)])
    if cert.target != mat(R, x, 0, sign, 0):
        raise PipelineInvariantViolated("column_unit", "column identity failed")
    return cert


def zero_row_cert(ring) -> Certificate:
    return cert_trivial(zero_matrix(ring), ("zero_row",))


def swap_prefactor(ring):
    """(0 0; 1 1): idempotent, and (0 0; 1 1)[a b] = (0 0; 1 0)[a b]."""
    return mat(ring, 0, 0, 1, 1)


def check_swap(x: QuadInt, y: QuadInt):
    R = x.ring
    lhs = conjugate_seq(row_matrix(x, y), [Conjugator("a22", R.zero())])
    if lhs != mul(swap_prefactor(R), row_matrix(-y, x)):
        raise PipelineInvariantViolated("swap", "swap identity failed")
