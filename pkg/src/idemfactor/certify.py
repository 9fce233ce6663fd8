"""Idempotent-product certificates: M^{E1...Es} = A1...Ar.

The certificate algebra mirrors how such witnesses compose under conjugation,
products, and idempotent prefactors. ``verify`` re-checks a certificate with
its own tuple arithmetic and never touches the pipeline's matrix code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import CertificateInvalid, NotIdempotent, ParseError, RingMismatch
from .mat2 import Conjugator, Mat2, conjugate, conjugator_matrix, inverse_sl2, is_idempotent, mul, product
from .quadring import RingSpec, format_elem, make_ring, parse_elem

BUDGET_HIT = "BudgetHit"
MRS_EXCEEDED = "MrsExceeded"
RESTRIP = "RestripOccurred"
KNOWN_FLAGS = (BUDGET_HIT, MRS_EXCEEDED, RESTRIP)


@dataclass(frozen=True)
class Certificate:
    ring: RingSpec
    target: Mat2
    conjugators: tuple = ()
    idempotents: tuple = ()
    flags: frozenset = frozenset()
    annotations: tuple = ()
    n0_values: tuple = ()

    @property
    def counts(self) -> tuple[int, int]:
        return len(self.idempotents), len(self.conjugators)

    @property
    def r(self) -> int:
        return len(self.idempotents)

    @property
    def s(self) -> int:
        return len(self.conjugators)

    def with_meta(self, flags=(), annotations=(), n0_values=()) -> Certificate:
        return Certificate(self.ring, self.target, self.conjugators, self.idempotents,
                           self.flags | frozenset(flags), self.annotations + tuple(annotations),
                           self.n0_values + tuple(n0_values))


# --- independent verifier ------------------------------------------------------
#
# Elements are (u, v) meaning (u + v sqrt(alpha))/2; matrices are 4-tuples.


def _emul(a, x, y):
    return (x[0] * y[0] + a * x[1] * y[1]) // 2, (x[0] * y[1] + x[1] * y[0]) // 2


def _eadd(x, y):
    return x[0] + y[0], x[1] + y[1]


def _mmul(a, A, B):
    return (
        _eadd(_emul(a, A[0], B[0]), _emul(a, A[1], B[2])),
        _eadd(_emul(a, A[0], B[1]), _emul(a, A[1], B[3])),
        _eadd(_emul(a, A[2], B[0]), _emul(a, A[3], B[2])),
        _eadd(_emul(a, A[2], B[1]), _emul(a, A[3], B[3])),
    )


def _integral(a, x):
    u, v = x
    if (u - v) % 2:
        return False
    return a % 4 == 1 or (u % 2 == 0 and v % 2 == 0)


def _raw_matrix(M):
    return tuple((e.u, e.v) for e in (M.p, M.q, M.r, M.s))


def _raw_conjugator(c):
    if isinstance(c, Mat2):
        return _raw_matrix(c)
    x = (c.a.u, c.a.v)
    one, zero, mone = (2, 0), (0, 0), (-2, 0)
    table = {
        "a11": (x, one, mone, zero),
        "a12": (one, x, zero, one),
        "a21": (one, zero, x, one),
        "a22": (zero, one, mone, x),
    }
    return table[c.kind]


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    reason: str = ""
    index: int | None = None

    def __bool__(self):
        return self.ok


def verify_report(c: Certificate) -> VerifyReport:
    """Recompute everything from raw coordinates; report the first failure."""
    a = c.ring.alpha
    ident = ((2, 0), (0, 0), (0, 0), (2, 0))
    try:
        mats = [("target", 0, c.target)] + [("idempotent", i, m) for i, m in enumerate(c.idempotents)]
        mats += [("conjugator", i, m) for i, m in enumerate(c.conjugators)]
        for what, i, m in mats:
            ring = m.ring if isinstance(m, (Mat2, Conjugator)) else None
            if ring is None or ring.alpha != a:
                return VerifyReport(False, f"{what} {i} is over a different ring", i)
        target = _raw_matrix(c.target)
        conj = [_raw_conjugator(e) for e in c.conjugators]
        idem = [_raw_matrix(e) for e in c.idempotents]
    except (AttributeError, KeyError) as exc:
        return VerifyReport(False, f"malformed certificate: {exc}")
    for what, group in (("target", [target]), ("conjugator", conj), ("idempotent", idem)):
        for i, m in enumerate(group):
            if not all(_integral(a, e) for e in m):
                return VerifyReport(False, f"{what} {i} has a non-integral entry", i)
    if len(idem) < 1:
        return VerifyReport(False, "certificate lists no idempotent factor")
    for i, E in enumerate(conj):
        d = _eadd(_emul(a, E[0], E[3]), tuple(-t for t in _emul(a, E[1], E[2])))
        if d != (2, 0):
            return VerifyReport(False, f"conjugator {i} has determinant != 1", i)
    for i, A in enumerate(idem):
        if _mmul(a, A, A) != A:
            return VerifyReport(False, f"idempotent {i} does not square to itself", i)
    T = ident
    for E in conj:
        T = _mmul(a, T, E)
    P = ident
    for A in idem:
        P = _mmul(a, P, A)
    # T^-1 M T = P  <=>  M T = T P, as det T = 1
    if _mmul(a, target, T) != _mmul(a, T, P):
        return VerifyReport(False, "conjugated target differs from the idempotent product")
    bad = [f for f in c.flags if f not in KNOWN_FLAGS]
    if bad:
        return VerifyReport(False, f"unknown flags {bad}")
    return VerifyReport(True)


def verify(c: Certificate) -> bool:
    return verify_report(c).ok


def _checked(c: Certificate) -> Certificate:
    rep = verify_report(c)
    if not rep:
        raise CertificateInvalid(rep.reason)
    return c


# --- certificate algebra -------------------------------------------------------


def _seq_matrix(cs, ring):
    return product([conjugator_matrix(e) for e in cs], ring)


def cert_trivial(M: Mat2, annotations=()) -> Certificate:
    if not is_idempotent(M):
        raise NotIdempotent(f"{M} is not idempotent")
    return _checked(Certificate(M.ring, M, (), (M,), frozenset(), tuple(annotations)))


def cert_conjugate(c: Certificate, A) -> Certificate:
    """Certificate for M where M^{A} is c.target: prepend A to the conjugators."""
    A = tuple(A)
    if not A:
        return c
    T = _seq_matrix(A, c.ring)
    for e in A:
        if conjugator_matrix(e).ring.alpha != c.ring.alpha:
            raise RingMismatch("conjugator over a different ring")
    Tinv = inverse_sl2(T)  # raises NotInSL2
    target = mul(mul(T, c.target), Tinv)
    return _checked(Certificate(c.ring, target, A + c.conjugators, c.idempotents, c.flags,
                                c.annotations, c.n0_values))


def cert_multiply(cm: Certificate, cn: Certificate) -> Certificate:
    """Certificate for cm.target * cn.target; keeps whichever conjugator list is shorter."""
    if cm.ring.alpha != cn.ring.alpha:
        raise RingMismatch("certificates over different rings")
    R = cm.ring
    T = _seq_matrix(cm.conjugators, R)
    S = _seq_matrix(cn.conjugators, R)
    if cm.s < cn.s:
        # conjugate N's idempotents into M's frame: C = S^-1 T
        C = mul(inverse_sl2(S), T)
        idem = cm.idempotents + tuple(conjugate(B, C) for B in cn.idempotents)
        conj = cm.conjugators
    else:
        C = mul(inverse_sl2(T), S)
        idem = tuple(conjugate(A, C) for A in cm.idempotents) + cn.idempotents
        conj = cn.conjugators
    return _checked(Certificate(R, mul(cm.target, cn.target), conj, idem, cm.flags | cn.flags,
                                cm.annotations + cn.annotations, cm.n0_values + cn.n0_values))


def cert_left_mul_idempotents(Es, c: Certificate) -> Certificate:
    """Certificate for (E1...Ek) * c.target."""
    Es = tuple(Es)
    if not Es:
        return c
    for E in Es:
        if not is_idempotent(E):
            raise NotIdempotent(f"{E} is not idempotent")
    S = _seq_matrix(c.conjugators, c.ring)
    new = tuple(conjugate(E, S) for E in Es)
    target = mul(product(Es, c.ring), c.target)
    return _checked(Certificate(c.ring, target, c.conjugators, new + c.idempotents, c.flags,
                                c.annotations, c.n0_values))


def reconstruct_target(c: Certificate) -> Mat2:
    """prod_i T A_i T^-1 with T the conjugator product; equals the target for valid c."""
    T = _seq_matrix(c.conjugators, c.ring)
    Tinv = inverse_sl2(T)
    return product([mul(mul(T, A), Tinv) for A in c.idempotents], c.ring)


# --- JSON ----------------------------------------------------------------------


def _mat_json(M: Mat2):
    return [format_elem(e) for e in M.entries]


def to_json(c: Certificate) -> dict:
    conj = []
    for e in c.conjugators:
        if isinstance(e, Conjugator):
            conj.append({"kind": e.kind, "a": format_elem(e.a)})
        else:
            conj.append(_mat_json(e))
    return {
        "ring": {"alpha": c.ring.alpha},
        "target": _mat_json(c.target),
        "conjugators": conj,
        "idempotents": [_mat_json(A) for A in c.idempotents],
        "counts": {"r": c.r, "s": c.s},
        "flags": sorted(c.flags),
        "annotations": list(c.annotations),
        "n0_values": list(c.n0_values),
    }


def dumps(c: Certificate) -> str:
    return json.dumps(to_json(c), indent=2)


def _mat_from(ring, data):
    if not isinstance(data, list) or len(data) != 4:
        raise ParseError(f"matrix must be a list of 4 elements, got {data!r}")
    return Mat2(*(parse_elem(ring, str(e)) for e in data))


def from_json(obj) -> Certificate:
    """Parse without verifying; counts are checked against the list lengths."""
    try:
        ring = make_ring(int(obj["ring"]["alpha"]))
        target = _mat_from(ring, obj["target"])
        conj = []
        for e in obj["conjugators"]:
            if isinstance(e, dict):
                conj.append(Conjugator(e["kind"], parse_elem(ring, str(e["a"]))))
            else:
                conj.append(_mat_from(ring, e))
        idem = tuple(_mat_from(ring, e) for e in obj["idempotents"])
        cert = Certificate(ring, target, tuple(conj), idem, frozenset(obj.get("flags", ())),
                           tuple(obj.get("annotations", ())), tuple(obj.get("n0_values", ())))
        counts = obj.get("counts")
        if counts is not None and (counts["r"], counts["s"]) != cert.counts:
            raise ParseError(f"counts {counts} disagree with the factor lists {cert.counts}")
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed certificate: {exc!r}") from exc
    return cert


def loads(text: str) -> Certificate:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return from_json(obj)
