"""Reduce a row [x y] to [h beta] with h a rational integer.

Every move is recorded as a Step so that a certificate for the final row can
be lifted back to one for [x y]:
  conj      the row is conjugated by the listed SL2 elements,
  prefix    the row equals (product of the listed idempotents) * next row,
  mul_left  the row equals (target of the stored certificate) * next row.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod

from ..certify import Certificate, cert_conjugate, cert_left_mul_idempotents, cert_multiply
from ..errors import GcdNotOne, PipelineInvariantViolated
from ..intlib import Congruence, checked_prime_search, crt, ext_gcd, prime_divisors
from ..mat2 import Conjugator, Mat2, conjugate_seq, mat, mul, product, row_matrix
from ..quadring import QuadInt, from_basis_coords, to_basis_coords
from .euclid_chain import column_unit_cert, swap_prefactor
from .options import PipelineOptions


@dataclass(frozen=True)
class Step:
    kind: str
    payload: object
    after: Mat2
    label: str = ""


@dataclass(frozen=True)
class ShiftPlan:
    """Bezout data of the Case 1 shift: a0*g1 + b0*x2 = 1, conjugator coords (b, a) in a12."""

    a0: int
    b0: int
    k: int
    a: int
    b: int
    conjugator: Conjugator


@dataclass(frozen=True)
class Case3Context:
    lam: int
    eps: int
    z1: int
    z2: int
    w1: int
    w2: int
    disc: int
    disc_set: frozenset
    branch: str                  # "lambda", "epsilon" or "unit"
    J: frozenset = frozenset()
    X: frozenset = frozenset()
    Y: frozenset = frozenset()
    residues: tuple = ()         # (prime, chosen residue) pairs
    u: int = 0
    P: int = 1
    f: int = 0
    p: int = 1
    e: int = 0
    y1p: int = 0
    y2p: int = 0


@dataclass(frozen=True)
class IntegerizeResult:
    h: int
    beta: QuadInt
    steps: tuple
    cases: tuple
    shift_plan: ShiftPlan | None = None
    case3: Case3Context | None = None


class Trace:
    """Current row plus the steps that produced it."""

    def __init__(self, x: QuadInt, y: QuadInt, options: PipelineOptions | None = None):
        self.x0, self.y0 = x, y
        self.row = (x, y)
        self.steps: list[Step] = []
        self.cases: list[str] = []
        self.options = options or PipelineOptions()
        self.shift_plan = None
        self.case3 = None

    @property
    def ring(self):
        return self.row[0].ring

    def _current(self) -> Mat2:
        return self.steps[-1].after if self.steps else row_matrix(*self.row)

    def conj(self, c, label: str):
        M = conjugate_seq(self._current(), [c])
        self.steps.append(Step("conj", (c,), M, label))
        if M.r == 0 and M.s == 0:
            self.row = (M.p, M.q)
        return M

    def shift(self, e: QuadInt, label: str):
        """y <- y + e x via conjugation by a12(e)."""
        x, y = self.row
        M = self.conj(Conjugator("a12", e), label)
        if (M.p, M.q) != (x, y + e * x):
            raise PipelineInvariantViolated(label, "a12 shift did not act as y + e x")

    def swap(self, label: str):
        """[x y] -> [-y x] through conjugation by a22(0) and the (0 0; 1 0) prefactor."""
        x, y = self.row
        R = self.ring
        M = conjugate_seq(row_matrix(x, y), [Conjugator("a22", R.zero())])
        nxt = row_matrix(-y, x)
        self.steps.append(Step("conj", (Conjugator("a22", R.zero()),), M, label))
        if self.options.swap_mode == "idempotent":
            pre = swap_prefactor(R)
            if mul(pre, nxt) != M:
                raise PipelineInvariantViolated(label, "swap identity failed")
            self.steps.append(Step("prefix", (pre,), nxt, label))
        else:
            left = column_unit_cert(R.zero(), 1, self.options.decomp)
            if mul(left.target, nxt) != M:
                raise PipelineInvariantViolated(label, "swap identity failed")
            self.steps.append(Step("mul_left", left, nxt, label))
        self.row = (-y, x)

    def scale(self, z: QuadInt, label: str):
        """[x y] = (1 -1; 0 0)(1 0; 1-z 0)[x/z y/z]."""
        x, y = self.row
        R = self.ring
        nx, ny = x.exact_div(z), y.exact_div(z)
        pair = (mat(R, 1, -1, 0, 0), mat(R, 1, 0, 1 - z, 0))
        nxt = row_matrix(nx, ny)
        if mul(product(pair, R), nxt) != row_matrix(x, y):
            raise PipelineInvariantViolated(label, "prefactor identity failed")
        self.steps.append(Step("prefix", pair, nxt, label))
        self.row = (nx, ny)

    def result(self) -> IntegerizeResult:
        x, y = self.row
        if not x.is_rational():
            raise PipelineInvariantViolated("integerize", f"first entry {x} is not rational")
        replay(self.x0, self.y0, self.steps, row_matrix(x, y))
        return IntegerizeResult(x.as_int(), y, tuple(self.steps), tuple(self.cases), self.shift_plan, self.case3)


def replay(x: QuadInt, y: QuadInt, steps, final: Mat2):
    """Re-check every recorded step starting from [x y]."""
    M = row_matrix(x, y)
    for st in steps:
        if st.kind == "conj":
            M = conjugate_seq(M, st.payload)
            if M != st.after:
                raise PipelineInvariantViolated(st.label, "conjugation replay mismatch")
        elif st.kind == "prefix":
            if mul(product(st.payload, M.ring), st.after) != M:
                raise PipelineInvariantViolated(st.label, "prefactor replay mismatch")
            M = st.after
        elif st.kind == "mul_left":
            if mul(st.payload.target, st.after) != M:
                raise PipelineInvariantViolated(st.label, "left factor replay mismatch")
            M = st.after
        else:
            raise ValueError(f"unknown step kind {st.kind!r}")
    if M != final:
        raise PipelineInvariantViolated("replay", "steps do not end at the reported row")


def lift(cert: Certificate, steps) -> Certificate:
    """Turn a certificate for the last row into one for the first."""
    for st in reversed(steps):
        if st.kind == "conj":
            cert = cert_conjugate(cert, st.payload)
        elif st.kind == "prefix":
            cert = cert_left_mul_idempotents(st.payload, cert)
        else:
            cert = cert_multiply(st.payload, cert)
    labels = []
    for st in steps:
        if st.label and (not labels or labels[-1] != st.label):
            labels.append(st.label)
    return cert.with_meta(annotations=tuple(labels))


# --- the case analysis --------------------------------------------------------


def integerize(x: QuadInt, y: QuadInt, options: PipelineOptions | None = None,
               bezout: tuple[int, int] | None = None) -> IntegerizeResult:
    tr = Trace(x, y, options)
    integerize_trace(tr, bezout)
    return tr.result()


def integerize_trace(tr: Trace, bezout=None):
    x, y = tr.row
    x1, x2 = to_basis_coords(x)
    y1, y2 = to_basis_coords(y)
    if x2 == 0:
        tr.cases.append("a:rational")
    elif y2 == 0:
        tr.cases.append("b:swap")
        tr.swap("integerize:b")
    elif x1 == 0 and y1 == 0:
        tr.cases.append("c:common-w")
        tr.scale(tr.ring.w(), "integerize:c")
    elif _first_gcd(tr.ring, x1, x2) == 1:
        _case1(tr, bezout)
    elif _first_gcd(tr.ring, y1, y2) == 1:
        _case2(tr, bezout)
    else:
        _case3(tr, bezout)
    if not tr.row[0].is_rational():
        raise PipelineInvariantViolated("integerize", "case analysis left a non-rational first entry")


def _first_gcd(ring, c1, c2):
    # gcd(c1, c2) = gcd(c1 + c2, c2); the one-mod-four basis uses the latter form
    return gcd(c1 + c2, c2) if ring.is_one_mod_four else gcd(c1, c2)


def _case1(tr: Trace, bezout=None):
    tr.cases.append("d:case1")
    R = tr.ring
    x, y = tr.row
    x1, x2 = to_basis_coords(x)
    y1, y2 = to_basis_coords(y)
    g1 = x1 + x2 if R.is_one_mod_four else x1
    if bezout is None:
        g, a0, b0 = ext_gcd(g1, x2)
        if g != 1:
            raise PipelineInvariantViolated("integerize:d", f"gcd of the first entry is {g}")
    else:
        a0, b0 = bezout
        if a0 * g1 + b0 * x2 != 1:
            raise GcdNotOne(f"supplied Bezout pair fails: {a0}*{g1} + {b0}*{x2} != 1")

    def plan(k):
        a, b = -(a0 + k * x2) * y2, -(b0 - k * g1) * y2
        c = from_basis_coords(R, b, a)
        return a, b, c, y + c * x

    if bezout is None:
        # h depends affinely on k; pick k with the smallest |h|
        h0 = plan(0)[3].as_int()
        step = plan(1)[3].as_int() - h0
        ks = [0]
        if step:
            k = round(-h0 / step)
            ks = sorted({0, k - 1, k, k + 1}, key=abs)
        k = min(ks, key=lambda kk: (abs(plan(kk)[3].as_int()), abs(kk)))
    else:
        k = 0
    a, b, c, shifted = plan(k)
    if not shifted.is_rational():
        raise PipelineInvariantViolated("integerize:d", "shifted entry is not rational")
    conj = Conjugator("a12", c)
    tr.shift_plan = ShiftPlan(a0 + k * x2, b0 - k * g1, k, a, b, conj)
    tr.shift(c, "integerize:d:shift")
    # closed form of the new second entry
    if R.is_one_mod_four:
        expect = b * x1 + a * x2 * ((R.alpha - 1) // 4) + y1
    else:
        expect = b * x1 + a * x2 * R.alpha + y1
    if tr.row[1] != expect:
        raise PipelineInvariantViolated("integerize:d", "shifted entry differs from its closed form")
    tr.swap("integerize:d:swap")


def _case2(tr: Trace, bezout=None):
    tr.cases.append("e:case2")
    tr.swap("integerize:e:swap")
    _case1(tr, bezout)


def _case3(tr: Trace, bezout=None):
    x, y = tr.row
    x1, x2 = to_basis_coords(x)
    y1, y2 = to_basis_coords(y)
    s, r = gcd(x1, x2), gcd(y1, y2)
    delta = gcd(s, r)
    if delta > 1:
        tr.cases.append(f"f:3B:delta={delta}")
        tr.scale(tr.ring(delta), "integerize:3B")
        integerize_trace(tr, bezout)
        return
    ctx = case3_context(tr.ring, x1, x2, y1, y2, tr.options)
    tr.case3 = ctx
    if ctx.branch == "proportional":
        tr.cases.append("f:3A:proportional")
        c = tr.ring(ctx.lam * (ctx.z1 // ctx.z2), ctx.eps)
        tr.scale(c, "integerize:3A:proportional")
        if tr.row != (tr.ring(ctx.z2), tr.ring(ctx.w2)):
            raise PipelineInvariantViolated("integerize:3A", "proportional split mismatch")
        return
    tr.cases.append(f"f:3A:{ctx.branch}")
    tr.shift(tr.ring(ctx.e), "integerize:3A:shift")
    if to_basis_coords(tr.row[1]) != (ctx.y1p, ctx.y2p):
        raise PipelineInvariantViolated("integerize:3A", "shifted coordinates differ from (y1', y2')")
    if gcd(ctx.y1p, ctx.y2p) != 1:
        raise PipelineInvariantViolated("integerize:3A", "gcd(y1', y2') != 1")
    integerize_trace(tr, None)


def _pick_residue(ell, forbidden):
    for r in range(ell):
        if r not in forbidden:
            return r
    raise PipelineInvariantViolated("integerize:3A", f"no admissible residue mod {ell}")


def _neg_ratio(w, z, ell):
    """-z^{-1} w mod ell."""
    return (-w * pow(z, -1, ell)) % ell


def case3_context(ring, x1, x2, y1, y2, options: PipelineOptions | None = None) -> Case3Context:
    """All Case 3A data; requires gcd(x1, x2), gcd(y1, y2) > 1 with coprime gcds."""
    options = options or PipelineOptions()
    lam, eps = gcd(x1, y1), gcd(x2, y2)
    if lam == 0 or eps == 0:
        raise PipelineInvariantViolated("integerize:3A", "degenerate coordinates reached Case 3")
    if gcd(lam, eps) != 1:
        raise PipelineInvariantViolated("integerize:3A", f"gcd(lambda, epsilon) = {gcd(lam, eps)}")
    z1, w1, z2, w2 = x1 // lam, y1 // lam, x2 // eps, y2 // eps
    if gcd(z1, w1) != 1 or gcd(z2, w2) != 1:
        raise PipelineInvariantViolated("integerize:3A", "reduced pairs are not coprime")
    D = z1 * w2 - z2 * w1
    base = dict(lam=lam, eps=eps, z1=z1, z2=z2, w1=w1, w2=w2, disc=D)
    if D == 0:
        if z1 not in (z2, -z2) or w1 * z2 != w2 * z1:
            raise PipelineInvariantViolated("integerize:3A", "proportional pairs differ by more than a sign")
        return Case3Context(**base, disc_set=frozenset(), branch="proportional")
    disc_set = frozenset(prime_divisors(D))
    if lam % 2 and z1 != 0:
        branch, pivot, other, zp, wp, zo, wo = "lambda", lam, eps, z1, w1, z2, w2
    elif eps % 2:
        branch, pivot, other, zp, wp, zo, wo = "epsilon", eps, lam, z2, w2, z1, w1
    else:
        branch, pivot, other, zp, wp, zo, wo = "unit", lam, eps, z1, w1, z2, w2
    # zp/wp feed the prime p = zp*e + wp; zo/wo is the entry kept coprime to the pivot
    J = frozenset(l for l in prime_divisors(pivot) if zo % l) if pivot > 1 else frozenset()
    X = frozenset(l for l in J if zp % l == 0)
    Y = J - X
    residues, system = [], []
    for ell in sorted(J):
        bad = {_neg_ratio(wo, zo, ell)}
        if ell in Y:
            bad.add(_neg_ratio(wp, zp, ell))
        r = _pick_residue(ell, bad)
        residues.append((ell, r))
        system.append(Congruence(r, ell))
    u = crt(system).residue
    P = prod(J) if J else 1
    if branch == "unit":
        f, p, e = 0, wp, u
        if p not in (1, -1):
            raise PipelineInvariantViolated("integerize:3A", "unit shortcut needs w1 = +-1")
    else:
        A, B = zp * P, zp * u + wp
        if gcd(A, B) != 1:
            raise PipelineInvariantViolated("integerize:3A", f"gcd(A, B) = {gcd(A, B)} for the prime search")
        sign = 1 if A > 0 else -1
        f_abs, p = checked_prime_search(abs(A), B, disc_set, other, options.f_max)
        f = sign * f_abs
        e = P * f + u
        if p != zp * e + wp:
            raise PipelineInvariantViolated("integerize:3A", "prime does not match z*e + w")
    if branch == "epsilon":
        y1p, y2p = lam * (z1 * e + w1), eps * p
    else:
        y1p, y2p = lam * p, eps * (z2 * e + w2)
    return Case3Context(**base, disc_set=disc_set, branch=branch, J=J, X=X, Y=Y, residues=tuple(residues),
                        u=u, P=P, f=f, p=p, e=e, y1p=y1p, y2p=y2p)
