"""Driver for [x y]: principal and unimodular shortcuts, common-factor stripping,
and the idempotent split for rows with a rational first entry."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from ..certify import (
    BUDGET_HIT,
    MRS_EXCEEDED,
    Certificate,
    cert_left_mul_idempotents,
    cert_multiply,
    cert_trivial,
    verify_report,
)
from ..errors import (
    BudgetExhausted,
    NoUnimodularSolutionInBudget,
    NotDivisible,
    NotInIdeal,
    NotPrincipalWitness,
    PipelineInvariantViolated,
    PreconditionViolated,
)
from ..mat2 import Mat2, det, is_idempotent, mat, mul, row_matrix
from ..omodule import common_divisor_search, ideal_from_generators, principal_generator, solve_combination
from ..quadring import QuadInt, to_basis_coords
from .euclid_chain import MRS_TARGET, column_word, row_with_zero_cert, unimodular_row_cert, zero_row_cert
from .integerize import Trace, integerize_trace, lift
from .options import PipelineOptions

BOUND_R, BOUND_S = 15, 19


@dataclass(frozen=True)
class DriverContext:
    x: int
    m: int
    norm_lambda: int
    x0: int
    s: int
    e: int = 0


@dataclass(frozen=True)
class CzSplit:
    E: Mat2
    xp: QuadInt
    yp: QuadInt
    cofactors: tuple      # (a, b) with xp*a + yp*b = 1
    gamma: QuadInt
    s_num: QuadInt        # s = s_num / N
    t_num: QuadInt        # t = t_num / N
    N: int


def norm_shift(x: int, y: QuadInt, e: int) -> int:
    """N(y + e x) for rational x, via N(y) + e x tr(y) + e^2 x^2."""
    return y.norm() + e * x * y.trace() + e * e * x * x


def driver_context(x: int, y: QuadInt) -> DriverContext:
    m = gcd(x, y.norm())
    nl = y.norm() // m if m else 0
    return DriverContext(x, m, nl, x // m if m else 0, gcd(x, nl))


def cz_case2_shift(x: QuadInt, y: QuadInt, m: int, e_max: int = 10**5) -> int:
    """Smallest e >= 0 with gcd(x, N(y + e x)/m) = 1."""
    xi = x.as_int()
    if m == 1 or gcd(xi, y.norm()) != m:
        raise PreconditionViolated(f"m = {m} must equal gcd(x, N(y)) and differ from 1")
    for e in range(e_max + 1):
        n = norm_shift(xi, y, e)
        if n % m:
            raise PipelineInvariantViolated("case2_shift", "m does not divide N(y + e x)")
        if gcd(xi, n // m) == 1:
            if gcd(xi, n) != m:
                raise PipelineInvariantViolated("case2_shift", "gcd(x, N(y + e x)) != m")
            return e
    raise BudgetExhausted(f"no Case 2 shift e <= {e_max}", partial=e_max)


def check_cz_split(x: QuadInt, y: QuadInt, E: Mat2, xp: QuadInt, yp: QuadInt) -> list[str]:
    """Problems with a proposed split [x y] = [xp yp] E; empty when it is valid."""
    problems = []
    if not is_idempotent(E):
        problems.append("E is not idempotent")
    if E.p + E.s != 1:
        problems.append("trace(E) != 1")
    if det(E) != 0:
        problems.append("det(E) != 0")
    if mul(row_matrix(xp, yp), E) != row_matrix(x, y):
        problems.append("[x' y'] E != [x y]")
    if not (xp or yp) or not ideal_from_generators(xp.ring, [xp, yp]).is_unit_ideal():
        problems.append("(x', y') is not unimodular")
    return problems


def _gamma_offsets(radius):
    pts = [(i, j) for i in range(-radius, radius + 1) for j in range(-radius, radius + 1)]
    return sorted(pts, key=lambda t: (abs(t[0]) + abs(t[1]), t))


def _vec(pair):
    return to_basis_coords(pair[0]) + to_basis_coords(pair[1])


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _reduced_coset(base, v1, v2):
    """Gauss-reduce the shift lattice spanned by v1, v2 (pairs of elements) and move
    base to the nearest lattice translate; returns (centre, w1, w2) as element pairs."""

    def add(p, q, k=1):
        return (p[0] + q[0] * k, p[1] + q[1] * k)

    while True:
        if _dot(_vec(v1), _vec(v1)) > _dot(_vec(v2), _vec(v2)):
            v1, v2 = v2, v1
        n1 = _dot(_vec(v1), _vec(v1))
        mu = round(Fraction(_dot(_vec(v1), _vec(v2)), n1))
        if mu == 0:
            break
        v2 = add(v2, v1, -mu)
    a, b = _vec(v1), _vec(v2)
    t = _vec(base)
    g11, g12, g22 = _dot(a, a), _dot(a, b), _dot(b, b)
    r1, r2 = _dot(t, a), _dot(t, b)
    dt = g11 * g22 - g12 * g12
    c1 = round(Fraction(r1 * g22 - r2 * g12, dt))
    c2 = round(Fraction(g11 * r2 - g12 * r1, dt))
    centre = add(add(base, v1, -c1), v2, -c2)
    return centre, v1, v2


def cz_case1_split(x: QuadInt, y: QuadInt, options: PipelineOptions | None = None) -> CzSplit:
    """[x y] = [x' y'] E with E = (xs ys; xt yt) idempotent and (x', y') unimodular."""
    opts = options or PipelineOptions()
    if not x.is_rational():
        raise PreconditionViolated("first entry must be rational")
    xi = x.as_int()
    m = gcd(xi, y.norm())
    if m == 1:
        raise PreconditionViolated("m = gcd(x, N(y)) = 1: the row is already unimodular")
    if gcd(xi, y.norm() // m) != 1:
        raise PreconditionViolated("s = gcd(x, N(y)/m) != 1; apply the Case 2 shift first")
    R = x.ring
    I = ideal_from_generators(R, [x, y])
    N = I.norm()
    # I * conj(I) = N O, so N = x*(c1 xb + c2 yb) + y*(c3 xb + c4 yb)
    xb, yb = x.conj(), y.conj()
    c = solve_combination([x * xb, x * yb, y * xb, y * yb], R(N))
    s_num, t_num = c[0] * xb + c[1] * yb, c[2] * xb + c[3] * yb
    E = mat(R, (x * s_num).exact_div(N), (y * s_num).exact_div(N),
            (x * t_num).exact_div(N), (y * t_num).exact_div(N))
    # x' s + y' t = 1  <=>  x' s_num + y' t_num = N
    xq, yq = solve_combination([s_num, t_num], R(N))
    # solutions form the coset (xq + g t, yq - g s), g in I
    shifts = [((B * t_num).exact_div(N), -(B * s_num).exact_div(N)) for B in I.basis_elements()]
    centre, w1, w2 = _reduced_coset((xq, yq), *shifts)
    found = []
    for i, j in _gamma_offsets(opts.gamma_radius):
        xp = centre[0] + w1[0] * i + w2[0] * j
        yp = centre[1] + w1[1] * i + w2[1] * j
        if not (xp or yp) or not ideal_from_generators(R, [xp, yp]).is_unit_ideal():
            continue
        a, b = solve_combination([xp, yp], R.one())
        try:
            n0 = column_word(xp, yp, -b, a, opts.decomp)[0].n0
        except BudgetExhausted:
            continue
        found.append((n0, len(found), xp, yp, a, b))
        # keep looking past the quota only while every word is over the target length
        if len(found) >= opts.gamma_candidates and min(found)[0] <= MRS_TARGET:
            break
    if not found:
        raise NoUnimodularSolutionInBudget(f"no unimodular kernel shift within radius {opts.gamma_radius}")
    _, _, xp, yp, a, b = min(found)
    # recover the kernel parameter: xp - xq = g * t_num / N
    g = ((xp - xq) * N).exact_div(t_num) if t_num else ((yq - yp) * N).exact_div(s_num)
    problems = check_cz_split(x, y, E, xp, yp)
    if problems:
        raise PipelineInvariantViolated("cz_split", "; ".join(problems))
    return CzSplit(E, xp, yp, (a, b), g, s_num, t_num, N)


def principal_row_cert(x: QuadInt, y: QuadInt, z: QuadInt, options: PipelineOptions | None = None) -> Certificate:
    """[x y] = (1 -1; 0 0)(1 0; 1-z 0)[x/z y/z] with (x/z, y/z) unimodular."""
    opts = options or PipelineOptions()
    if z.is_zero():
        raise NotPrincipalWitness("z = 0")
    try:
        x1, y1 = x.exact_div(z), y.exact_div(z)
        a, b = solve_combination([x1, y1], z.ring.one())
    except (NotDivisible, NotInIdeal) as exc:
        raise NotPrincipalWitness(f"{z} does not generate xO + yO: {exc}") from exc
    R = z.ring
    inner = unimodular_row_cert(x1, y1, -b, a, opts.decomp)
    cert = cert_left_mul_idempotents([mat(R, 1, -1, 0, 0), mat(R, 1, 0, 1 - z, 0)], inner)
    return cert.with_meta(annotations=("principal",))


# --- driver -----------------------------------------------------------------------


class _Run:
    def __init__(self, options):
        self.options = options
        self.flags = set()
        self.notes = []


def _direct_cert(tr: Trace, run: _Run) -> Certificate | None:
    """Degenerate rows, unimodular rows and principal ideals."""
    x, y = tr.row
    R = x.ring
    opts = run.options
    if x.is_zero() and y.is_zero():
        return zero_row_cert(R)
    if y.is_zero():
        return row_with_zero_cert(x, compact=False)
    if x.is_zero():
        tr.swap("degenerate:swap")
        return row_with_zero_cert(-y, compact=False)
    I = ideal_from_generators(R, [x, y])
    if I.is_unit_ideal():
        a, b = solve_combination([x, y], R.one())
        return unimodular_row_cert(x, y, -b, a, opts.decomp)
    g, complete = principal_generator(I, opts.height_budget)
    if not complete:
        run.flags.add(BUDGET_HIT)
        run.notes.append("principal:search-truncated")
    if g is not None:
        return principal_row_cert(x, y, g, opts)
    return None


def _strip(tr: Trace, run: _Run) -> bool:
    """Remove common non-unit factors with one accumulated prefactor pair."""
    x, y = tr.row
    R = x.ring
    Z = R.one()
    while True:
        z, complete = common_divisor_search(x, y, run.options.height_budget)
        if not complete:
            run.flags.add(BUDGET_HIT)
            run.notes.append("strip:search-truncated")
        if z is None:
            break
        Z = Z * z
        x, y = x.exact_div(z), y.exact_div(z)
    if Z == 1:
        return False
    tr.scale(Z, "strip")
    return True


def _cz_route(tr: Trace, run: _Run) -> Certificate:
    x, y = tr.row
    ctx = driver_context(x.as_int(), y)
    if ctx.m == 1:
        raise PipelineInvariantViolated("driver", "m = 1 but the row was not recognized as unimodular")
    if ctx.s != 1:
        e = cz_case2_shift(x, y, ctx.m, run.options.e_max)
        tr.shift(x.ring(e), f"case2_shift:e={e}")
        x, y = tr.row
    split = cz_case1_split(x, y, run.options)
    a, b = split.cofactors
    unimod = unimodular_row_cert(split.xp, split.yp, -b, a, run.options.decomp)
    return cert_multiply(unimod, cert_trivial(split.E, ("cz_split",)))


def _drive(tr: Trace, run: _Run, integerized: bool) -> Certificate:
    restrips = 1
    while True:
        cert = _direct_cert(tr, run)
        if cert is not None:
            return cert
        if _strip(tr, run) and integerized and not tr.row[0].is_rational():
            if restrips == 0:
                raise PipelineInvariantViolated("driver", "strip broke rationality twice")
            restrips -= 1
            run.flags.add("RestripOccurred")
            integerized = False
            continue
        if not tr.row[0].is_rational():
            integerize_trace(tr)
            integerized = True
            continue
        return _cz_route(tr, run)


def factor_singular_row(x: QuadInt, y: QuadInt, options: PipelineOptions | None = None) -> Certificate:
    """Verified certificate M^{E1..Es} = A1..Ar for M = [x y]."""
    opts = options or PipelineOptions()
    run = _Run(opts)
    tr = Trace(x, y, opts)
    if not opts.early_reduction:
        integerize_trace(tr)
    inner = _drive(tr, run, integerized=not opts.early_reduction)
    cert = lift(inner, tr.steps)
    if any(n > MRS_TARGET for n in cert.n0_values):
        run.flags.add(MRS_EXCEEDED)
    r, s = cert.counts
    within = r <= BOUND_R and s <= BOUND_S
    cert = cert.with_meta(flags=run.flags, annotations=tuple(run.notes) + (
        f"cases:{'/'.join(tr.cases) or '-'}",
        f"bound:{'within' if within else 'exceeds'}({BOUND_R},{BOUND_S})",
    ))
    if cert.target != row_matrix(x, y):
        raise PipelineInvariantViolated("driver", "certificate target is not [x y]")
    rep = verify_report(cert)
    if not rep:
        raise PipelineInvariantViolated("driver", rep.reason)
    return cert
