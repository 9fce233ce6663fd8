"""Factor SL2(O_k) matrices into elementary matrices and normalize to alternating words."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import BudgetExhausted, NotInSL2, PipelineInvariantViolated
from .mat2 import Mat2, identity, in_SL2, lower, mul, upper
from .quadring import QuadInt, RingSpec, from_basis_coords, fundamental_unit, make_ring, to_basis_coords

UPPER, LOWER = "upper", "lower"


@dataclass(frozen=True)
class ElementaryFactor:
    side: str
    a: QuadInt

    def matrix(self) -> Mat2:
        return upper(self.a) if self.side == UPPER else lower(self.a)

    def inverse(self) -> ElementaryFactor:
        return ElementaryFactor(self.side, -self.a)


@dataclass(frozen=True)
class AlternatingWord:
    """upper(q0) lower(q1) ... upper(q_{2n0-2}) lower(q_{2n0-1})."""

    qs: tuple

    @property
    def n0(self) -> int:
        return len(self.qs) // 2

    def factors(self):
        return [ElementaryFactor(UPPER if i % 2 == 0 else LOWER, q) for i, q in enumerate(self.qs)]


@dataclass(frozen=True)
class DecompBudget:
    max_steps: int = 400
    window: int = 2            # quotient perturbation radius around the rounded point
    unit_shifts: int = 1       # also round eps^k * ratio for |k| <= unit_shifts
    fallback_depth: int = 3
    fallback_beam: int = 6
    fallback_radius: int = 2


@dataclass
class Decomposition:
    factors: list
    fallback_steps: int = 0
    steps: int = 0
    notes: list = field(default_factory=list)


def word_product(factors, ring: RingSpec) -> Mat2:
    out = identity(ring)
    for f in factors:
        out = mul(out, f.matrix())
    return out


def _round_half_to_zero(n: int, d: int) -> int:
    if d < 0:
        n, d = -n, -d
    q, r = divmod(n, d)
    if 2 * r > d or (2 * r == d and q < 0):
        q += 1
    return q


def _rounded_ratio(x: QuadInt, y: QuadInt) -> QuadInt:
    """Coordinate-wise nearest element to x/y, ties toward zero."""
    num = x * y.conj()
    n = y.norm()
    c1, c2 = to_basis_coords(num)
    return from_basis_coords(x.ring, _round_half_to_zero(c1, n), _round_half_to_zero(c2, n))


@lru_cache(maxsize=None)
def _offsets(radius: int):
    pts = [(i, j) for i in range(-radius, radius + 1) for j in range(-radius, radius + 1)]
    return tuple(sorted(pts, key=lambda t: (abs(t[0]) + abs(t[1]), t)))


@lru_cache(maxsize=None)
def _unit_scalings(alpha: int, unit_shifts: int):
    """Pairs (eps^k, eps^-k) for k = 0, -1, 1, -2, 2, ..."""
    R = make_ring(alpha)
    eps = fundamental_unit(R)
    eps_inv = eps.conj() * eps.norm()
    out = [(R.one(), R.one())]
    for k in range(1, unit_shifts + 1):
        out.append((eps_inv**k, eps**k))
        out.append((eps**k, eps_inv**k))
    return tuple(out)


def quotient_candidates(x: QuadInt, y: QuadInt, radius: int, unit_shifts: int):
    """Candidate quotients q for x - q*y, rounded from eps^k * x/y and perturbed."""
    R = x.ring
    out, seen = [], set()
    for scale, back in _unit_scalings(R.alpha, unit_shifts):
        centre = _rounded_ratio(scale * x, y)
        for d1, d2 in _offsets(radius):
            q = (centre + from_basis_coords(R, d1, d2)) * back
            if q not in seen:
                seen.add(q)
                out.append(q)
    return out


def _best_quotient(x, y, budget):
    best, best_n = None, None
    for q in quotient_candidates(x, y, budget.window, budget.unit_shifts):
        n = abs((x - q * y).norm())
        if best_n is None or n < best_n:
            best, best_n = q, n
    return best, best_n


def decompose_ex(M: Mat2, budget: DecompBudget | None = None) -> Decomposition:
    """Elementary factorization with diagnostics; the product is checked against M."""
    budget = budget or DecompBudget()
    if not in_SL2(M):
        raise NotInSL2(f"{M} is not in SL2")
    R = M.ring
    p, r = M.p, M.r
    left = []  # elementary factors E with M = E_1 E_2 ... (rest)
    fallback = 0
    steps = 0

    def apply(side, q):
        # left-multiply the working matrix by the inverse of factor (side, q)
        nonlocal p, r
        if side == UPPER:
            p = p - q * r
        else:
            r = r - q * p
        left.append(ElementaryFactor(side, q))

    while True:
        if p == 1:
            break
        if r.is_unit():
            apply(UPPER, (p - 1) * r.conj() * r.norm())
            break
        if p.is_unit():
            apply(LOWER, (r - 1) * p.conj() * p.norm())
            apply(UPPER, p - 1)
            break
        steps += 1
        if steps > budget.max_steps:
            raise BudgetExhausted(f"no unit reached after {budget.max_steps} steps", partial=list(left))
        np_, nr = abs(p.norm()), abs(r.norm())
        if nr <= np_:
            q, n = _best_quotient(p, r, budget)
            if n < nr:
                apply(UPPER, q)
                continue
        else:
            q, n = _best_quotient(r, p, budget)
            if n < np_:
                apply(LOWER, q)
                continue
        path = _fallback_search(p, r, budget)
        if path is None:
            raise BudgetExhausted(f"Euclidean step stalled at norms ({np_}, {nr})", partial=list(left))
        fallback += 1
        for side, q in path:
            apply(side, q)
    # now the working matrix is (1 t; 0 1) since the first column is (1, 0) and det = 1
    if not r.is_zero():
        apply(LOWER, r)
    work = identity(R)
    for f in left:
        work = mul(f.inverse().matrix(), work)
    rest = mul(work, M)
    if not (rest.p == 1 and rest.r == 0 and rest.s == 1):
        raise PipelineInvariantViolated("decompose", "reduction did not reach an upper unitriangular matrix")
    factors = left + ([ElementaryFactor(UPPER, rest.q)] if rest.q else [])
    if word_product(factors, R) != M:
        raise PipelineInvariantViolated("decompose", "elementary factorization does not reproduce the input")
    return Decomposition(factors, fallback, steps)


def _fallback_search(p, r, budget):
    """Short move sequence (side, q) that strictly lowers min(|N(p)|, |N(r)|), or None."""
    goal = min(abs(p.norm()), abs(r.norm()))
    frontier = [(p, r, ())]
    seen = {(p, r)}
    for _ in range(budget.fallback_depth):
        nxt = []
        for cp, cr, path in frontier:
            moves = []
            if not cr.is_zero():
                for q in quotient_candidates(cp, cr, budget.fallback_radius, budget.unit_shifts):
                    if q:
                        np_ = cp - q * cr
                        moves.append((abs(np_.norm()), UPPER, q, np_, cr))
            if not cp.is_zero():
                for q in quotient_candidates(cr, cp, budget.fallback_radius, budget.unit_shifts):
                    if q:
                        nr = cr - q * cp
                        moves.append((abs(nr.norm()), LOWER, q, cp, nr))
            moves.sort(key=lambda m: m[0])
            for n, side, q, a, b in moves[: budget.fallback_beam]:
                if (a, b) in seen:
                    continue
                seen.add((a, b))
                new_path = path + ((side, q),)
                if min(abs(a.norm()), abs(b.norm())) < goal:
                    return list(new_path)
                nxt.append((a, b, new_path))
        frontier = nxt
    return None


def decompose(M: Mat2, budget: DecompBudget | None = None):
    return decompose_ex(M, budget).factors


def to_alternating(factors, M: Mat2) -> AlternatingWord:
    """Merge, drop identities, and pad so the word starts upper and ends lower."""
    R = M.ring
    merged = []
    for f in factors:
        if f.a.is_zero():
            continue
        if merged and merged[-1].side == f.side:
            a = merged[-1].a + f.a
            merged.pop()
            if not a.is_zero():
                merged.append(ElementaryFactor(f.side, a))
        else:
            merged.append(f)
    qs = [f.a for f in merged]
    if merged and merged[0].side == LOWER:
        qs.insert(0, R.zero())
    if len(qs) % 2:
        qs.append(R.zero())
    word = AlternatingWord(tuple(qs))
    if word_product(word.factors(), R) != M:
        raise PipelineInvariantViolated("decompose", "alternating normalization changed the product")
    return word
