"""Ideals of O_k as rank-2 sublattices of Z^2 in the integral basis {1, w}.

A (possibly fractional) ideal is L/den where L has the Hermite basis
columns (a, 0) and (b, d) with a, d > 0 and 0 <= b < a.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from . import kernels
from .errors import AllGeneratorsZero, NotInIdeal, PipelineInvariantViolated, RingMismatch, ZeroIdeal
from .intlib import ext_gcd, prime_divisors
from .quadring import QuadInt, RingSpec, from_basis_coords, fundamental_unit, to_basis_coords

DEFAULT_HEIGHT_BUDGET = 10**6


def mul_w(ring: RingSpec, c1: int, c2: int) -> tuple[int, int]:
    """basis coordinates of w * (c1 + c2 w)."""
    if ring.is_one_mod_four:
        return c2 * ((ring.alpha - 1) // 4), c1 + c2
    return c2 * ring.alpha, c1


def _combine(cols, tr, i, j, ci, cj, di, dj):
    """Replace columns i, j by ci*col_i + cj*col_j and di*col_i + dj*col_j (unimodular)."""
    vi, vj = cols[i], cols[j]
    cols[i] = (ci * vi[0] + cj * vj[0], ci * vi[1] + cj * vj[1])
    cols[j] = (di * vi[0] + dj * vj[0], di * vi[1] + dj * vj[1])
    ti, tj = tr[i], tr[j]
    tr[i] = [ci * p + cj * q for p, q in zip(ti, tj)]
    tr[j] = [di * p + dj * q for p, q in zip(ti, tj)]


def lattice_hnf(vectors):
    """HNF of the Z-span of 2-vectors, with transforms.

    Returns (a, b, d, t1, t2): basis (a, 0), (b, d), and integer coefficient lists
    t1, t2 with sum t[k] * vectors[k] equal to the respective basis vector.
    Raises ZeroIdeal if the span has rank < 2.
    """
    n = len(vectors)
    cols = [tuple(v) for v in vectors]
    tr = [[int(k == j) for k in range(n)] for j in range(n)]
    # gather the second coordinate into one pivot column
    piv = next((j for j in range(n) if cols[j][1]), None)
    if piv is None:
        raise ZeroIdeal("lattice has rank < 2")
    for j in range(n):
        if j == piv or cols[j][1] == 0:
            continue
        yp, yj = cols[piv][1], cols[j][1]
        g, s, t = ext_gcd(yp, yj)
        _combine(cols, tr, piv, j, s, t, yj // g, -(yp // g))
    # gather the first coordinate of the remaining columns
    rest = [j for j in range(n) if j != piv]
    top = next((j for j in rest if cols[j][0]), None)
    if top is None:
        raise ZeroIdeal("lattice has rank < 2")
    for j in rest:
        if j == top or cols[j][0] == 0:
            continue
        xp, xj = cols[top][0], cols[j][0]
        g, s, t = ext_gcd(xp, xj)
        _combine(cols, tr, top, j, s, t, xj // g, -(xp // g))
    a, t1 = cols[top][0], tr[top]
    (b, d), t2 = cols[piv], tr[piv]
    if a < 0:
        a, t1 = -a, [-c for c in t1]
    if d < 0:
        b, d, t2 = -b, -d, [-c for c in t2]
    q = b // a
    b -= q * a
    t2 = [p - q * r for p, r in zip(t2, t1)]
    return a, b, d, t1, t2


@dataclass(frozen=True)
class OIdeal:
    ring: RingSpec
    a: int
    b: int
    d: int
    den: int = 1
    generators: tuple = field(default=(), compare=False, hash=False)

    @property
    def basis(self):
        return ((self.a, self.b), (0, self.d))

    def basis_elements(self):
        """Numerators (over den) of the Z-basis."""
        return (from_basis_coords(self.ring, self.a, 0), from_basis_coords(self.ring, self.b, self.d))

    def is_integral(self) -> bool:
        return self.den == 1

    def is_unit_ideal(self) -> bool:
        return (self.a, self.b, self.d, self.den) == (1, 0, 1, 1)

    def norm(self):
        return ideal_norm(self)

    def __contains__(self, x):
        return contains(self, x)

    def __mul__(self, other):
        return ideal_product(self, other)


def _from_lattice(ring, vectors, den=1, generators=()):
    a, b, d, _, _ = lattice_hnf(vectors)
    g = gcd(gcd(a, b), gcd(d, den))
    ideal = OIdeal(ring, a // g, b // g, d // g, den // g, tuple(generators))
    _check_module(ideal)
    return ideal


def _check_module(I: OIdeal):
    for x, y in ((I.a, 0), (I.b, I.d)):
        if not _lattice_member(I, *mul_w(I.ring, x, y)):
            raise PipelineInvariantViolated("omodule", f"lattice {I.basis} is not closed under w")


def _lattice_member(I: OIdeal, x: int, y: int) -> bool:
    if y % I.d:
        return False
    return (x - (y // I.d) * I.b) % I.a == 0


def _z_generators(ring, gens):
    vecs = []
    for g in gens:
        c1, c2 = to_basis_coords(g)
        vecs.append((c1, c2))
        vecs.append(mul_w(ring, c1, c2))
    return vecs


def ideal_from_generators(ring: RingSpec, gens) -> OIdeal:
    gens = tuple(gens)
    for g in gens:
        if g.ring.alpha != ring.alpha:
            raise RingMismatch(f"generator over alpha={g.ring.alpha} for ring alpha={ring.alpha}")
    if not any(gens):
        raise AllGeneratorsZero("ideal needs a nonzero generator")
    return _from_lattice(ring, _z_generators(ring, gens), 1, gens)


def unit_ideal(ring: RingSpec) -> OIdeal:
    return OIdeal(ring, 1, 0, 1, 1, (ring.one(),))


def ideal_norm(I: OIdeal):
    """Index-style norm; an int for integral ideals, else a Fraction."""
    n = Fraction(I.a * I.d, I.den * I.den)
    return n.numerator if n.denominator == 1 else n


def contains(I: OIdeal, x: QuadInt) -> bool:
    if x.ring.alpha != I.ring.alpha:
        raise RingMismatch("element and ideal over different rings")
    c1, c2 = to_basis_coords(x)
    return _lattice_member(I, c1 * I.den, c2 * I.den)


def ideal_product(I: OIdeal, J: OIdeal) -> OIdeal:
    if I.ring.alpha != J.ring.alpha:
        raise RingMismatch("ideals over different rings")
    vecs = [to_basis_coords(p * q) for p in I.basis_elements() for q in J.basis_elements()]
    return _from_lattice(I.ring, vecs, I.den * J.den)


def ideal_conj(I: OIdeal) -> OIdeal:
    vecs = [to_basis_coords(e.conj()) for e in I.basis_elements()]
    return _from_lattice(I.ring, vecs, I.den)


def inverse_ideal(I: OIdeal) -> OIdeal:
    """conj(I) / N(I); the product with I is checked to be O."""
    if I.a == 0 or I.d == 0:
        raise ZeroIdeal("zero ideal has no inverse")
    c = ideal_conj(I)
    # I = L/den, so I^-1 = conj(L) * den / N(L)
    vecs = [to_basis_coords(e * I.den) for e in c.basis_elements()]
    inv = _from_lattice(I.ring, vecs, c.den * I.a * I.d)
    if not ideal_product(I, inv).is_unit_ideal():
        raise PipelineInvariantViolated("omodule", "I * I^-1 != O")
    return inv


def solve_combination(gens, target: QuadInt):
    """Coefficients c with sum(c[i] * gens[i]) == target, or NotInIdeal."""
    gens = list(gens)
    if not gens:
        raise NotInIdeal("empty generator list")
    ring = gens[0].ring
    if not any(gens):
        if target.is_zero():
            return [ring.zero() for _ in gens]
        raise NotInIdeal("all generators are zero")
    vecs = _z_generators(ring, gens)
    a, b, d, t1, t2 = lattice_hnf(vecs)
    x, y = to_basis_coords(target)
    if y % d or (x - (y // d) * b) % a:
        raise NotInIdeal(f"{target!r} not in the ideal generated by {gens!r}")
    k2 = y // d
    k1 = (x - k2 * b) // a
    coeff = [k1 * p + k2 * q for p, q in zip(t1, t2)]
    out = [from_basis_coords(ring, coeff[2 * i], coeff[2 * i + 1]) for i in range(len(gens))]
    total = ring.zero()
    for c, g in zip(out, gens):
        total = total + c * g
    if total != target:
        raise PipelineInvariantViolated("omodule", "combination does not reproduce the target")
    return out


# --- bounded norm-form enumeration -----------------------------------------------


def _generator_v_bound(ring: RingSpec, n: int) -> int:
    """|v| bound for some generator of each principal ideal of norm n.

    Every such ideal has a generator z with sqrt(n) <= z < sqrt(n)*eps0, hence
    |v| sqrt(alpha) = |z - conj(z)| <= sqrt(n)*(eps0 + 1).
    """
    eps = fundamental_unit(ring)
    r = isqrt(ring.alpha) + 1
    # eps0 + 1 <= (u0 + 2 + v0*r)/2
    top = eps.u + 2 + eps.v * r
    return isqrt(n * top * top // (4 * ring.alpha)) + 1


def elements_of_norm(ring: RingSpec, n: int, height_budget: int = DEFAULT_HEIGHT_BUDGET):
    """Elements of norm +-n covering every principal ideal of norm n (up to units).

    Returns (candidates, complete) where complete is False when the v-range was
    truncated by height_budget. Candidates come in ascending |v|, rational first.
    """
    vmax = _generator_v_bound(ring, n)
    complete = vmax <= height_budget
    vmax = min(vmax, height_budget)
    found = []
    for target in (4 * n, -4 * n):
        for u, v in kernels.norm_form_scan(ring.alpha, target, vmax):
            if (u - v) % 2 or (not ring.is_one_mod_four and (u % 2 or v % 2)):
                continue
            found.append((v, u))
    out = []
    seen = set()
    for v, u in sorted(found):
        for vv in ((v, -v) if v else (v,)):
            z = QuadInt(ring, u, vv)
            if z not in seen:
                seen.add(z)
                out.append(z)
    return out, complete


def principal_generator(I: OIdeal, height_budget: int = DEFAULT_HEIGHT_BUDGET):
    """(z, complete): a verified generator of the integral ideal I, or None."""
    if not I.is_integral():
        raise ValueError("principal_generator expects an integral ideal")
    n = ideal_norm(I)
    if n == 1:
        return I.ring.one(), True
    cands, complete = elements_of_norm(I.ring, n, height_budget)
    for z in cands:
        if contains(I, z):
            # same norm and z in I force zO = I; re-check anyway
            if ideal_from_generators(I.ring, [z]) != I:
                raise PipelineInvariantViolated("omodule", "generator check failed")
            return z, True
    return None, complete


def is_principal(I: OIdeal, height_budget: int = DEFAULT_HEIGHT_BUDGET):
    """A generator z with zO = I, or None when none exists within the budget."""
    return principal_generator(I, height_budget)[0]


def divisors(n: int):
    n = abs(n)
    ds = [1]
    for p in sorted(prime_divisors(n)):
        k, m = 0, n
        while m % p == 0:
            m //= p
            k += 1
        ds = [d * p**e for d in ds for e in range(k + 1)]
    return sorted(ds)


def common_divisor_search(x: QuadInt, y: QuadInt, height_budget: int = DEFAULT_HEIGHT_BUDGET):
    """(z, complete): a non-unit common divisor of largest norm found, or None.

    A common divisor z means xO + yO is contained in zO, so |N(z)| divides N(xO + yO).
    """
    I = ideal_from_generators(x.ring, [x, y])
    n = ideal_norm(I)
    complete = True
    for dn in reversed(divisors(n)):
        if dn == 1:
            break
        cands, ok = elements_of_norm(x.ring, dn, height_budget)
        complete = complete and ok
        for z in cands:
            if z.divides(x) and z.divides(y):
                return z, complete
    return None, complete


def common_divisor(x: QuadInt, y: QuadInt, height_budget: int = DEFAULT_HEIGHT_BUDGET):
    return common_divisor_search(x, y, height_budget)[0]
