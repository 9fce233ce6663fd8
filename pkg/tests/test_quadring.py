from math import isqrt

import pytest
from hypothesis import given

from conftest import elem_pairs, rand_elem, rand_nonzero
from idemfactor.errors import AlphaZeroModFour, NotDivisible, NotPositive, NotSquareFree, ParseError, RingMismatch
from idemfactor.quadring import (
    QuadInt,
    format_elem,
    from_basis_coords,
    fundamental_unit,
    make_ring,
    parse_elem,
    pretty,
    to_basis_coords,
)

# Fundamental units from a brute-force scan below (frozen): (c1, c2) in the integral basis.
FROZEN_UNITS = {
    2: (1, 1), 3: (2, 1), 5: (0, 1), 6: (5, 2), 7: (8, 3), 10: (3, 1), 11: (10, 3),
    13: (1, 1), 14: (15, 4), 15: (4, 1), 17: (3, 2), 21: (2, 1), 22: (197, 42), 61: (17, 5),
}


def brute_force_unit(alpha):
    """Least v >= 1 with u^2 - alpha v^2 = +-4 (half-coordinates, parity permitting)."""
    v = 1
    while True:
        for t in (-4, 4):
            s = alpha * v * v + t
            u = isqrt(s) if s >= 0 else -1
            if u >= 0 and u * u == s and (alpha % 4 == 1 or (u % 2 == 0 and v % 2 == 0)):
                return u, v
        v += 1


@pytest.mark.parametrize("alpha", sorted(FROZEN_UNITS))
def test_fundamental_unit_matches_brute_force(alpha):
    R = make_ring(alpha)
    u, v = brute_force_unit(alpha)
    eps = fundamental_unit(R)
    assert (eps.u, eps.v) == (u, v)
    assert eps.coords() == FROZEN_UNITS[alpha]


def test_fundamental_unit_large_regulator():
    eps = fundamental_unit(make_ring(94))
    assert eps.coords() == (2143295, 221064)
    assert eps.norm() == 1


def test_make_ring_examples():
    R2, R5 = make_ring(2), make_ring(5)
    assert R2.branch == (2, 3) and R2.omega == "sqrt(2)" and R2.discriminant == 8
    assert R5.branch == (1,) and R5.omega == "(1+sqrt(5))/2" and R5.discriminant == 5
    with pytest.raises(NotSquareFree, match="alpha not square-free"):
        make_ring(12)


@pytest.mark.parametrize("bad,exc", [(12, AlphaZeroModFour), (18, NotSquareFree), (0, NotPositive),
                                     (-3, NotPositive), (1, NotPositive), (9, NotSquareFree)])
def test_make_ring_rejects(bad, exc):
    with pytest.raises(exc):
        make_ring(bad)


def test_basis_coordinates():
    x = from_basis_coords(make_ring(5), 1, 3)
    assert (x.u, x.v) == (5, 3)
    y = from_basis_coords(make_ring(2), 4, 7)
    assert (y.u, y.v) == (8, 14)
    assert from_basis_coords(make_ring(5), 0, 0).is_zero()


def test_multiplication_examples():
    R5, R2 = make_ring(5), make_ring(2)
    w = R5.w()
    assert w * w == QuadInt(R5, 3, 1)
    assert R2(1, 1) * R2(3, 2) == R2(7, 5)


def test_norm_trace_examples():
    assert make_ring(2)(3, 2).norm() == 1
    assert make_ring(5).w().norm() == -1
    five = make_ring(3)(5, 0)
    assert five.norm() == 25 and five.trace() == 10


def test_exact_div_examples():
    R = make_ring(2)
    assert R(7, 5).exact_div(R(1, 1)) == R(3, 2)
    with pytest.raises(NotDivisible):
        R(5, 0).exact_div(2)
    assert R(6, 2).exact_div(2) == R(3, 1)
    with pytest.raises(ZeroDivisionError):
        R(1, 0).exact_div(0)


def test_is_unit_examples(ring):
    R2 = make_ring(2)
    assert R2(1, 1).is_unit()
    assert not R2.sqrt_alpha().is_unit()
    assert ring.one().is_unit()


def test_parity_is_enforced():
    with pytest.raises(ValueError):
        QuadInt(make_ring(2), 1, 1)
    with pytest.raises(ValueError):
        QuadInt(make_ring(5), 1, 2)


def test_mixed_rings_rejected():
    with pytest.raises(RingMismatch):
        make_ring(2).one() + make_ring(3).one()


@pytest.mark.parametrize("text,expected", [
    ("(1,2)", (1, 2)), ("3+4*w", (3, 4)), ("w", (0, 1)), ("-3*w", (0, -3)), ("w-4", (-4, 1)),
    ("7", (7, 0)), (" -2 - 5w ", (-2, -5)), ("( -1 , 0 )", (-1, 0)),
])
def test_parse_elem(text, expected):
    assert parse_elem(make_ring(10), text).coords() == expected


@pytest.mark.parametrize("text", ["", "1+", "x", "(1,2", "2**w", "1+2*v", "((1,2))"])
def test_parse_elem_rejects(text):
    with pytest.raises(ParseError):
        parse_elem(make_ring(2), text)


def test_formatting_round_trip(ring, rng):
    for _ in range(200):
        x = rand_elem(rng, ring)
        assert parse_elem(ring, format_elem(x)) == x
        assert parse_elem(ring, pretty(x)) == x


@given(elem_pairs())
def test_ring_laws(pair):
    a, b = pair
    assert (a * b).norm() == a.norm() * b.norm()
    assert (a * b).conj() == a.conj() * b.conj()
    assert a + a.conj() == a.trace()
    assert a + (-a) == 0


@given(elem_pairs(nonzero_second=True))
def test_exact_div_inverts_multiplication(pair):
    a, b = pair
    assert (a * b).exact_div(b) == a


def test_coordinate_round_trips(ring, rng):
    for _ in range(1200):  # about 10^4 over the ring fixture
        c = (rng.randint(-10**9, 10**9), rng.randint(-10**9, 10**9))
        assert to_basis_coords(from_basis_coords(ring, *c)) == c


def test_exact_div_bulk(ring, rng):
    for _ in range(1200):
        a, b = rand_elem(rng, ring, 1000), rand_nonzero(rng, ring, 1000)
        assert (a * b).exact_div(b) == a


def test_unit_powers(ring):
    eps = fundamental_unit(ring)
    assert eps.u > 0 and eps.v > 0
    for k in range(1, 6):
        assert (eps ** k).is_unit()


def test_unit_inverse_powers(ring):
    eps = fundamental_unit(ring)
    assert eps ** -3 * eps ** 3 == 1
    with pytest.raises(ValueError):
        ring(2, 0) ** -1
