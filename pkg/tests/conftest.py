import random

import pytest
from hypothesis import strategies as st

from idemfactor.mat2 import Mat2, mat
from idemfactor.quadring import from_basis_coords, make_ring

SMALL_ALPHAS = [2, 3, 5, 6, 7, 10, 13, 15, 21]


@pytest.fixture(params=SMALL_ALPHAS, ids=lambda a: f"alpha{a}")
def ring(request):
    return make_ring(request.param)


@pytest.fixture
def rng():
    return random.Random(20240611)


def rand_elem(rng, R, h=20):
    return from_basis_coords(R, rng.randint(-h, h), rng.randint(-h, h))


def rand_nonzero(rng, R, h=20):
    while True:
        z = rand_elem(rng, R, h)
        if not z.is_zero():
            return z


def rand_matrix(rng, R, h=6) -> Mat2:
    return mat(R, *(rand_elem(rng, R, h) for _ in range(4)))


def rand_sl2(rng, R, length=4, h=3) -> Mat2:
    M = mat(R, 1, 0, 0, 1)
    for i in range(length):
        a = rand_elem(rng, R, h)
        M = M @ (mat(R, 1, a, 0, 1) if i % 2 else mat(R, 1, 0, a, 1))
    return M


alphas = st.sampled_from(SMALL_ALPHAS)
coords = st.integers(min_value=-10**6, max_value=10**6)


@st.composite
def elem_pairs(draw, nonzero_second=False):
    R = make_ring(draw(alphas))
    a = from_basis_coords(R, draw(coords), draw(coords))
    b = from_basis_coords(R, draw(coords), draw(coords))
    if nonzero_second and b.is_zero():
        b = R.one()
    return a, b


def case3_coords(rng, h=60):
    """Basis coordinates (x1, x2, y1, y2) landing in Case 3A: both entries have a
    nontrivial coordinate gcd, the two gcds are coprime, and nothing degenerates."""
    from math import gcd
    while True:
        x1, x2, y1, y2 = (rng.randint(-h, h) for _ in range(4))
        if x2 == 0 or y2 == 0 or (x1 == 0 and y1 == 0):
            continue
        s, r = gcd(x1, x2), gcd(y1, y2)
        if s > 1 and r > 1 and gcd(s, r) == 1:
            return x1, x2, y1, y2


ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(ACCEPTANCE_LINES[number])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
