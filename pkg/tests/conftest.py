import random

import pytest
from hypothesis import settings, strategies as st

from p2dyn import QQ, HPoly, PrimeField, example_maps, field_make
from p2dyn.hpoly import monomials

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

GF5 = PrimeField(5)
GF7 = PrimeField(7)
GF25 = field_make("GF(5,2)")
GF125 = field_make("GF(5,3)")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def ex():
    return example_maps()


def random_poly(field, d, rng: random.Random, density=0.6):
    terms = {}
    for e in monomials(d):
        if rng.random() < density:
            terms[e] = field.random(rng) if field.is_finite else field.from_int(rng.randint(-9, 9))
    return HPoly(field, terms, degree=d)


@st.composite
def polys(draw, field=QQ, max_degree=4, nonzero=False):
    d = draw(st.integers(0, max_degree))
    seed = draw(st.integers(0, 2**32))
    P = random_poly(field, d, random.Random(seed))
    if nonzero and P.is_zero():
        P = HPoly.monomial(field, monomials(d)[0])
    return P


def random_quadratic_birational(field, rng: random.Random):
    """A o s o B with s the standard quadratic involution [yz, xz, xy]."""
    from p2dyn.cremona import compose, linear_map, map_new
    from p2dyn.findyn import random_pgl3

    x, y, z = HPoly.gens(field)
    s = map_new(y * z, x * z, x * y)
    A = linear_map(field, random_pgl3(field, rng))
    B = linear_map(field, random_pgl3(field, rng))
    return compose(A, compose(s, B))
