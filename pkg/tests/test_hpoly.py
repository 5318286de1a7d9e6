import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, strategies as st

from p2dyn.fields import QQ
from p2dyn.hpoly import (
    DegreeOverflow,
    HPoly,
    dense_size,
    format_poly,
    hp_gcd,
    hp_gcd_many,
    jacobian_det,
    monomials,
    pure_python,
    substitute,
    term_cap,
)
from p2dyn.parsing import parse_poly

from conftest import GF5, GF7, GF25, polys, random_poly

X, Y, Z = sympy.symbols("x y z")


def to_sympy(P):
    return sympy.Add(*[sympy.Rational(v.numerator, v.denominator) * X**a * Y**b * Z**c for (a, b, c), v in P.terms])


def from_sympy(expr, field=QQ):
    poly = sympy.Poly(sympy.expand(expr), X, Y, Z)
    return HPoly(field, {e: field.coerce(Fraction(int(c.p), int(c.q))) for e, c in poly.terms()})


def test_constructors_and_accessors():
    x, y, z = HPoly.gens(QQ)
    P = x * y - 2 * z**2
    assert P.degree == 2 and len(P) == 2
    assert P.leading_exp() == (1, 1, 0)
    assert P.coeff((0, 0, 2)).value == -2
    assert P.coeff((2, 0, 0)).value == 0
    assert [e for e, _ in P.terms] == [(1, 1, 0), (0, 0, 2)]
    assert str(P) == "x*y - 2*z^2"
    assert HPoly.zero(QQ).is_zero() and HPoly.const(QQ, 3).is_constant()
    assert HPoly.var(QQ, "z") == z
    with pytest.raises(ValueError):
        HPoly(QQ, {(1, 0, 0): 1, (0, 2, 0): 1})
    with pytest.raises(ValueError):
        _ = x + y * y


def test_monomial_listing():
    for d in range(6):
        ms = monomials(d)
        assert len(ms) == dense_size(d) == (d + 1) * (d + 2) // 2
        assert ms == sorted(ms, reverse=True) and all(sum(m) == d for m in ms)


@given(polys(), polys(), polys())
def test_ring_laws_qq(a, b, c):
    assert a * (b * c) == (a * b) * c
    assert a * b == b * a
    if b.degree == c.degree or b.is_zero() or c.is_zero():
        assume(b.is_zero() or c.is_zero() or b.degree == c.degree)
        s = b + c
        assert a * s == a * b + a * c


@given(polys(), polys())
def test_multiplication_matches_sympy(a, b):
    assert to_sympy(a * b).expand() == (to_sympy(a) * to_sympy(b)).expand()


@pytest.mark.parametrize("field", [QQ, GF7, GF25], ids=str)
def test_flint_and_pure_kernels_agree(field):
    rng = random.Random(11)
    for _ in range(15):
        a = random_poly(field, rng.randint(1, 6), rng)
        b = random_poly(field, rng.randint(1, 6), rng)
        c = random_poly(field, rng.randint(0, 3), rng)
        if a.is_zero() or b.is_zero() or c.is_zero():
            continue
        fast = (a * b, hp_gcd(a * c, b * c))
        with pure_python():
            slow = (a * b, hp_gcd(a * c, b * c))
        assert fast == slow


@given(polys(nonzero=True), polys(nonzero=True))
def test_exact_division_inverts_multiplication(a, b):
    assert (a * b).exact_div(b) == a
    with pure_python():
        assert (a * b).exact_div(b) == a


def test_exact_division_rejects_remainder():
    x, y, z = HPoly.gens(QQ)
    with pytest.raises(ValueError):
        (x * x + y * y).exact_div(x + y)
    with pure_python(), pytest.raises(ValueError):
        (x * x + y * y).exact_div(x + y)


@pytest.mark.parametrize("field", [QQ, GF5, GF25], ids=str)
@given(seed=st.integers(0, 2**32))
def test_gcd_common_factor_property(field, seed):
    rng = random.Random(seed)
    a = random_poly(field, rng.randint(0, 3), rng)
    b = random_poly(field, rng.randint(0, 3), rng)
    c = random_poly(field, rng.randint(1, 3), rng)
    assume(not a.is_zero() and not b.is_zero() and not c.is_zero())
    with pure_python():
        g = hp_gcd(a * c, b * c)
        # c divides the gcd, and the gcd divides both inputs
        g.exact_div(c.normalized())
        (a * c).exact_div(g)
        (b * c).exact_div(g)
    assert g == g.normalized()


@given(polys(max_degree=3, nonzero=True), polys(max_degree=3, nonzero=True))
def test_gcd_matches_sympy(a, b):
    mine = hp_gcd(a, b)
    with pure_python():
        pure = hp_gcd(a, b)
    theirs = from_sympy(sympy.gcd(to_sympy(a), to_sympy(b)))
    assert mine == pure == theirs.normalized()


def test_gcd_edge_cases():
    x, y, z = HPoly.gens(QQ)
    zero = HPoly.zero(QQ)
    assert hp_gcd(zero, 3 * x * y) == x * y
    assert hp_gcd(x * z**2, y * z**3) == z**2
    assert hp_gcd_many([4 * x * y * z**2, 4 * y**2 * z**2, 4 * y * z**3]) == y * z**2
    with pure_python():
        assert hp_gcd_many([4 * x * y * z**2, 4 * y**2 * z**2, 4 * y * z**3]) == y * z**2


def test_normalization_conventions():
    x, y, z = HPoly.gens(QQ)
    assert (Fraction(-2, 3) * x + Fraction(4, 9) * y).normalized() == 3 * x - 2 * y
    g = HPoly.gens(GF7)
    assert (3 * g[0] + g[1]).normalized() == g[0] + 5 * g[1]


def test_substitute_matches_sympy():
    rng = random.Random(5)
    for _ in range(10):
        P = random_poly(QQ, rng.randint(1, 3), rng)
        e = rng.randint(1, 3)
        g = [random_poly(QQ, e, rng, density=0.8) for _ in range(3)]
        if any(gi.is_zero() for gi in g) or P.is_zero():
            continue
        expected = to_sympy(P).subs({X: to_sympy(g[0]), Y: to_sympy(g[1]), Z: to_sympy(g[2])}, simultaneous=True)
        got = substitute(P, g)
        with pure_python():
            assert substitute(P, g) == got
        assert sympy.expand(to_sympy(got) - expected) == 0


def test_evaluation():
    P = parse_poly("x*y - 2*z^2", QQ)
    assert P(1, 2, 3).value == -16
    Q = parse_poly("x^2 + a*y*z", GF25)
    a = GF25.gen()
    assert Q.eval_raw((GF25.one, GF25.one, GF25.one)) == GF25.add(GF25.one, a)


def test_derivative_and_jacobian_against_sympy():
    f = [parse_poly(s, QQ) for s in ("x*y", "x*y - 2*z^2", "y*z + 3*z^2")]
    J = jacobian_det(f)
    M = sympy.Matrix([[sympy.diff(to_sympy(P), v) for v in (X, Y, Z)] for P in f])
    assert sympy.expand(M.det() - to_sympy(J)) == 0
    assert J.degree == 3
    assert f[0].diff("x") == parse_poly("y", QQ)


def test_term_cap_raises_before_work():
    x, y, z = HPoly.gens(QQ)
    P = (x + y + z) ** 5
    with term_cap(10), pytest.raises(DegreeOverflow) as info:
        _ = P * P
    assert info.value.cap == 10 and info.value.degree == 10


def test_field_mismatch_is_rejected():
    a = HPoly.gens(QQ)[0]
    b = HPoly.gens(GF7)[0]
    with pytest.raises(ValueError):
        _ = a * b


def test_formatting_finite_fields():
    P = parse_poly("3*x - y + a*z + (2*a + 1)*x", GF25)
    assert format_poly(P) == "(4 + 2*a)*x + 4*y + a*z"
    assert parse_poly(format_poly(P), GF25) == P
