from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from p2dyn.cremona import DegreeSequence
from p2dyn.dyndeg import (
    bounds_from_sequence,
    classify_growth,
    cor32_lower_bound,
    iroot,
    largest_real_root,
    nth_root_bracket,
    root_bracket_check,
    sqrt2_bracket,
    submult_upper_bound,
    thm31_applicable,
    thm31_lower_bound,
)

mpmath.mp.dps = 60
C = mpmath.mpf(3) ** 36
TIGHT = mpmath.mpf(2) ** -55


def q_of(d1, d2):
    return mpmath.mpf(d2) / (mpmath.mpf(3) ** 18 * mpmath.sqrt(2) * d1)


def thm31_oracle(d1, d2, n):
    q = q_of(d1, d2)
    return (((4 * C - 1) * q * q + 1) / (4 * C * q)) ** (mpmath.mpf(1) / n)


def cor32_oracle(d1, d2, n):
    return (q_of(d1, d2) / 2) ** (mpmath.mpf(1) / n)


def test_sqrt2_bracket():
    for prec in (8, 32, 64, 200):
        lo, hi = sqrt2_bracket(prec)
        assert lo * lo < 2 < hi * hi and hi - lo < Fraction(1, 2**prec)


@given(st.integers(0, 10**40), st.integers(1, 12))
def test_iroot_is_floor_root(a, n):
    r = iroot(a, n)
    assert r**n <= a < (r + 1) ** n


@given(st.fractions(min_value=0, max_value=10**12), st.integers(1, 40))
def test_nth_root_bracket(x, n):
    lo, hi = nth_root_bracket(x, n, 40)
    assert lo**n <= x <= hi**n and hi - lo <= Fraction(1, 2**40)


@pytest.mark.parametrize("n", [30, 31])
def test_bounds_match_high_precision_oracle(n):
    d1, d2 = 2**n, 2 ** (2 * n)
    b = thm31_lower_bound(d1, d2, n)
    oracle = thm31_oracle(d1, d2, n)
    assert mpmath.mpf(b.value.numerator) / b.value.denominator <= oracle
    assert oracle - mpmath.mpf(b.value.numerator) / b.value.denominator < TIGHT
    c = cor32_lower_bound(d1, d2, n)
    co = cor32_oracle(d1, d2, n)
    cv = mpmath.mpf(c.value.numerator) / c.value.denominator
    if c.useful:
        assert cv <= co and co - cv < TIGHT
    else:
        assert co < 1 and cv <= co


def test_frozen_bound_values():
    # mpmath at 60 digits
    assert abs(float(thm31_lower_bound(2**30, 2**60, 30).value) - 1.0226807) < 1e-6
    assert abs(float(thm31_lower_bound(2**31, 2**62, 31).value) - 1.0450487) < 1e-6
    assert abs(float(cor32_lower_bound(2**31, 2**62, 31).value) - 1.0219411) < 1e-6
    assert not cor32_lower_bound(2**30, 2**60, 30).useful
    assert thm31_lower_bound(2**29, 2**58, 29) is None
    assert abs(float(submult_upper_bound(2**31, 31).value) - 2 ** (32 / 31)) < 1e-12


@given(st.integers(1, 10**20), st.integers(1, 10**40), st.integers(1, 40))
def test_no_certificate_without_integer_test(d1, d2, n):
    ok = d2 * d2 >= 2 * 3**36 * d1 * d1
    assert thm31_applicable(d1, d2) == ok
    for op in (thm31_lower_bound, cor32_lower_bound):
        b = op(d1, d2, n)
        assert (b is not None) == ok
        if b is not None and b.useful:
            assert b.value >= 1


@given(st.integers(1, 60), st.integers(1, 40))
def test_lower_bounds_never_exceed_true_growth(k, n):
    # for d_n = B^n with B = 2^k the true exponent is B; every lower bound stays below it
    B = 2**k
    d1, d2 = B**n, B ** (2 * n)
    for op in (thm31_lower_bound, cor32_lower_bound):
        b = op(d1, d2, n)
        if b is not None:
            assert b.value <= B
    assert submult_upper_bound(d1, n).value >= B


def test_bounds_from_geometric_sequence():
    b = bounds_from_sequence([2**n for n in range(1, 63)])
    assert b.first("thm31").n == 30 and b.first("cor32").n == 31
    assert b.best_lower.kind == "thm31" and b.best_lower.n == 31
    assert abs(float(b.best_upper.value) - 2 ** (32 / 31)) < 1e-12
    assert b.consistent()
    assert all(x.value <= 2 for x in b.lowers) and all(x.value >= 2 for x in b.uppers)


def test_bounds_short_sequences():
    one = bounds_from_sequence([2])
    assert [x.kind for x in one.entries] == ["submult"] and one.best_lower is None
    seq = DegreeSequence.from_degrees([2, 4, 8, 15])
    b = bounds_from_sequence(seq)
    assert [(x.kind, x.n) for x in b.entries] == [("submult", 1), ("submult", 2)]
    with pytest.raises(ValueError):
        bounds_from_sequence([])


def _roots_oracle(n):
    coeffs = [1, -2] + [0] * (n - 2) + [1]
    roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=200)
    return max(mpmath.re(r) for r in roots if abs(mpmath.im(r)) < 1e-30)


@pytest.mark.parametrize("n,value", [(3, "1.618033988749895"), (4, "1.839286755214161"), (5, "1.927561975482925")])
def test_largest_real_root_values(n, value):
    lo, hi = largest_real_root(n, Fraction(1, 10**12))
    assert hi - lo <= Fraction(1, 10**12)
    assert lo <= Fraction(value) + Fraction(1, 10**12) and Fraction(value) - Fraction(1, 10**12) <= hi
    assert abs(mpmath.mpf(lo.numerator) / lo.denominator - _roots_oracle(n)) < 1e-11


@given(st.integers(3, 40))
def test_root_bracket_properties(n):
    # the root lies within about n 4^-n of the right end, so the width must scale with n
    lo, hi = largest_real_root(n, Fraction(1, 4 ** (n + 2)))
    assert root_bracket_check(n, lo, hi)
    assert 2 - Fraction(2, 3) ** (n - 1) < lo and hi < 2 - Fraction(1, 2) ** (n - 1)


def test_root_edge_case():
    assert largest_real_root(2) == (1, 1)
    with pytest.raises(ValueError):
        largest_real_root(1)


def test_growth_classification():
    assert classify_growth([2**n for n in range(1, 11)]).kind == "exponential"
    assert classify_growth(list(range(2, 12))).kind == "linear"
    assert classify_growth([n * n + 1 for n in range(1, 11)]).kind == "quadratic"
    assert classify_growth([2] * 8).kind == "bounded"
    g = classify_growth([2, 4, 8, 15, 28, 52, 96, 177])
    assert g.kind == "exponential" and g.heuristic and 1.8 < g.estimate < 1.9
    with pytest.raises(ValueError):
        classify_growth([2, 4, 8])
