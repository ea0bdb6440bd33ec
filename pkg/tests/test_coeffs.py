from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from g2lab.coeffs import Poly, RatFuncT, as_coeff, is_zero, normalize, parse_rational

a, b = Poly.var("a"), Poly.var("b")
small = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))


@st.composite
def polys(draw):
    p = Poly.const(draw(small))
    for _ in range(draw(st.integers(0, 3))):
        p = p + draw(small) * a ** draw(st.integers(0, 2)) * b ** draw(st.integers(0, 2))
    return p


def to_sympy(p: Poly):
    A, B = sympy.symbols("a b")
    return sympy.expand(sympy.sympify(str(p).replace("^", "**"), locals={"a": A, "b": B}))


def test_parse_rational():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    with pytest.raises(ValueError):
        parse_rational("x")


def test_poly_basic():
    p = (a + 1) ** 2 - a * a - 2 * a
    assert p == 1
    assert normalize(p) == Fraction(1)
    assert is_zero((a - b) * (a + b) - a ** 2 + b ** 2)
    assert (a * Fraction(1, 2)).subs({"a": 4}) == 2
    assert a.variables() == {"a"}


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + q == q + p and p * q == q * p
    assert p - p == 0


@given(polys(), polys())
def test_product_matches_sympy(p, q):
    assert sympy.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0


@given(polys())
def test_canonical_form_idempotent(p):
    once = normalize(p)
    assert normalize(once) == once
    assert hash(Poly.const(3)) == hash(Poly.const(3))


def test_ratfunc_reduces():
    t = RatFuncT.t()
    f = (t * t - 1) / (t - 1)
    assert f == t + 1
    assert (1 / (1 + t)).derivative() == -1 / ((1 + t) * (1 + t))
    assert (2 / (2 + 2 * t))(Fraction(1)) == Fraction(1, 2)


def test_ratfunc_zero_division():
    with pytest.raises(ZeroDivisionError):
        RatFuncT.t() / RatFuncT.const(0)


def test_as_coeff_rejects_float():
    with pytest.raises(TypeError):
        as_coeff(0.5)
