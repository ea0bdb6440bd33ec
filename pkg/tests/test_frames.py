from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from conftest import forms, to_dict
from g2lab.coeffs import Poly, RatFuncT
from g2lab.evolution import contact_group_frame
from g2lab.forms import e, wedge
from g2lab.frames import (UnsupportedFrameError, d_twisted, differential, extend_interval, extend_product_circle,
                          is_unimodular, parse_structure_equations, validate_frame)
from g2lab.grammar import GrammarError, format_table

a = Poly.var("a")
NAKAMURA = "(0, 12-45, -13+46, 0, 15-24, -16+34, 0)"


def test_parse_salamon():
    f = parse_structure_equations("(0,0,0,12,13,23)")
    assert f.table[3] == e(6, "12") and f.table[4] == e(6, "13") and f.table[5] == e(6, "23")
    assert not any(f.table[:3])


def test_parse_contact_group_coefficients():
    f = contact_group_frame()
    assert f.table[1] == -a / 2 * e(7, "36") - a / 2 * e(7, "45") + a / 2 * e(7, "17")
    assert f.d(e(7, 1)) == a * e(7, "46")
    assert format_table(parse_structure_equations(NAKAMURA).table) == "(0,12-45,-13+46,0,15-24,-16+34,0)"


@pytest.mark.parametrize("text", ["(0,0,12", "(0,0,1x)", "(0,0,14)", "0,0,12)"])
def test_parse_errors(text):
    with pytest.raises(GrammarError):
        parse_structure_equations(text)


def test_validate_frame():
    assert validate_frame(contact_group_frame()).passed
    assert validate_frame(parse_structure_equations(NAKAMURA)).passed
    rep = validate_frame(parse_structure_equations("(0,0,12,34,0,0)"))
    assert [c.name for c in rep.failures()] == ["d^2 e^4 = 0"]
    assert rep.failures()[0].residual == e(6, "124")


def test_unimodular():
    assert is_unimodular(contact_group_frame())
    assert not is_unimodular(parse_structure_equations("(0,12)"))
    assert is_unimodular(parse_structure_equations(NAKAMURA))


def test_differential_spot_values():
    f = contact_group_frame()
    assert f.d(e(7, "12") + e(7, "34") + e(7, "56")) == 0 * e(7, 1)
    assert not f.d(e(7, "14"))


def test_twisted_differential():
    f = contact_group_frame()
    H = -a * e(7, "146")
    x = e(7, "23") + e(7, 5)
    assert d_twisted(f, H, d_twisted(f, H, x)) == wedge(f.d(H), x)
    with pytest.raises(ValueError):
        d_twisted(f, e(7, "12"), x)


def test_product_and_interval_extensions():
    base = parse_structure_equations("(0,0,0,12,13,23)")
    p = extend_product_circle(base)
    assert p.n == 7 and not p.table[6]
    x = e(6, "145") + e(6, "2")
    assert p.d(x.embed(7)) == base.d(x).embed(7)
    unit = extend_interval(base)
    assert unit.n == 7 and unit.t_index == 7
    assert unit.d(x.embed(7)) == base.d(x).embed(7)


def test_interval_scales_differentiate_in_t():
    base = parse_structure_equations("(0,0)")
    t = RatFuncT.t()
    fr = extend_interval(base, [1 + t, RatFuncT.const(1)])
    # E^1 = (1+t) e^1, so d E^1 = dt ^ e^1 = E^{31}/(1+t)
    assert fr.table[0] == (1 / (1 + t)) * e(3, "31")
    with pytest.raises(UnsupportedFrameError):
        differential(base, t * e(2, 1))


@given(st.sampled_from(["m-beta", "nakamura", "dbt-family", "hypersurface-nil7", "nil-000-12-13-23",
                        "example-0025"]), st.data())
def test_differential_matches_chevalley_eilenberg(registry_frames, name, data):
    fr = registry_frames[name].frame
    x = data.draw(forms(fr.n, max_terms=4))
    table = [to_dict(t) for t in fr.table]
    assert to_dict(fr.d(x)) == oracle.d(table, to_dict(x))
