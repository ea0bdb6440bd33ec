from fractions import Fraction

import pytest

from g2lab.forms import e
from g2lab.registry import EXAMPLES, FixtureError, get_example, list_examples, parse_fixture, run_all, run_suite

W2PLUS = {"torus6", "dbt-family", "hypersurface-nil7", "nakamura", "hyperkahler-t4t2"}


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_every_suite_passes(name):
    rep = run_suite(name)
    assert rep.passed, rep.to_text()


def test_m_beta_with_binding():
    rep = run_suite("m-beta", {"a": Fraction(2)})
    assert rep.passed and rep.params == {"a": 2}


def test_m_beta_suite_contents():
    names = [c.name for c in run_suite("m-beta").checks]
    for expected in ("d_H rho - lambda rho^ = 0", "d*H = 0", "Ricci = a^2/2 diag(1,0,0,1,0,1,0)",
                     "*sigma(rho) = printed companion", "d(psi- ^ eta) = 0"):
        assert expected in names


def test_dbt_records_printed_pi2_discrepancy():
    rep = run_suite("dbt-family")
    check = rep["printed pi2 does not solve d psi+ = -pi2 ^ omega"]
    assert check.kind == "nonzero" and check.passed


def test_unknown_parameter():
    with pytest.raises(FixtureError):
        run_suite("m-beta", {"b": 1})


def test_unknown_example():
    with pytest.raises(KeyError):
        get_example("nope")


def test_list_examples_sorted():
    ids = [k for k, _ in list_examples()]
    assert ids == sorted(EXAMPLES) and len(ids) == 12


def test_parse_fixture_sections():
    fx = parse_fixture("(0,0,0,12,13,23)\n[options]\northonormal = false\n[params]\nmu = 1/2\n"
                       "[forms]\nomega = mu*16 + 25\n")
    assert not fx.frame.orthonormal
    assert fx.params == {"mu": Fraction(1, 2)}
    bound = fx.bound({})
    assert bound.forms["omega"] == Fraction(1, 2) * e(6, "16") + e(6, "25")


@pytest.mark.parametrize("text", ["", "(0,0)\n[bogus]\nx = 1", "(0,0)\nx = 1", "(0,0,1x)"])
def test_parse_fixture_errors(text):
    with pytest.raises(FixtureError):
        parse_fixture(text)


def test_form_on_product_circle():
    fx = parse_fixture("(0,0)\n[forms]\nH = 123")
    assert fx.forms["H"].n == 3


def test_strong_product_biconditional():
    """A strong product structure exists exactly on the W2+ fixtures."""
    from g2lab.geng2 import strong_product_analysis
    from g2lab.su3 import w2plus_analysis
    from conftest import registry_six_dim
    for name, s6 in registry_six_dim().items():
        r = strong_product_analysis(s6)
        assert r.ok == (name in W2PLUS) == w2plus_analysis(s6).member, name


def test_run_all_covers_registry():
    reports = run_all()
    assert [r.example for r in reports] == sorted(EXAMPLES)
