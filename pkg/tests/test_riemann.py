from fractions import Fraction

import pytest

import oracle
from conftest import to_dict
from g2lab.coeffs import Poly, RatFuncT
from g2lab.evolution import contact_group_frame
from g2lab.forms import UnsupportedMetricError, e
from g2lab.frames import UnsupportedFrameError, extend_interval, parse_structure_equations
from g2lab.registry import EXAMPLES
from g2lab.riemann import (cartan_connection, curvature, is_flat, koszul_connection, ricci, ricci_from_curvature,
                           scalar_curvature)

HEIS = parse_structure_equations("(0,0,12)")
half = Fraction(1, 2)


def test_heisenberg_connection():
    G = koszul_connection(HEIS)
    assert G(1, 2, 3) == -half and G(2, 1, 3) == half
    assert G(1, 3, 2) == half and G(3, 1, 2) == half


def test_heisenberg_ricci():
    assert ricci(HEIS) == [[-half, 0, 0], [0, -half, 0], [0, 0, half]]
    assert scalar_curvature(HEIS) == -half


def test_contact_group_ricci_symbolic():
    a = Poly.var("a")
    ric = ricci(contact_group_frame())
    for i in range(7):
        for j in range(7):
            expected = a * a / 2 if i == j and i in (0, 3, 5) else 0
            assert ric[i][j] == expected


@pytest.mark.parametrize("name", ["nakamura", "dbt-family", "m-beta", "nil-000-12-13-23"])
def test_ricci_matches_oracle(name):
    fx = EXAMPLES[name].fixture()
    fr = fx.bound({p: 3 for p in fx.params}).frame
    if not fr.orthonormal:
        fr = parse_structure_equations(str(fr))
    assert ricci(fr) == oracle.ricci([to_dict(t) for t in fr.table])


@pytest.mark.parametrize("text", ["(0,0,12)", "(0,12-45,-13+46,0,15-24,-16+34,0)", "(0,0,0,-13,-23,0,0)"])
def test_two_curvature_paths_agree(text):
    fr = parse_structure_equations(text)
    theta = cartan_connection(fr)
    assert not any(theta.structure_residual())
    G = koszul_connection(fr)
    n = fr.n
    # theta^k_j(e_i) = <nabla_{e_i} e_j, e_k>
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                assert theta[(k, j)].coefficient((i,)) == G(i, j, k)
    assert ricci_from_curvature(curvature(theta), n) == ricci(fr)


def test_flat_frames():
    assert is_flat(parse_structure_equations("(0,0,0)"))
    assert not is_flat(HEIS)
    # E(3) is flat: d e^1 = 0, d e^2 = e^13, d e^3 = -e^12
    assert is_flat(parse_structure_equations("(0,13,-12)"))


def test_t_dependent_flatness():
    t = RatFuncT.t()
    fr = extend_interval(parse_structure_equations("(0,0)"), [1 + t, 1 + t])
    # dt^2 + (1+t)^2 (dx^2 + dy^2) is a cone over a flat torus, not flat
    assert not is_flat(fr)
    assert is_flat(extend_interval(parse_structure_equations("(0,0)"), [1 + t, RatFuncT.const(1)]))


def test_orthonormal_required():
    fr = parse_structure_equations("(0,0,12)", orthonormal=False)
    with pytest.raises(UnsupportedMetricError):
        koszul_connection(fr)
    with pytest.raises(UnsupportedMetricError):
        cartan_connection(fr)


def test_koszul_needs_constant_frame():
    t = RatFuncT.t()
    fr = extend_interval(parse_structure_equations("(0,0)"), [1 + t, 1 + t])
    with pytest.raises(UnsupportedFrameError):
        koszul_connection(fr)
