import os
import sys
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from g2lab.forms import Form  # noqa: E402

settings.register_profile("exact", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("exact")

small_fractions = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4))


@st.composite
def forms(draw, n, degrees=None, max_terms=5):
    """Sparse random forms with small rational coefficients."""
    degs = degrees if degrees is not None else list(range(n + 1))
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        p = draw(st.sampled_from(list(degs)))
        idx = tuple(sorted(draw(st.permutations(range(1, n + 1)))[:p]))
        terms[idx] = draw(small_fractions)
    return Form(n, terms)


def to_dict(f: Form):
    return {I: c for I, c in f.items()}


def from_dict(n, d):
    return Form(n, dict(d))


def load_registry_frames():
    from g2lab.registry import EXAMPLES
    out = {}
    for k in ("m-beta", "nakamura", "dbt-family", "hypersurface-nil7", "nil-000-12-13-23", "example-0025"):
        fx = EXAMPLES[k].fixture()
        binds = {p: Fraction(2) for p in fx.params}
        if k == "example-0025":
            binds = {p: Fraction(i + 1, 3) for i, p in enumerate(sorted(fx.params))}
        out[k] = fx.bound(binds)
    return out


@pytest.fixture(scope="session")
def registry_frames():
    return load_registry_frames()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


ALL_INDEX_SETS = {n: [I for p in range(n + 1) for I in combinations(range(1, n + 1), p)] for n in (6, 7, 8)}


def registry_six_dim():
    """Every 6-dimensional SU(3)-structure in the registry, hypersurfaces induced."""
    from g2lab.registry import EXAMPLES
    from g2lab.su3 import G2StructureForm, induce_hypersurface
    out = {}
    for name, ex in sorted(EXAMPLES.items()):
        fx = ex.fixture()
        if fx.frame.n == 6:
            out[name] = fx.su3()
        elif "phi" in fx.forms and name != "torus7":
            out[name] = induce_hypersurface(G2StructureForm(fx.frame, fx.forms["phi"]), int(fx.options["normal"]))
    return out
