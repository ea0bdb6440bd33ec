"""Acceptance criteria, one check per criterion.

Run under pytest (a summary section lists one PASS/FAIL line per criterion)
or directly with ``python tests/test_acceptance.py``.
"""

import os
import sys
from fractions import Fraction

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

import test_properties as props  # noqa: E402
from conftest import ACCEPTANCE_LINES, load_registry_frames, registry_six_dim  # noqa: E402
from g2lab.coeffs import Poly, RatFuncT  # noqa: E402
from g2lab.evolution import (contact_group_frame, evolution_residuals, expected_connection_table,  # noqa: E402
                             integrate_rk4, evolved_family)
from g2lab.forms import Form, box_companion, e, hodge_star, wedge  # noqa: E402
from g2lab.frames import d_twisted, extend_interval, extend_product_circle  # noqa: E402
from g2lab.geng2 import build_structure_forms, check_strong, strong_product_analysis  # noqa: E402
from g2lab.grammar import parse_form  # noqa: E402
from g2lab.registry import EXAMPLES  # noqa: E402
from g2lab.riemann import cartan_connection, curvature, ricci  # noqa: E402
from g2lab.su3 import SU3Structure, check_hypo7, lift_su4, norm_squared, w2plus_analysis  # noqa: E402

a = Poly.var("a")
mu = Poly.var("mu")

RHO = parse_form("7-136-145-235+246-12347-12567-34567", 7)
RHO_HAT = parse_form("12+34+56+1357-1467-2367-2457-123456", 7)


def _mbeta():
    frame = contact_group_frame()
    return frame, SU3Structure.standard(frame)


def c1_weak_integrability():
    frame, s = _mbeta()
    _, odd = build_structure_forms(s.eta, s)
    assert odd.rho == RHO
    H = -a * e(7, "146")
    res = d_twisted(frame, H, RHO) - (-a / 2) * RHO_HAT
    return not res, f"residual {res if res else 0}"


def c2_coclosed():
    frame, _ = _mbeta()
    res = frame.d(hodge_star(frame, -a * e(7, "146")))
    return not res, f"d*H = {res if res else 0}"


def c3_ricci():
    frame, _ = _mbeta()
    ric = ricci(frame)
    bad = [(i + 1, j + 1) for i in range(7) for j in range(7)
           if ric[i][j] != (a * a / 2 if i == j and i in (0, 3, 5) else 0)]
    return not bad, "diag(a^2/2 at 1,4,6)" if not bad else f"mismatch at {bad}"


def c4_hypo():
    _, s = _mbeta()
    rep = check_hypo7(s)
    return rep.passed, ", ".join(f"{c.name}: {c.status}" for c in rep.checks)


def c5_strong_on_dbt():
    fx = EXAMPLES["dbt-family"].fixture()
    s6 = fx.su3()
    r = strong_product_analysis(s6)
    printed = mu ** 2 * e(6, "25") - (mu - 1) ** 2 * e(6, "36") - e(6, "14")
    pi2 = w2plus_analysis(s6).pi2
    strong = r.ok and r.report.passed
    matches = pi2 == printed
    d_pi2 = bool(s6.d(pi2)) if pi2 is not None else False
    parts = {"strong in Q[mu]": strong, "pi2 = printed": matches, "d pi2 != 0": d_pi2, "dH != 0": bool(r.dH)}
    detail = ", ".join(f"{k}: {'yes' if v else 'NO'}" for k, v in parts.items())
    if not matches:
        detail += f" (computed pi2 = {pi2})"
    return all(parts.values()), detail


EXPECTED_STRONG = {
    "torus6": None, "dbt-family": None, "hypersurface-nil7": None, "nakamura": None, "hyperkahler-t4t2": None,
    "nil-0000-12-13": "d omega = 0", "nil-000-12-13-23": "d omega = 0", "example-0025": "d psi- = H ^ alpha",
}


def c6_biconditional():
    bad = []
    structures = registry_six_dim()
    if set(structures) != set(EXPECTED_STRONG):
        return False, f"registry 6-dim fixtures {sorted(structures)}"
    for name, s6 in structures.items():
        r = strong_product_analysis(s6)
        want = EXPECTED_STRONG[name]
        ok = (r.ok and r.report.passed) if want is None else (not r.ok and r.obstruction == want)
        if not ok:
            bad.append(name)
    return not bad, f"{len(structures)} fixtures" + (f", wrong: {bad}" if bad else "")


def c7_volume_identity():
    bad, count = [], 0
    for name, s6 in registry_six_dim().items():
        w = w2plus_analysis(s6)
        if not w.member:
            continue
        dpi2 = s6.d(w.pi2)
        if not dpi2 and w.pi2:
            bad.append(f"{name}: closed nonzero pi2")
        if s6.frame.orthonormal:
            count += 1
            vol = Fraction(1, 6) * s6.omega ** 3
            if wedge(w.pi2, s6.d(s6.psi_plus)) != norm_squared(w.pi2) * vol:
                bad.append(f"{name}: volume identity")
    return not bad, f"{count} orthonormal W2+ fixtures" + (f", failing {bad}" if bad else "")


def c8_final_example():
    fx = EXAMPLES["example-0025"].fixture()
    s7 = extend_product_circle(fx.frame)
    st = SU3Structure(s7, fx.su3().omega.embed(7), fx.su3().psi_plus.embed(7), fx.su3().psi_minus.embed(7), e(7, 7))
    even, _ = build_structure_forms(e(7, 7), st)
    H = fx.forms["H"]
    free = H.variables()
    res = d_twisted(s7, H, even.rho)
    dH = s7.d(H)
    return not res and not dH and len(free) == 8, f"d_H rho = {res if res else 0}, dH = {dH if dH else 0}"


def c9_companion():
    frame, _ = _mbeta()
    first = box_companion(frame, RHO)
    second = box_companion(frame, first)
    ok = first == RHO_HAT and second == RHO
    return ok, "*sigma(rho) = printed rho^, double companion = +id" if ok else f"*sigma(rho) = {first}"


def c10_evolution():
    tr = integrate_rk4(2.0, 1.0, 1e-3)
    eu, ev = tr.max_errors()
    fam = evolved_family(2)
    sym = evolution_residuals(fam).passed
    frame8, om_t, pp_t, pm_t = lift_su4(fam.structure(), extend_interval(fam.frame))
    closed = not (frame8.d(om_t) or frame8.d(pp_t) or frame8.d(pm_t))
    ok = eu <= 1e-8 and ev <= 1e-10 and sym and closed
    return ok, f"max err u {eu:.2e}, v {ev:.2e}; residuals {'0' if sym else 'nonzero'}; lift closed: {closed}"


def c11_flat_lift():
    fam = evolved_family(2)
    theta = cartan_connection(extend_interval(fam.frame, fam.orthonormal_scales()))
    got = {k: v for k, v in theta.nonzero().items() if k[0] < k[1]}
    table_ok = got == expected_connection_table(2)
    flat = not any(f for row in curvature(theta) for f in row)
    return table_ok and flat, (f"{len(got)} connection forms match the table: {table_ok}; curvature zero: {flat}"
                               " (coframe scales u,v,v,u,v,u,v^-3)")


PROPERTY_SUITES = [
    ("d^2 = 0", props.test_d_squared_vanishes, True),
    ("Leibniz", props.test_leibniz, True),
    ("graded commutativity", props.test_graded_commutativity, False),
    ("** sign law", props.test_hodge_double_star_sign, False),
    ("sigma involution", props.test_sigma_involution, False),
    ("torsion reconstruction", props.test_torsion_reconstruction, False),
    ("Lefschetz injectivity", props.test_lefschetz_injective, False),
]


def c12_property_suites(min_cases=50):
    frames = load_registry_frames()
    failed = []
    for name, fn, needs_frames in PROPERTY_SUITES:
        props.CASES[name] = 0
        runner = settings(max_examples=60, database=None)(fn)
        try:
            runner(frames) if needs_frames else runner()
        except Exception as exc:  # noqa: BLE001
            failed.append(f"{name} ({type(exc).__name__})")
            continue
        if props.CASES[name] < min_cases:
            failed.append(f"{name} ({props.CASES[name]} cases)")
    counts = ", ".join(f"{n} {props.CASES[n]}" for n, _, _ in PROPERTY_SUITES)
    return not failed, counts + (f"; failing: {failed}" if failed else "")


CRITERIA = [
    (1, "weak integrability on the contact group", c1_weak_integrability),
    (2, "H is co-closed", c2_coclosed),
    (3, "Ricci tensor of the contact group", c3_ricci),
    (4, "hypo system on the contact group", c4_hypo),
    (5, "strong product structure on the W2+ family", c5_strong_on_dbt),
    (6, "strong product exists iff W2+", c6_biconditional),
    (7, "closed pi2 volume identity", c7_volume_identity),
    (8, "closed H on (0,0,0,0,0,25)", c8_final_example),
    (9, "companion sign convention", c9_companion),
    (10, "evolution: RK4, symbolic residuals, closed lift", c10_evolution),
    (11, "flat SU(4) lift: connection table and curvature", c11_flat_lift),
    (12, "property suites (>= 50 cases each)", c12_property_suites),
]


def _line(num, title, ok, detail):
    return f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"


@pytest.mark.acceptance
@pytest.mark.parametrize("num,title,fn", CRITERIA, ids=[f"criterion-{n}" for n, _, _ in CRITERIA])
def test_criterion(num, title, fn):
    try:
        ok, detail = fn()
    except Exception as exc:  # noqa: BLE001
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    line = _line(num, title, ok, detail)
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


if __name__ == "__main__":
    results = []
    for num, title, fn in CRITERIA:
        ok, detail = fn()
        results.append(ok)
        print(_line(num, title, ok, detail))
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
