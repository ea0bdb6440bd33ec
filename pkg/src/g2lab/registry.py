"""Built-in example structures and the verification suite attached to each.

A fixture is written in a small text format::

    (0,0,0,12,13,23)
    [options]
    orthonormal = false
    [params]
    mu = symbolic
    [forms]
    omega = 16+mu*25+mu*34-34
    ...

The first non-comment line is the structure-equation table.  ``[params]``
lists free parameters, either ``symbolic`` or a default rational value.
``[forms]`` may give ``omega``, ``psi+``, ``psi-``, ``eta``, ``phi`` (a G2
3-form), ``H`` and ``rho``/``rho^`` verbatim; absent SU(3) forms default to
the standard ones.  A form may use index ``n + 1`` to live on ``N x S^1``.  ``[options]`` holds flags such as ``orthonormal`` and
``normal`` (hypersurface normal index).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional

from .coeffs import Poly, parse_rational
from .forms import Form, box_companion, e, hodge_star, wedge
from .frames import Frame, is_unimodular, parse_structure_equations, validate_frame
from .geng2 import (build_structure_forms, check_weak, product_structure, relaxed_closed_analysis,
                    solve_weak_H, strong_product_analysis, weak_component_system)
from .grammar import GrammarError, parse_form
from .report import ASSERT, NONZERO, Check, VerificationReport
from .riemann import ricci, scalar_curvature
from .su3 import (G2StructureForm, SU3Structure, check_hypo7, induce_hypersurface, norm_squared,
                  scalar_curvature_W2plus, torsion_decompose, validate_su3, w2plus_analysis)

__all__ = [
    "FixtureError",
    "FixtureData",
    "parse_fixture",
    "Example",
    "EXAMPLES",
    "list_examples",
    "get_example",
    "run_suite",
    "run_all",
]


class FixtureError(ValueError):
    pass


@dataclass
class FixtureData:
    frame: Frame
    forms: Dict[str, Form] = field(default_factory=dict)
    params: Dict[str, Optional[Fraction]] = field(default_factory=dict)
    options: Dict[str, str] = field(default_factory=dict)

    def bound(self, bindings: Mapping[str, object]) -> "FixtureData":
        """Substitute explicit bindings, then defaults; symbolic params stay free."""
        unknown = set(bindings) - set(self.params)
        if unknown:
            raise FixtureError(f"unknown parameter(s) {sorted(unknown)}; known: {sorted(self.params) or 'none'}")
        values = {k: v for k, v in self.params.items() if v is not None}
        values.update({k: parse_rational(v) if isinstance(v, str) else Fraction(v) for k, v in bindings.items()})
        if not values:
            return self
        return FixtureData(self.frame.subs(values), {k: f.subs(values) for k, f in self.forms.items()},
                           {k: values.get(k, v) for k, v in self.params.items()}, dict(self.options))

    def su3(self) -> SU3Structure:
        n = self.frame.n
        base = SU3Structure.standard(self.frame)
        return SU3Structure(self.frame, self.forms.get("omega", base.omega), self.forms.get("psi+", base.psi_plus),
                            self.forms.get("psi-", base.psi_minus), self.forms.get("eta", base.eta if n == 7 else None))


def _parse_fixture_form(text: str, n: int) -> Form:
    # forms on N x S^1 may use the extra index n + 1
    try:
        return parse_form(text, n)
    except GrammarError:
        return parse_form(text, n + 1)


def parse_fixture(text: str, name: str = "") -> FixtureData:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise FixtureError("empty fixture")
    table, rest = lines[0], lines[1:]
    section = None
    raw: Dict[str, Dict[str, str]] = {"params": {}, "forms": {}, "options": {}}
    for ln in rest:
        if ln.startswith("[") and ln.endswith("]"):
            section = ln[1:-1].strip().lower()
            if section not in raw:
                raise FixtureError(f"unknown section [{section}]")
            continue
        if section is None or "=" not in ln:
            raise FixtureError(f"expected 'key = value' inside a section, got {ln!r}")
        key, val = (x.strip() for x in ln.split("=", 1))
        raw[section][key] = val
    orth = raw["options"].get("orthonormal", "true").lower() not in ("false", "no", "0")
    try:
        frame = parse_structure_equations(table, orthonormal=orth, name=name)
        n = frame.n
        forms = {k: _parse_fixture_form(v, n) for k, v in raw["forms"].items()}
    except GrammarError as exc:
        raise FixtureError(str(exc)) from exc
    params = {k: (None if v.lower() == "symbolic" else parse_rational(v)) for k, v in raw["params"].items()}
    return FixtureData(frame, forms, params, raw["options"])


# ----------------------------------------------------------------------
# shared check groups


def _w2plus_group(rep: VerificationReport, s: SU3Structure, expect: bool, anchor: str):
    w = w2plus_analysis(s)
    if expect:
        rep.add(Check("class W2+", anchor, None, kind=ASSERT, ok=w.member,
                      note="" if w.member else f"obstruction: {w.obstruction}"))
    else:
        rep.add(Check("not class W2+", anchor, w.residual, kind=ASSERT, ok=not w.member,
                      note=f"obstruction: {w.obstruction}" if w.obstruction else "unexpectedly W2+"))
    return w


def _strong_group(rep: VerificationReport, s6: SU3Structure, expect: bool, obstruction: str = ""):
    r = strong_product_analysis(s6)
    anchor = "strong structure on N x S1"
    if expect:
        rep.add(Check("strong product exists", anchor, None, kind=ASSERT, ok=r.ok,
                      note="" if r.ok else f"obstruction: {r.obstruction}"))
        if r.ok:
            rep.extend(r.report, prefix="H = pi2 ^ alpha: ")
    else:
        rep.add(Check("no strong product", anchor, r.residual, kind=ASSERT,
                      ok=(not r.ok) and (not obstruction or r.obstruction == obstruction),
                      note=f"obstruction: {r.obstruction}"))
    return r


def _volume_identity(rep: VerificationReport, s: SU3Structure, pi2: Form):
    """``pi2 ^ d psi+ = |pi2|^2 vol`` with ``vol = omega^3 / 6``."""
    vol = Fraction(1, 6) * s.omega ** 3
    rep.add(Check("pi2 ^ d psi+ = |pi2|^2 vol", "closed pi2 forces integrability",
                  wedge(pi2, s.d(s.psi_plus)) - norm_squared(pi2) * vol))


def _closed_pi2_group(rep: VerificationReport, s: SU3Structure, pi2: Form):
    dpi2 = s.d(pi2)
    if pi2:
        rep.add(Check("d pi2 != 0", "closed pi2 forces integrability", dpi2, kind=NONZERO))
    else:
        rep.add(Check("pi2 = 0 and d pi2 = 0", "closed pi2 forces integrability", dpi2))


# ----------------------------------------------------------------------
# suites


def _suite_m_beta(fx: FixtureData, rep: VerificationReport):
    frame = fx.frame
    s = fx.su3()
    a = Poly.var("a").subs({k: v for k, v in fx.params.items() if v is not None})
    rep.extend(validate_frame(frame))
    rep.add(Check("unimodular", "unimodular Lie algebra", None, kind=ASSERT, ok=is_unimodular(frame)))
    rep.extend(validate_su3(s))
    even, odd = build_structure_forms(s.eta, s)
    rho, rho_hat = fx.forms["rho"], fx.forms["rho^"]
    rep.add(Check("rho = odd structure form", "odd structure form", rho - odd.rho))
    rep.add(Check("*sigma(rho) = printed companion", "companion of the odd form", box_companion(frame, rho) - rho_hat))
    H = fx.forms["H"]
    lam = Fraction(-1, 2) * a
    rep.extend(check_weak(frame, odd, H, lam))
    rep.extend(weak_component_system(s, H, lam))
    rep.add(Check("dH = 0", "closed twisting form", frame.d(H)))
    rep.add(Check("d*H = 0", "H is co-closed", frame.d(hodge_star(frame, H))))
    rep.extend(check_hypo7(s))
    ric = ricci(frame)
    expected = [[(Fraction(1, 2) * a * a if (i == j and i in (0, 3, 5)) else 0) for j in range(7)] for i in range(7)]
    diff = [ric[i][j] - expected[i][j] for i in range(7) for j in range(7)]
    rep.add(Check("Ricci = a^2/2 diag(1,0,0,1,0,1,0)", "Ricci tensor of the invariant metric", diff))


def _suite_torus6(fx, rep):
    s = fx.su3()
    rep.extend(validate_su3(s))
    tc = torsion_decompose(s)
    rep.add(Check("all torsion components vanish", "intrinsic torsion", list(tc.as_dict().values())))
    w = _w2plus_group(rep, s, True, "flat torus")
    rep.add(Check("pi2 = 0", "flat torus", w.pi2))
    _strong_group(rep, s, True)


def _suite_torus7(fx, rep):
    phi = fx.forms["phi"]
    rep.add(Check("d phi = 0", "calibrated G2-structure", fx.frame.d(phi)))
    s = induce_hypersurface(G2StructureForm(fx.frame, phi), int(fx.options.get("normal", 7)))
    rep.extend(validate_su3(s))
    tc = torsion_decompose(s)
    rep.add(Check("induced structure integrable", "hypersurface of a flat torus", list(tc.as_dict().values())))
    rep.extend(check_hypo7(fx.su3()))


def _suite_nil_standard(fx, rep):
    s = fx.su3()
    rep.extend(validate_frame(fx.frame))
    rep.extend(validate_su3(s))
    tc = torsion_decompose(s)
    d_om, d_pp, d_pm = tc.reconstruct(s)
    rep.add(Check("torsion reconstructs d omega, d psi+, d psi-", "intrinsic torsion",
                  [d_om - s.d(s.omega), d_pp - s.d(s.psi_plus), d_pm - s.d(s.psi_minus)]))
    if "d omega" in fx.forms:
        rep.add(Check("d omega as expected", "hand expansion", s.d(s.omega) - fx.forms["d omega"]))
    rep.add(Check("torsion classes " + ",".join(tc.nonzero()), "intrinsic torsion", None, kind=ASSERT,
                  ok=set(tc.nonzero()) == set(fx.options["components"].split(","))))
    _w2plus_group(rep, s, False, "standard forms are not W2+")
    _strong_group(rep, s, False, fx.options.get("obstruction", ""))
    hypo = check_hypo7(product_structure(s))
    rep.add(Check("x S1 not hypo", "hypo system", [c.residual for c in hypo.failures()], kind=NONZERO))


def _suite_dbt(fx, rep):
    s = fx.su3()
    om, pp, pm = s.omega, s.psi_plus, s.psi_minus
    anchor = "W2+ family on the T3-bundle over T3"
    rep.extend(validate_frame(fx.frame))
    rep.add(Check("omega ^ psi+ = 0", anchor, wedge(om, pp)))
    rep.add(Check("omega ^ psi- = 0", anchor, wedge(om, pm)))
    rep.add(Check("psi+ ^ psi- = 1/3 omega^3", anchor, wedge(pp, pm) - Fraction(1, 3) * om ** 3,
                  note="printed psi has half the unit normalization; the W2+ equations are invariant under "
                       "constant rescaling of psi"))
    rep.add(Check("omega^3 != 0", anchor, om ** 3, kind=NONZERO))
    w = _w2plus_group(rep, s, True, anchor)
    printed = fx.forms["pi2 printed"]
    rep.add(Check("printed pi2 does not solve d psi+ = -pi2 ^ omega", anchor, s.d(pp) + wedge(printed, om),
                  kind=NONZERO, note=f"solution: {w.pi2}"))
    if w.member:
        rep.add(Check("pi2 ^ psi+ = pi2 ^ psi- = pi2 ^ omega^2 = 0", anchor,
                      [wedge(w.pi2, pp), wedge(w.pi2, pm), wedge(w.pi2, om ** 2)]))
        _closed_pi2_group(rep, s, w.pi2)
    r = _strong_group(rep, s, True)
    if r.ok:
        rep.add(Check("dH != 0", "H is not closed", r.dH, kind=NONZERO))


def _suite_hypersurface(fx, rep):
    frame, phi = fx.frame, fx.forms["phi"]
    k = int(fx.options["normal"])
    rep.extend(validate_frame(frame))
    rep.add(Check("d phi = 0", "calibrated G2-structure", frame.d(phi)))
    s = induce_hypersurface(G2StructureForm(frame, phi), k)
    rep.extend(validate_su3(s), prefix="induced: ")
    w = _w2plus_group(rep, s, True, "hypersurface in a calibrated G2-manifold")
    if not w.member:
        return
    if s.frame.orthonormal:
        tc = torsion_decompose(s)
        rep.add(Check("only pi2 nonzero", "hypersurface in a calibrated G2-manifold", None, kind=ASSERT,
                      ok=set(tc.nonzero()) <= {"pi2"} and tc.pi2 == w.pi2))
        _volume_identity(rep, s, w.pi2)
        scal_formula = scalar_curvature_W2plus(s, w.pi2)
        rep.add(Check("scal = -|pi2|^2/2 = trace Ric", "scalar curvature of W2+ metrics",
                      scal_formula - scalar_curvature(s.frame)))
    _closed_pi2_group(rep, s, w.pi2)
    _strong_group(rep, s, True)


def _suite_hyperkahler(fx, rep):
    s = fx.su3()
    rep.extend(validate_su3(s))
    rep.add(Check("d omega = d psi+ = d psi- = 0", "hyper-Kahler times T2",
                  [s.d(s.omega), s.d(s.psi_plus), s.d(s.psi_minus)]))
    w = _w2plus_group(rep, s, True, "hyper-Kahler times T2")
    rep.add(Check("pi2 = 0", "hyper-Kahler times T2", w.pi2))
    _strong_group(rep, s, True)


def _suite_example_0025(fx, rep):
    s = fx.su3()
    rep.extend(validate_su3(s))
    rep.extend(relaxed_closed_analysis(s, fx.forms["H"]))
    tc = torsion_decompose(s)
    rep.add(Check("nu0 = alpha0 = nu1 = nu3 = 0", "relaxed closed system",
                  [tc.nu0, tc.alpha0, tc.nu1, tc.nu3]))
    _w2plus_group(rep, s, False, "relaxed closed system")
    _strong_group(rep, s, False, "d psi- = H ^ alpha")


def _suite_flat_lift(fx, rep):
    from .evolution import verify_flat_lift

    a = fx.params.get("a")
    if a is None:
        raise FixtureError("flat-su4-lift needs a rational value for a")
    rep.extend(verify_flat_lift(a))


def _suite_contact_torus(fx, rep):
    s = fx.su3()
    rep.add(Check("d psi+ = d psi- = 0", "closed psi on a contact manifold", [s.d(s.psi_plus), s.d(s.psi_minus)]))
    rep.add(Check("d eta = omega", "contact form", s.d(s.eta) - s.omega))
    res = solve_weak_H(s, 1, require_closed=True)
    rep.add(Check("no closed H solves the weak equations", "closed psi admits no twisting form", res.residual,
                  kind=ASSERT, ok=(not res.feasible) and res.witness == "H ^ psi- = -1/3 lambda omega^3",
                  note=f"first failing equation: {res.witness}"))


# ----------------------------------------------------------------------
# fixture table


@dataclass(frozen=True)
class Example:
    id: str
    anchor: str
    text: str
    suite: Callable[[FixtureData, VerificationReport], None]

    def fixture(self) -> FixtureData:
        return parse_fixture(self.text, self.id)


_MBETA = """
(a*46, -1/2*a*36-1/2*a*45+1/2*a*17, -1/2*a*15+1/2*a*26-1/2*a*47, -a*16, 1/2*a*13-1/2*a*24-1/2*a*67, a*14, -1/2*a*12-1/2*a*34-1/2*a*56)
[params]
a = symbolic
[forms]
rho = 7-136-145-235+246-12347-12567-34567
rho^ = 12+34+56+1357-1467-2367-2457-123456
H = -a*146
"""

_DBT = """
(0,0,0,12,13,23)
[options]
orthonormal = false
[params]
mu = symbolic
[forms]
omega = 16+mu*25+mu*34-34
psi+ = 124-mu*124+mu*135-mu^2*456+mu*456-236
psi- = -mu*145+mu^2*145+mu*246-246+mu*356+123
pi2 printed = mu^2*25-mu^2*36+2*mu*36-36-14
"""

_HK = """
(0,0,0,0,0,0)
[forms]
omega = 12+34+56
psi+ = 135-245-146-236
psi- = 136-246+145+235
"""

_E0025 = """
(0,0,0,0,0,25)
[params]
a1 = symbolic
a2 = symbolic
a3 = symbolic
a4 = symbolic
a5 = symbolic
a6 = symbolic
a7 = symbolic
a8 = symbolic
[forms]
H = -457+a1*124-a1*456+a2*125-a2*345-a3*134+a3*156+a4*135+a5*145-a5*235+a6*145+a6*246+a7*234-a7*256+a8*245
"""

EXAMPLES: Dict[str, Example] = {ex.id: ex for ex in [
    Example("m-beta", "compact quotient of SU(2) x H with a weak structure", _MBETA, _suite_m_beta),
    Example("torus6", "flat torus, standard forms", "(0,0,0,0,0,0)", _suite_torus6),
    Example("torus7", "flat 7-torus, standard G2 form",
            "(0,0,0,0,0,0,0)\n[forms]\nphi = 127+347+567+135-146-236-245\n[options]\nnormal = 7",
            _suite_torus7),
    Example("nil-0000-12-13", "T2-bundle over T4 with standard forms",
            "(0,0,0,0,12,13)\n[forms]\nd omega = 126-135\n[options]\ncomponents = nu0,nu1,sigma2,nu3\n"
            "obstruction = d omega = 0", _suite_nil_standard),
    Example("nil-000-12-13-23", "T3-bundle over T3 with standard forms",
            "(0,0,0,12,13,23)\n[options]\ncomponents = nu1,nu3\nobstruction = d omega = 0", _suite_nil_standard),
    Example("dbt-family", "W2+ family on the T3-bundle over T3", _DBT, _suite_dbt),
    Example("hypersurface-nil7", "hypersurface of the nilmanifold (0,0,0,-13,-23,0,0)",
            "(0,0,0,-13,-23,0,0)\n[forms]\nphi = 123+146+157+247-256+345-367\n[options]\nnormal = 6",
            _suite_hypersurface),
    Example("nakamura", "hypersurface of the Nakamura solvmanifold times S1",
            "(0,12-45,-13+46,0,15-24,-16+34,0)\n[forms]\nphi = 147+357-267+136+125+234-456\n[options]\nnormal = 7",
            _suite_hypersurface),
    Example("hyperkahler-t4t2", "hyper-Kahler T4 times T2", _HK, _suite_hyperkahler),
    Example("example-0025", "closed H with only d_H rho = 0 on (0,0,0,0,0,25)", _E0025, _suite_example_0025),
    Example("flat-su4-lift", "evolved family with a flat SU(4) metric",
            _MBETA.split("[params]")[0] + "[params]\na = 2", _suite_flat_lift),
    Example("contact-torus", "contact structure with closed psi",
            "(0,0,0,0,0,0,12+34+56)", _suite_contact_torus),
]}


def list_examples() -> List[tuple]:
    return [(k, EXAMPLES[k].anchor) for k in sorted(EXAMPLES)]


def get_example(example_id: str) -> Example:
    try:
        return EXAMPLES[example_id]
    except KeyError:
        raise KeyError(f"unknown example {example_id!r}; known: {', '.join(sorted(EXAMPLES))}") from None


def run_suite(example_id: str, bindings: Optional[Mapping[str, object]] = None) -> VerificationReport:
    ex = get_example(example_id)
    fx = ex.fixture().bound(bindings or {})
    rep = VerificationReport(ex.id, {k: v for k, v in fx.params.items() if v is not None})
    ex.suite(fx, rep)
    return rep


def run_all(bindings: Optional[Mapping[str, object]] = None) -> List[VerificationReport]:
    """Every suite in id order; bindings apply to fixtures that declare them."""
    out = []
    for ex_id, _ in list_examples():
        params = EXAMPLES[ex_id].fixture().params
        out.append(run_suite(ex_id, {k: v for k, v in (bindings or {}).items() if k in params}))
    return out
