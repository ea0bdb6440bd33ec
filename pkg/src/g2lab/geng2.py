"""Generalized G2 structure forms on 7-manifolds built from SU(3) data.

The even and odd structure forms come in a one-parameter family indexed by
the angle between the two defining spinors; angles are given as a rational
point ``(c, s)`` on the unit circle so everything stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from .coeffs import as_coeff, is_zero, normalize
from .forms import Form, e, wedge
from .frames import Frame, d_twisted, differential, extend_product_circle
from .linalg import FormSystem, InconsistentSystem
from .report import Check, VerificationReport
from .su3 import SU3Structure, w2plus_analysis

__all__ = [
    "GenG2Form",
    "AngleError",
    "product_structure",
    "build_structure_forms",
    "check_strong",
    "check_weak",
    "weak_component_system",
    "WeakHResult",
    "solve_weak_H",
    "StrongProductResult",
    "strong_product_analysis",
    "split_along",
    "relaxed_closed_analysis",
]


class AngleError(ValueError):
    pass


@dataclass(frozen=True)
class GenG2Form:
    frame: Frame
    parity: str  # "even" or "odd"
    rho: Form
    rho_hat: Form
    alpha: Form
    structure: SU3Structure
    angle: Tuple[Fraction, Fraction] = (Fraction(0), Fraction(1))


def product_structure(s6: SU3Structure) -> SU3Structure:
    """Lift a 6-dimensional structure to ``N x S^1`` with ``eta = dt = e^7``."""
    if s6.n != 6:
        raise ValueError("expected a 6-dimensional SU(3)-structure")
    frame = extend_product_circle(s6.frame)
    return SU3Structure(frame, s6.omega.embed(7), s6.psi_plus.embed(7), s6.psi_minus.embed(7), e(7, 7))


def build_structure_forms(alpha: Form, s: SU3Structure, angle=(0, 1)) -> Tuple[GenG2Form, GenG2Form]:
    """Even and odd structure forms at angle ``(cos, sin)``.

    ``angle = (0, 1)`` gives the pair used throughout: even form
    ``omega + psi+ ^ alpha - omega^3/6`` and odd form
    ``alpha - psi- - omega^2 ^ alpha / 2``.  Each returned form carries the
    other as its companion.
    """
    c, sn = (normalize(as_coeff(x)) for x in angle)
    if not is_zero(c * c + sn * sn - 1):
        raise AngleError(f"angle ({c}, {sn}) is not on the unit circle")
    if s.n == 6:
        s = product_structure(s)
    if s.n != 7:
        raise ValueError("structure forms live on a 7-dimensional frame")
    if alpha.n != 7 or alpha.degrees() - {1}:
        raise ValueError("alpha must be a 1-form on the 7-frame")
    om, pp, pm = s.omega, s.psi_plus, s.psi_minus
    om2 = om ** 2
    vol = e(7, "1234567")
    even = (c * Form.scalar(7, 1) + sn * om - c * (wedge(pm, alpha) + Fraction(1, 2) * om2)
            + sn * wedge(pp, alpha) - sn * Fraction(1, 6) * om ** 3)
    odd = (sn * alpha - c * (pp + wedge(om, alpha)) - sn * pm
           - Fraction(1, 2) * sn * wedge(om2, alpha) + c * vol)
    ang = (c, sn)
    return (GenG2Form(s.frame, "even", even, odd, alpha, s, ang),
            GenG2Form(s.frame, "odd", odd, even, alpha, s, ang))


def check_strong(frame: Frame, g: GenG2Form, H: Form) -> VerificationReport:
    rep = VerificationReport(frame.name or "strong")
    rep.add(Check("d_H rho = 0", "strong integrability", d_twisted(frame, H, g.rho)))
    rep.add(Check("d_H rho^ = 0", "strong integrability", d_twisted(frame, H, g.rho_hat)))
    return rep


def check_weak(frame: Frame, g: GenG2Form, H: Form, lam) -> VerificationReport:
    """``d_H rho = lambda rho^``; with ``lambda = 0`` this is the strong test."""
    lam = normalize(as_coeff(lam))
    if is_zero(lam):
        return check_strong(frame, g, H)
    rep = VerificationReport(frame.name or "weak")
    rep.add(Check("d_H rho - lambda rho^ = 0", "weak integrability",
                  d_twisted(frame, H, g.rho) - lam * g.rho_hat))
    return rep


def weak_component_system(s: SU3Structure, H: Form, lam) -> VerificationReport:
    """Component form of the weak condition for the odd form with ``alpha = eta``."""
    if s.eta is None:
        raise ValueError("weak component system needs eta")
    lam = normalize(as_coeff(lam))
    d = s.frame.d
    rep = VerificationReport(s.frame.name or "weak components")
    rep.add(Check("d eta = lambda omega", "weak equations", d(s.eta) - lam * s.omega))
    rep.add(Check("d psi- = (H - lambda psi+) ^ eta", "weak equations",
                  d(s.psi_minus) - wedge(H - lam * s.psi_plus, s.eta)))
    rep.add(Check("H ^ psi- = -1/3 lambda omega^3", "weak equations",
                  wedge(H, s.psi_minus) + Fraction(1, 3) * lam * s.omega ** 3))
    return rep


@dataclass
class WeakHResult:
    feasible: bool
    particular: Optional[Form] = None
    directions: List[Form] = field(default_factory=list)
    witness: Optional[str] = None
    residual: object = None
    system: Optional[FormSystem] = field(default=None, repr=False)

    def admits(self, H: Form) -> bool:
        """True when ``H`` satisfies every equation of the solved system."""
        if self.system is None:
            return False
        return not any(self.system.residuals({"H": H}).values())


def solve_weak_H(s: SU3Structure, lam, require_closed: bool = False) -> WeakHResult:
    """All 3-forms ``H`` solving the weak component equations, as an affine set."""
    if s.eta is None or s.n != 7:
        raise ValueError("weak H solve needs a 7-dimensional structure with eta")
    lam = normalize(as_coeff(lam))
    free = set(s.frame.variables())
    for f in (s.omega, s.psi_plus, s.psi_minus, s.eta):
        free |= f.variables()
    if not isinstance(lam, Fraction):
        free |= lam.variables()
    if free:
        raise ValueError(f"bind parameters {sorted(free)} before solving for H")
    d = s.frame.d
    om, pp, pm, eta = s.omega, s.psi_plus, s.psi_minus, s.eta
    zero = Form(7)
    sys_ = FormSystem(7).unknown("H", 3)
    sys_.equation("d eta = lambda omega", lambda u: zero, lam * om - d(eta))
    sys_.equation("d psi- = (H - lambda psi+) ^ eta", lambda u: wedge(u["H"], eta),
                  d(pm) + lam * wedge(pp, eta))
    sys_.equation("H ^ psi- = -1/3 lambda omega^3", lambda u: wedge(u["H"], pm),
                  -Fraction(1, 3) * lam * om ** 3)
    if require_closed:
        sys_.equation("dH = 0", lambda u: d(u["H"]))
    try:
        sol = sys_.solve()
    except InconsistentSystem as exc:
        return WeakHResult(False, witness=exc.label, residual=exc.residual, system=sys_)
    return WeakHResult(True, sol.particular["H"], [v["H"] for v in sol.nullspace], system=sys_)


@dataclass
class StrongProductResult:
    ok: bool
    H: Optional[Form]
    obstruction: Optional[str] = None
    residual: object = None
    report: Optional[VerificationReport] = None
    frame: Optional[Frame] = None
    form: Optional[GenG2Form] = None
    dH: Optional[Form] = None  # H is closed iff pi2 is


_OBSTRUCTION = {
    "d omega = 0": "d omega = 0",
    "d psi- = 0": "d psi- = H ^ alpha",
}


def strong_product_analysis(s6: SU3Structure) -> StrongProductResult:
    """Strongly integrable even form on ``N x S^1``: exists iff ``N`` is W2+.

    On success ``H = pi2 ^ alpha`` and the report certifies both twisted
    equations and records whether ``H`` is closed.
    """
    w = w2plus_analysis(s6)
    if not w.member:
        name = _OBSTRUCTION.get(w.obstruction, "d(psi+ ^ alpha) = -H ^ omega")
        return StrongProductResult(False, None, name, w.residual)
    s7 = product_structure(s6)
    alpha = e(7, 7)
    even, _ = build_structure_forms(alpha, s7)
    H = wedge(w.pi2.embed(7), alpha)
    rep = check_strong(s7.frame, even, H)
    rep.add(Check("H ^ psi+ ^ alpha = 0", "strong equations", wedge(wedge(H, s7.psi_plus), alpha)))
    rep.add(Check("H ^ psi- = 0", "strong equations", wedge(H, s7.psi_minus)))
    return StrongProductResult(True, H, report=rep, frame=s7.frame, form=even,
                               dH=differential(s7.frame, H))


def split_along(H: Form, k: int) -> Tuple[Form, Form]:
    """``H = H~ + S ^ e^k`` with neither ``H~`` nor ``S`` containing ``e^k``."""
    n = H.n
    tilde, s_terms = {}, {}
    for idx, c in H.items():
        if k in idx:
            pos = idx.index(k)
            sign = -1 if (len(idx) - 1 - pos) % 2 else 1
            s_terms[idx[:pos] + idx[pos + 1:]] = sign * c
        else:
            tilde[idx] = c
    return Form(n, tilde), Form(n, s_terms)


def relaxed_closed_analysis(s6: SU3Structure, H: Form) -> VerificationReport:
    """Closed ``H`` with only ``d_H rho = 0`` imposed (the companion is dropped)."""
    if H.degrees() - {3}:
        raise ValueError("H must be a 3-form")
    s7 = product_structure(s6)
    frame = s7.frame
    alpha = e(7, 7)
    even, _ = build_structure_forms(alpha, s7)
    tilde, S = split_along(H, 7)
    d = frame.d
    om, pp = s7.omega, s7.psi_plus
    rep = VerificationReport(s6.frame.name or "relaxed")
    rep.add(Check("dH = 0", "closed twisting form", d(H)))
    rep.add(Check("d_H rho = 0", "twisted closedness of rho", d_twisted(frame, H, even.rho)))
    rep.add(Check("d omega = 0", "relaxed equations", d(om)))
    rep.add(Check("d psi+ = -S ^ omega", "relaxed equations", d(pp) + wedge(S, om)))
    rep.add(Check("H~ ^ psi+ = 0", "relaxed equations", wedge(tilde, pp)))
    rep.add(Check("H~ ^ omega = 0", "relaxed equations", wedge(tilde, om)))
    rep.add(Check("dS = 0", "relaxed equations", d(S)))
    rep.add(Check("dH~ = 0", "relaxed equations", d(tilde)))
    return rep
