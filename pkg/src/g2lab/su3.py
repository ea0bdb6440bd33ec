"""SU(3)-structures in dimension 6 and 7: compatibility, intrinsic torsion,
the class W2+, hypo conditions, hypersurfaces of G2-structures and the
SU(4) lift to ``M x interval``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .coeffs import Coefficient
from .forms import Form, UnsupportedMetricError, contract, e, hodge_star, wedge
from .frames import Frame, differential, extend_interval
from .linalg import FormSystem, InconsistentSystem, NonPolynomialSolution
from .report import NONZERO, Check, VerificationReport

__all__ = [
    "SU3Structure",
    "G2StructureForm",
    "TorsionComponents",
    "TorsionDecompositionError",
    "PreconditionError",
    "standard_forms",
    "validate_su3",
    "torsion_decompose",
    "w2plus_analysis",
    "is_class_W2plus",
    "scalar_curvature_W2plus",
    "norm_squared",
    "check_hypo7",
    "induce_hypersurface",
    "lift_su4",
    "j_one_form",
    "g2_orientation",
]


class TorsionDecompositionError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


def standard_forms(n: int) -> Tuple[Form, Form, Form]:
    """``omega = e12+e34+e56`` and ``psi = (e1+ie2)(e3+ie4)(e5+ie6)``."""
    omega = e(n, "12") + e(n, "34") + e(n, "56")
    psi_plus = e(n, "135") - e(n, "146") - e(n, "236") - e(n, "245")
    psi_minus = e(n, "136") + e(n, "145") + e(n, "235") - e(n, "246")
    return omega, psi_plus, psi_minus


@dataclass(frozen=True)
class SU3Structure:
    frame: Frame
    omega: Form
    psi_plus: Form
    psi_minus: Form
    eta: Optional[Form] = None

    @classmethod
    def standard(cls, frame: Frame) -> "SU3Structure":
        omega, pp, pm = standard_forms(frame.n)
        eta = e(frame.n, 7) if frame.n == 7 else None
        return cls(frame, omega, pp, pm, eta)

    @property
    def n(self) -> int:
        return self.frame.n

    def d(self, x: Form) -> Form:
        return differential(self.frame, x)

    def subs(self, bindings) -> "SU3Structure":
        return SU3Structure(
            self.frame.subs(bindings),
            self.omega.subs(bindings),
            self.psi_plus.subs(bindings),
            self.psi_minus.subs(bindings),
            self.eta.subs(bindings) if self.eta is not None else None,
        )


@dataclass(frozen=True)
class G2StructureForm:
    frame: Frame
    phi: Form


def validate_su3(s: SU3Structure) -> VerificationReport:
    om, pp, pm = s.omega, s.psi_plus, s.psi_minus
    om3 = om ** 3
    rep = VerificationReport(s.frame.name or "su3")
    rep.add(Check("omega ^ psi+ = 0", "SU(3) compatibility", wedge(om, pp)))
    rep.add(Check("omega ^ psi- = 0", "SU(3) compatibility", wedge(om, pm)))
    rep.add(Check("psi+ ^ psi- = 2/3 omega^3", "SU(3) compatibility", wedge(pp, pm) - Fraction(2, 3) * om3))
    rep.add(Check("omega^3 != 0", "SU(3) compatibility", om3, kind=NONZERO))
    if s.n == 7:
        if s.eta is None:
            rep.add(Check("eta present", "SU(3)-structure in dimension 7", None, kind="assert", ok=False))
        else:
            rep.add(Check("eta ^ omega^3 != 0", "SU(3)-structure in dimension 7", wedge(s.eta, om3), kind=NONZERO))
    return rep


def j_one_form(omega: Form, alpha: Form) -> Form:
    """Almost complex structure on 1-forms, ``(J alpha)(X) = alpha(JX)``.

    With ``omega(X, Y) = g(JX, Y)`` on an orthonormal coframe this reads
    ``J e^i = sum_j omega(e_j, e_i) e^j``, so ``J e^1 = -e^2`` for the
    standard ``omega``.
    """
    n = omega.n
    out = Form(n)
    for (i,), c in alpha.part(1).items():
        for j in range(1, n + 1):
            w = omega.coefficient((j, i))
            if w:
                out = out + (c * w) * e(n, j)
    return out


def _w2_constraints(system: FormSystem, name: str, s: SU3Structure):
    om2 = s.omega ** 2
    system.equation(f"{name} ^ psi+ = 0", lambda u: wedge(u[name], s.psi_plus))
    system.equation(f"{name} ^ psi- = 0", lambda u: wedge(u[name], s.psi_minus))
    system.equation(f"{name} ^ omega^2 = 0", lambda u: wedge(u[name], om2))


@dataclass(frozen=True)
class TorsionComponents:
    nu0: Coefficient
    alpha0: Coefficient
    nu1: Form
    pi1: Form
    pi2: Form
    sigma2: Form
    nu3: Form
    convention: str = "j-pi1"

    NAMES = ("nu0", "alpha0", "nu1", "pi1", "pi2", "sigma2", "nu3")

    def as_dict(self) -> Dict[str, object]:
        return {k: getattr(self, k) for k in self.NAMES}

    def nonzero(self) -> Tuple[str, ...]:
        return tuple(k for k, v in self.as_dict().items() if v)

    def reconstruct(self, s: SU3Structure) -> Tuple[Form, Form, Form]:
        """``(d omega, d psi+, d psi-)`` rebuilt from the components."""
        om, pp, pm = s.omega, s.psi_plus, s.psi_minus
        om2 = om ** 2
        d_om = self.nu0 * pp + self.alpha0 * pm + wedge(self.nu1, om) + self.nu3
        d_pp = Fraction(2, 3) * self.alpha0 * om2 + wedge(self.pi1, pp) - wedge(self.pi2, om)
        d_pm = -Fraction(2, 3) * self.nu0 * om2 + _pi1_term(om, pp, pm, self.pi1, self.convention) - wedge(self.sigma2, om)
        return d_om, d_pp, d_pm


def _pi1_term(om, pp, pm, pi1, convention):
    if convention == "j-pi1":
        return wedge(j_one_form(om, pi1), pp)
    if convention == "psi-":
        return wedge(pi1, pm)
    raise ValueError(f"unknown convention {convention!r}")


def torsion_decompose(s: SU3Structure, convention: str = "j-pi1") -> TorsionComponents:
    """Split ``d omega, d psi+, d psi-`` into the seven intrinsic torsion forms.

    ``convention`` selects the W5 term of ``d psi-``: ``"j-pi1"`` uses
    ``J pi1 ^ psi+``, ``"psi-"`` uses ``pi1 ^ psi-``.
    """
    if s.n != 6:
        raise ValueError("torsion decomposition needs a 6-dimensional structure")
    if not s.frame.orthonormal:
        raise UnsupportedMetricError("torsion decomposition needs an orthonormal coframe")
    bad = validate_su3(s).failures()
    if bad:
        raise TorsionDecompositionError(f"not an SU(3)-structure: {', '.join(c.name for c in bad)}")
    om, pp, pm = s.omega, s.psi_plus, s.psi_minus
    om2 = om ** 2
    sys_ = FormSystem(6)
    for name, deg in (("nu0", 0), ("alpha0", 0), ("nu1", 1), ("pi1", 1), ("pi2", 2), ("sigma2", 2), ("nu3", 3)):
        sys_.unknown(name, deg)

    def scal(u, name):
        return u[name][()]

    sys_.equation("d omega", lambda u: scal(u, "nu0") * pp + scal(u, "alpha0") * pm + wedge(u["nu1"], om) + u["nu3"],
                  s.d(om))
    sys_.equation("d psi+", lambda u: Fraction(2, 3) * scal(u, "alpha0") * om2 + wedge(u["pi1"], pp) - wedge(u["pi2"], om),
                  s.d(pp))
    sys_.equation("d psi-", lambda u: -Fraction(2, 3) * scal(u, "nu0") * om2 + _pi1_term(om, pp, pm, u["pi1"], convention)
                  - wedge(u["sigma2"], om), s.d(pm))
    _w2_constraints(sys_, "pi2", s)
    _w2_constraints(sys_, "sigma2", s)
    sys_.equation("nu3 ^ omega = 0", lambda u: wedge(u["nu3"], om))
    sys_.equation("nu3 ^ psi+ = 0", lambda u: wedge(u["nu3"], pp))
    sys_.equation("nu3 ^ psi- = 0", lambda u: wedge(u["nu3"], pm))
    try:
        sol = sys_.solve()
    except (InconsistentSystem, NonPolynomialSolution) as exc:
        raise TorsionDecompositionError(
            f"no torsion decomposition ({exc}); input is not a standard orthonormal SU(3)-structure") from exc
    if not sol.unique:
        raise TorsionDecompositionError("torsion decomposition is not unique; forms are degenerate")
    x = sol.particular
    return TorsionComponents(x["nu0"][()], x["alpha0"][()], x["nu1"], x["pi1"], x["pi2"], x["sigma2"], x["nu3"],
                             convention)


@dataclass
class W2PlusAnalysis:
    """Outcome of testing ``d omega = 0, d psi- = 0, d psi+ = -pi2 ^ omega``."""

    member: bool
    pi2: Optional[Form]
    obstruction: Optional[str] = None
    residual: Optional[Form] = None
    checks: list = field(default_factory=list)


def w2plus_analysis(s: SU3Structure) -> W2PlusAnalysis:
    """Metric-free W2+ test; extracts ``pi2`` from the primitive (1,1) conditions."""
    n = s.n
    d_om = s.d(s.omega)
    d_pm = s.d(s.psi_minus)
    d_pp = s.d(s.psi_plus)
    if d_om:
        return W2PlusAnalysis(False, None, "d omega = 0", d_om)
    if d_pm:
        return W2PlusAnalysis(False, None, "d psi- = 0", d_pm)
    sys_ = FormSystem(n).unknown("gamma", 2)
    sys_.equation("d psi+ = -gamma ^ omega", lambda u: -wedge(u["gamma"], s.omega), d_pp)
    _w2_constraints(sys_, "gamma", s)
    try:
        sol = sys_.solve()
    except InconsistentSystem as exc:
        return W2PlusAnalysis(False, None, str(exc.label), d_pp)
    except NonPolynomialSolution:
        return W2PlusAnalysis(False, None, "d psi+ = -gamma ^ omega (non-polynomial gamma)", d_pp)
    if not sol.unique:
        raise TorsionDecompositionError("primitive (1,1) solution not unique; omega is degenerate")
    gamma = sol.particular["gamma"]
    # independent confirmation of the solver output
    res = sys_.residuals({"gamma": gamma})
    if any(res.values()):
        raise AssertionError(f"solver returned a non-solution: {res}")
    return W2PlusAnalysis(True, gamma)


def is_class_W2plus(s: SU3Structure) -> Tuple[bool, Optional[Form]]:
    a = w2plus_analysis(s)
    return a.member, a.pi2


def norm_squared(f: Form) -> Coefficient:
    """Pointwise norm for an orthonormal coframe: sum of squared coefficients."""
    total = Fraction(0)
    for _, c in f.items():
        total = total + c * c
    return total


def scalar_curvature_W2plus(s: SU3Structure, pi2: Form) -> Coefficient:
    if not s.frame.orthonormal:
        raise UnsupportedMetricError("scalar curvature needs an orthonormal coframe")
    return -Fraction(1, 2) * norm_squared(pi2)


def check_hypo7(s: SU3Structure) -> VerificationReport:
    if s.eta is None:
        raise PreconditionError("hypo system needs the 1-form eta")
    rep = VerificationReport(s.frame.name or "hypo7")
    rep.add(Check("d omega = 0", "hypo system", s.d(s.omega)))
    rep.add(Check("d(psi+ ^ eta) = 0", "hypo system", s.d(wedge(s.psi_plus, s.eta))))
    rep.add(Check("d(psi- ^ eta) = 0", "hypo system", s.d(wedge(s.psi_minus, s.eta))))
    return rep


def _drop_frame_index(frame: Frame, k: int) -> Frame:
    table = tuple(f.drop_index(k) for i, f in enumerate(frame.table, 1) if i != k)
    return Frame(table, frame.orthonormal, None, (frame.name + f" / e{k}") if frame.name else "")


def g2_orientation(phi: Form) -> int:
    """Sign of the volume form a G2 3-form induces, relative to ``e^1..e^n``.

    Uses ``(X -| phi)^2 ^ phi = 6 |X|^2 vol_phi`` on the first basis vector.
    """
    n = phi.n
    a = contract(1, phi)
    top = wedge(wedge(a, a), phi).coefficient(tuple(range(1, n + 1)))
    if not top:
        raise PreconditionError("phi is degenerate (not a G2 3-form)")
    return 1 if top > 0 else -1


def induce_hypersurface(g2: G2StructureForm, k: int) -> SU3Structure:
    """SU(3)-structure on a leaf of ``e^k = 0`` with unit normal ``e_k``.

    ``omega = e_k -| phi``, ``psi+ = e_k -| *phi``, ``psi- = phi`` restricted.
    """
    frame = g2.frame
    phi = g2.phi
    n = frame.n
    if n != 7:
        raise PreconditionError("hypersurface induction needs a 7-dimensional frame")
    if not frame.orthonormal:
        raise UnsupportedMetricError("unit normal needs an orthonormal coframe")
    ek = e(n, k)
    if wedge(differential(frame, ek), ek):
        raise PreconditionError(f"the distribution e^{k} = 0 is not involutive")
    lie = contract(k, differential(frame, phi)) + differential(frame, contract(k, phi))
    if lie:
        raise PreconditionError(f"Lie derivative of phi along e_{k} is {lie}, not zero")
    omega = contract(k, phi).drop_index(k)
    # the Hodge star must use the orientation phi itself induces
    star_phi = g2_orientation(phi) * hodge_star(frame, phi)
    psi_plus = contract(k, star_phi).drop_index(k)
    psi_minus = phi.drop_index(k)
    s = SU3Structure(_drop_frame_index(frame, k), omega, psi_plus, psi_minus)
    rep = validate_su3(s)
    if not rep.passed:
        raise PreconditionError(f"induced forms are not an SU(3)-structure: {[c.name for c in rep.failures()]}")
    return s


def lift_su4(s: SU3Structure, frame8: Frame | None = None) -> Tuple[Frame, Form, Form, Form]:
    """``omega~ = omega + eta ^ dt`` and ``psi~ = psi ^ (eta + i dt)`` on ``M x R``.

    Returns ``(frame8, omega~, psi~+, psi~-)``; by default ``frame8`` is the
    unit-scale interval extension of the base frame.
    """
    if s.eta is None or s.n != 7:
        raise PreconditionError("SU(4) lift needs a 7-dimensional structure with eta")
    if frame8 is None:
        frame8 = extend_interval(s.frame)
    m = frame8.n
    dt = e(m, m)
    om, pp, pm, eta = (x.embed(m) for x in (s.omega, s.psi_plus, s.psi_minus, s.eta))
    omega_t = om + wedge(eta, dt)
    psi_t_plus = wedge(pp, eta) - wedge(pm, dt)
    psi_t_minus = wedge(pm, eta) + wedge(pp, dt)
    return frame8, omega_t, psi_t_plus, psi_t_minus
