"""One-parameter families of SU(3)-structures on the contact Lie group and
the evolution that lifts them to a flat SU(4)-metric on ``M x interval``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .coeffs import RatFuncT, as_coeff, normalize
from .forms import Form, e, wedge
from .frames import Frame, differential, extend_interval, parse_structure_equations
from .report import ASSERT, Check, VerificationReport
from .riemann import cartan_connection, curvature
from .su3 import SU3Structure, lift_su4

__all__ = [
    "CONTACT_GROUP_TABLE",
    "contact_group_frame",
    "EvolutionFamily",
    "evolved_family",
    "evolution_residuals",
    "ode_rhs",
    "Trajectory",
    "IntegrationError",
    "integrate_rk4",
    "verify_flat_lift",
    "expected_connection_table",
]

CONTACT_GROUP_TABLE = (
    "(a*46, -1/2*a*36-1/2*a*45+1/2*a*17, -1/2*a*15+1/2*a*26-1/2*a*47, -a*16,"
    " 1/2*a*13-1/2*a*24-1/2*a*67, a*14, -1/2*a*12-1/2*a*34-1/2*a*56)"
)


def contact_group_frame(a=None) -> Frame:
    """The unimodular ``su(2) + R^4`` Lie algebra, symbolic in ``a`` unless bound."""
    f = parse_structure_equations(CONTACT_GROUP_TABLE, name="m-beta")
    return f if a is None else f.subs({"a": a})


def _as_t(x) -> RatFuncT:
    if isinstance(x, RatFuncT):
        return x
    c = normalize(as_coeff(x))
    if not isinstance(c, Fraction):
        raise TypeError(f"expected a rational or a function of t, got {x!r}")
    return RatFuncT.const(c)


@dataclass(frozen=True)
class EvolutionFamily:
    """``omega = uv w0``, ``psi+ = uv^2(e135-e236-e245) - u^3 e146``,
    ``psi- = u^2 v(e136+e145-e246) + v^3 e235``, ``eta = v^-3 e7``."""

    frame: Frame
    u: RatFuncT
    v: RatFuncT
    a: Fraction

    @property
    def omega(self) -> Form:
        return (self.u * self.v) * (e(7, "12") + e(7, "34") + e(7, "56"))

    @property
    def psi_plus(self) -> Form:
        u, v = self.u, self.v
        return (u * v * v) * (e(7, "135") - e(7, "236") - e(7, "245")) - (u * u * u) * e(7, "146")

    @property
    def psi_minus(self) -> Form:
        u, v = self.u, self.v
        return (u * u * v) * (e(7, "136") + e(7, "145") - e(7, "246")) + (v * v * v) * e(7, "235")

    @property
    def eta(self) -> Form:
        return (self.v ** -3) * e(7, 7)

    def structure(self) -> SU3Structure:
        return SU3Structure(self.frame, self.omega, self.psi_plus, self.psi_minus, self.eta)

    def at(self, t0) -> SU3Structure:
        """The structure on the slice ``t = t0`` (exact for rational ``t0``)."""
        t0 = Fraction(t0)
        ev = lambda f: f.map_coeffs(lambda c: c(t0) if isinstance(c, RatFuncT) else c)
        return SU3Structure(self.frame, ev(self.omega), ev(self.psi_plus), ev(self.psi_minus), ev(self.eta))

    def orthonormal_scales(self):
        """``E^i = f_i e^i`` making the evolved forms standard."""
        u, v = self.u, self.v
        return [u, v, v, u, v, u, v ** -3]


def evolved_family(a=2, u=None, v=None) -> EvolutionFamily:
    """Family on the contact group; defaults to ``u = 1 + a t/2, v = 1``."""
    a = Fraction(a)
    t = RatFuncT.t()
    u = _as_t(u) if u is not None else 1 + (a / 2) * t
    v = _as_t(v) if v is not None else RatFuncT.const(1)
    return EvolutionFamily(contact_group_frame(a), u, v, a)


def _dt(f: Form) -> Form:
    return f.map_coeffs(lambda c: c.derivative() if isinstance(c, RatFuncT) else 0)


def evolution_residuals(fam: EvolutionFamily) -> VerificationReport:
    d = lambda x: differential(fam.frame, x, spatial=True)
    om, pp, pm, eta = fam.omega, fam.psi_plus, fam.psi_minus, fam.eta
    rep = VerificationReport("evolution", {"a": fam.a})
    rep.add(Check("dt omega + d eta = 0", "evolution equations", _dt(om) + d(eta)))
    rep.add(Check("dt(psi+ ^ eta) - d psi- = 0", "evolution equations", _dt(wedge(pp, eta)) - d(pm)))
    rep.add(Check("dt(psi- ^ eta) + d psi+ = 0", "evolution equations", _dt(wedge(pm, eta)) + d(pp)))
    return rep


def ode_rhs(u: float, v: float, a: float):
    """Right-hand side of the reduced flow for ``(u, v)``."""
    if u == 0 or v == 0:
        raise ZeroDivisionError("u and v must be non-zero")
    return _kernels._rhs(float(u), float(v), float(a))


class IntegrationError(RuntimeError):
    pass


@dataclass
class Trajectory:
    a: float
    step: float
    t: np.ndarray
    u: np.ndarray
    v: np.ndarray
    backend: str = _kernels.BACKEND

    @property
    def u_exact(self) -> np.ndarray:
        return 1.0 + 0.5 * self.a * self.t

    @property
    def v_exact(self) -> np.ndarray:
        return np.ones_like(self.t)

    @property
    def err_u(self) -> np.ndarray:
        return np.abs(self.u - self.u_exact)

    @property
    def err_v(self) -> np.ndarray:
        return np.abs(self.v - self.v_exact)

    def max_errors(self):
        return float(self.err_u.max()), float(self.err_v.max())

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "u", "v", "u_exact", "v_exact", "err_u", "err_v"])
            for row in zip(self.t, self.u, self.v, self.u_exact, self.v_exact, self.err_u, self.err_v):
                w.writerow([repr(float(x)) for x in row])


def integrate_rk4(a: float, t_end: float = 1.0, step: float = 1e-3, backend: Optional[str] = None,
                  initial=(1.0, 1.0)) -> Trajectory:
    """Classical RK4 from ``(u, v)(0) = initial``.

    Uses ``ceil(t_end/step)`` equal steps, so ``step`` is an upper bound.
    The exact-solution columns refer to the default start ``(1, 1)``.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if t_end < 0:
        raise ValueError("t_end must be non-negative")
    nsteps = int(math.ceil(t_end / step - 1e-9)) if t_end > 0 else 0
    h = t_end / nsteps if nsteps else step
    t, u, v, status, where = _kernels.rk4_trajectory(a, h, nsteps, backend, *initial)
    if status == _kernels.NONFINITE:
        raise IntegrationError(f"non-finite state at t = {t[where]:.6g} (step {where})")
    if status == _kernels.DOMAIN:
        raise IntegrationError(
            f"u or v left (0, inf) at t = {t[where]:.6g}: u = {u[where]:.6g}, v = {v[where]:.6g}")
    return Trajectory(float(a), h, t, u, v, backend or _kernels.BACKEND)


def expected_connection_table(a) -> dict:
    """Non-zero connection forms ``theta^i_j`` (i < j) on the flat coframe."""
    a = Fraction(a)
    c = a / (2 + a * RatFuncT.t())
    E = lambda k: e(8, k)
    out = {}
    for (i, j), sign in (((1, 4), 1), ((2, 3), -1), ((5, 7), 1), ((6, 8), 1)):
        out[(i, j)] = sign * c * E(6)
    for (i, j), sign in (((1, 6), -1), ((2, 5), 1), ((3, 7), 1), ((4, 8), 1)):
        out[(i, j)] = sign * c * E(4)
    for (i, j), sign in (((1, 8), 1), ((2, 7), -1), ((3, 5), 1), ((4, 6), 1)):
        out[(i, j)] = sign * c * E(1)
    return out


def verify_flat_lift(a=2, scales: Sequence | None = None) -> VerificationReport:
    """Evolved family, SU(4) lift closure, and flatness of the product metric.

    ``scales`` overrides the coframe ``E^i = f_i(t) e^i``; by default the
    orthonormal coframe of the evolved forms is used.
    """
    fam = evolved_family(a)
    rep = VerificationReport("flat-su4-lift", {"a": fam.a})
    rep.extend(evolution_residuals(fam))
    rep.extend(_hypo_along_family(fam), prefix="slice: ")
    frame8 = extend_interval(fam.frame)
    _, om_t, pp_t, pm_t = lift_su4(fam.structure(), frame8)
    rep.add(Check("d omega~ = 0", "SU(4) lift", frame8.d(om_t)))
    rep.add(Check("d psi~+ = 0", "SU(4) lift", frame8.d(pp_t)))
    rep.add(Check("d psi~- = 0", "SU(4) lift", frame8.d(pm_t)))
    fs = list(scales) if scales is not None else fam.orthonormal_scales()
    coframe = extend_interval(fam.frame, fs)
    theta = cartan_connection(coframe)
    rep.add(Check("d E + theta ^ E = 0", "first structure equation", theta.structure_residual()))
    if scales is None:
        expected = expected_connection_table(fam.a)
        got = {k: v for k, v in theta.nonzero().items() if k[0] < k[1]}
        diff = [f"theta^{i}_{j}: {got.get((i, j), Form(8))} vs {expected.get((i, j), Form(8))}"
                for (i, j) in sorted(set(got) | set(expected)) if got.get((i, j), Form(8)) != expected.get((i, j), Form(8))]
        rep.add(Check("connection forms match table", "flat coframe connection", None, kind=ASSERT,
                      ok=not diff, note="; ".join(diff)))
    omega = curvature(theta)
    nonzero = [f"Omega^{i + 1}_{j + 1}" for i, row in enumerate(omega) for j, f in enumerate(row) if f and i < j]
    rep.add(Check("curvature Omega = 0", "flatness", [f for row in omega for f in row],
                  note=(", ".join(nonzero[:6]) + (" ..." if len(nonzero) > 6 else "")) if nonzero else ""))
    return rep


def _hypo_along_family(fam: EvolutionFamily) -> VerificationReport:
    """Hypo system on every slice, exact in t (spatial differential)."""
    d = lambda x: differential(fam.frame, x, spatial=True)
    rep = VerificationReport("hypo")
    rep.add(Check("d omega = 0", "hypo system", d(fam.omega)))
    rep.add(Check("d(psi+ ^ eta) = 0", "hypo system", d(wedge(fam.psi_plus, fam.eta))))
    rep.add(Check("d(psi- ^ eta) = 0", "hypo system", d(wedge(fam.psi_minus, fam.eta))))
    return rep
