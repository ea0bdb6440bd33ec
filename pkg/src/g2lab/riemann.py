"""Levi-Civita connection and curvature on orthonormal coframes.

Two independent routes are provided.  ``koszul_connection``/``ricci`` work
with brackets of a Lie algebra frame; ``cartan_connection``/``curvature``
solve the first structure equation for connection 1-forms on any frame,
including t-dependent ones, and ``ricci_from_curvature`` contracts the
resulting curvature 2-forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List

from .coeffs import normalize
from .forms import Form, UnsupportedMetricError, e, wedge
from .frames import Frame, UnsupportedFrameError, differential

__all__ = [
    "ConnectionCoefficients",
    "ConnectionForms",
    "koszul_connection",
    "riemann_tensor",
    "ricci",
    "scalar_curvature",
    "cartan_connection",
    "curvature",
    "ricci_from_curvature",
    "is_flat",
]


def _require_orthonormal(frame: Frame):
    if not frame.orthonormal:
        raise UnsupportedMetricError("needs an orthonormal coframe")


def _bracket_coefficients(frame: Frame):
    """``c[i][j][k] = <[e_i, e_j], e_k>``, read off ``d e^k(e_i, e_j) = -c``."""
    n = frame.n
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for k in range(1, n + 1):
        for (i, j), v in frame.table[k - 1].items():
            c[i - 1][j - 1][k - 1] = -v
            c[j - 1][i - 1][k - 1] = v
    return c


@dataclass(frozen=True)
class ConnectionCoefficients:
    """``gamma[i][j][k] = <nabla_{e_i} e_j, e_k>`` (0-based lists)."""

    gamma: tuple

    def __call__(self, i: int, j: int, k: int):
        return self.gamma[i - 1][j - 1][k - 1]

    @property
    def n(self) -> int:
        return len(self.gamma)


def koszul_connection(frame: Frame) -> ConnectionCoefficients:
    if not frame.is_constant():
        raise UnsupportedFrameError("Koszul coefficients need a Lie algebra frame")
    _require_orthonormal(frame)
    n = frame.n
    c = _bracket_coefficients(frame)
    half = Fraction(1, 2)
    g = tuple(
        tuple(
            tuple(normalize(half * (c[i][j][k] - c[j][k][i] + c[k][i][j])) for k in range(n))
            for j in range(n))
        for i in range(n))
    return ConnectionCoefficients(g)


def riemann_tensor(frame: Frame):
    """``R[i][j][k][m] = <R(e_i, e_j) e_k, e_m>`` with
    ``R(X, Y) = [nabla_X, nabla_Y] - nabla_[X, Y]``."""
    G = koszul_connection(frame).gamma
    c = _bracket_coefficients(frame)
    n = frame.n
    R = [[[[Fraction(0)] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                for m in range(n):
                    acc = Fraction(0)
                    for l in range(n):
                        if G[j][k][l] and G[i][l][m]:
                            acc = acc + G[j][k][l] * G[i][l][m]
                        if G[i][k][l] and G[j][l][m]:
                            acc = acc - G[i][k][l] * G[j][l][m]
                        if c[i][j][l] and G[l][k][m]:
                            acc = acc - c[i][j][l] * G[l][k][m]
                    acc = normalize(acc)
                    R[i][j][k][m] = acc
                    R[j][i][k][m] = -acc
    return R


def ricci(frame: Frame):
    """Ricci tensor ``Ric(e_j, e_k) = sum_i <R(e_i, e_j) e_k, e_i>`` as a matrix."""
    R = riemann_tensor(frame)
    n = frame.n
    out = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        for k in range(n):
            acc = Fraction(0)
            for i in range(n):
                acc = acc + R[i][j][k][i]
            out[j][k] = normalize(acc)
    return out


def scalar_curvature(frame: Frame):
    ric = ricci(frame)
    total = Fraction(0)
    for i in range(frame.n):
        total = total + ric[i][i]
    return normalize(total)


# ----------------------------------------------------------------------
# Cartan structure equations


@dataclass(frozen=True)
class ConnectionForms:
    """Skew matrix of 1-forms with ``d E^i + sum_j theta[i][j] ^ E^j = 0``."""

    theta: tuple
    frame: Frame

    def __getitem__(self, ij) -> Form:
        i, j = ij
        return self.theta[i - 1][j - 1]

    def nonzero(self):
        n = self.frame.n
        return {(i, j): self.theta[i - 1][j - 1] for i in range(1, n + 1) for j in range(1, n + 1)
                if self.theta[i - 1][j - 1]}

    def structure_residual(self) -> List[Form]:
        """``d E^i + theta^i_j ^ E^j`` for each i; all zero for a valid connection."""
        n = self.frame.n
        out = []
        for i in range(n):
            r = self.frame.table[i]
            for j in range(n):
                if self.theta[i][j]:
                    r = r + wedge(self.theta[i][j], e(n, j + 1))
            out.append(r)
        return out


def cartan_connection(frame: Frame) -> ConnectionForms:
    """Levi-Civita connection forms from ``d E^i = sum_{j<k} C^i_jk E^jk``.

    ``theta^i_j = sum_k A_ijk E^k`` with ``A_ijk = (C_ijk + C_jki - C_kij) / 2``.
    """
    _require_orthonormal(frame)
    if frame.t_index is not None and frame.variables():
        raise UnsupportedFrameError(f"bind parameters {sorted(frame.variables())} first")
    n = frame.n

    def C(i, j, k):
        return frame.table[i].coefficient((j + 1, k + 1)) if j != k else 0

    theta = []
    for i in range(n):
        row = []
        for j in range(n):
            terms = {}
            if i != j:
                for k in range(n):
                    v = normalize(Fraction(1, 2) * (C(i, j, k) + C(j, k, i) - C(k, i, j)))
                    if v:
                        terms[(k + 1,)] = v
            row.append(Form(n, terms))
        theta.append(tuple(row))
    return ConnectionForms(tuple(theta), frame)


def curvature(theta: ConnectionForms, frame: Frame | None = None):
    """``Omega^i_j = d theta^i_j + sum_k theta^i_k ^ theta^k_j``."""
    frame = frame or theta.frame
    n = frame.n
    th = theta.theta
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            om = differential(frame, th[i][j])
            for k in range(n):
                if th[i][k] and th[k][j]:
                    om = om + wedge(th[i][k], th[k][j])
            row.append(om)
        out.append(row)
    return out


def ricci_from_curvature(omega_matrix, n: int):
    """``Ric_ab = sum_i Omega^i_b(e_i, e_a)``."""
    out = [[Fraction(0)] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            acc = Fraction(0)
            for i in range(n):
                if i != a:
                    acc = acc + omega_matrix[i][b].coefficient((i + 1, a + 1))
            out[a][b] = normalize(acc)
    return out


def is_flat(frame: Frame) -> bool:
    return not any(f for row in curvature(cartan_connection(frame)) for f in row)
