"""Coframes given by differential tables and the exterior derivative on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Tuple

from .coeffs import Poly, RatFuncT, derivative_t
from .forms import DimensionError, Form, e, wedge
from .grammar import format_table, parse_table
from .report import Check, VerificationReport

__all__ = [
    "Frame",
    "UnsupportedFrameError",
    "parse_structure_equations",
    "differential",
    "d_twisted",
    "validate_frame",
    "is_unimodular",
    "extend_product_circle",
    "extend_interval",
]


class UnsupportedFrameError(ValueError):
    pass


@dataclass(frozen=True)
class Frame:
    """Coframe ``e^1..e^n`` with ``d e^i = table[i-1]``.

    ``t_index`` marks the generator ``dt`` of a flow parameter; coefficients
    are then rational functions of ``t`` and ``d`` also differentiates them.
    """

    table: Tuple[Form, ...]
    orthonormal: bool = True
    t_index: Optional[int] = None
    name: str = ""

    def __post_init__(self):
        n = len(self.table)
        for i, f in enumerate(self.table, 1):
            if f.n != n:
                raise DimensionError(f"d e^{i} lives over a {f.n}-frame, expected {n}")
            if f and f.degrees() != {2}:
                raise ValueError(f"d e^{i} must be a 2-form")
        if self.t_index is not None and self.t_index != n:
            raise ValueError("the dt generator must carry the last index")

    @property
    def n(self) -> int:
        return len(self.table)

    def e(self, idx) -> Form:
        return e(self.n, idx)

    def d(self, x: Form) -> Form:
        return differential(self, x)

    def is_constant(self) -> bool:
        """True when the table has no t-dependence (Lie-algebra frame)."""
        return self.t_index is None and not any(isinstance(c, RatFuncT) for f in self.table for _, c in f.items())

    def variables(self) -> set:
        out = set()
        for f in self.table:
            out |= f.variables()
        return out

    def subs(self, bindings: Mapping[str, object]) -> "Frame":
        return Frame(tuple(f.subs(bindings) for f in self.table), self.orthonormal, self.t_index, self.name)

    def structure_constant(self, k: int, i: int, j: int):
        """Coefficient of ``e^{ij}`` in ``d e^k`` (antisymmetric in i, j)."""
        return self.table[k - 1].coefficient((i, j))

    def __str__(self):
        return format_table(self.table)


def parse_structure_equations(text: str, orthonormal: bool = True, name: str = "") -> Frame:
    return Frame(tuple(parse_table(text)), orthonormal=orthonormal, name=name)


def _d_monomial(frame: Frame, idx) -> Form:
    n = frame.n
    out = Form(n)
    for pos, i in enumerate(idx):
        de = frame.table[i - 1]
        if not de:
            continue
        left = e(n, idx[:pos])
        right = e(n, idx[pos + 1:])
        term = wedge(wedge(left, de), right)
        out = out - term if pos % 2 else out + term
    return out


def differential(frame: Frame, x: Form, spatial: bool = False) -> Form:
    """Exterior derivative, extended from the table by the Leibniz rule.

    With ``spatial=True`` coefficients are treated as constants, which is the
    differential of a t-dependent family along a fixed slice.
    """
    if x.n != frame.n:
        raise DimensionError(f"form over {x.n}-frame, differential over {frame.n}-frame")
    n = frame.n
    out = Form(n)
    for idx, c in x.items():
        dm = _d_monomial(frame, idx)
        if dm:
            out = out + c * dm
        if spatial:
            continue
        if frame.t_index is not None:
            dc = derivative_t(c)
            if dc:
                out = out + dc * wedge(e(n, frame.t_index), e(n, idx))
        elif isinstance(c, RatFuncT):
            raise UnsupportedFrameError("t-dependent coefficient on a frame without a dt generator")
    return out


def d_twisted(frame: Frame, H: Form, x: Form) -> Form:
    """Twisted differential ``d x + H ^ x``."""
    if H and any(p % 2 == 0 for p in H.degrees()):
        raise ValueError("twisting form must have odd degree")
    return differential(frame, x) + wedge(H, x)


def validate_frame(frame: Frame) -> VerificationReport:
    rep = VerificationReport(frame.name or str(frame))
    for i in range(1, frame.n + 1):
        rep.add(Check(f"d^2 e^{i} = 0", "Jacobi identity", differential(frame, frame.table[i - 1])))
    return rep


def _require_constant(frame: Frame):
    if not frame.is_constant():
        raise UnsupportedFrameError("operation needs a constant-coefficient (Lie algebra) frame")


def ad_traces(frame: Frame):
    """``tr ad(e_i)`` for each i, with brackets read off the table."""
    _require_constant(frame)
    n = frame.n
    # [e_i, e_j] = -sum_k D^k_ij e_k, so tr ad(e_i) = -sum_j D^j_ij
    out = []
    for i in range(1, n + 1):
        tr = Fraction(0)
        for j in range(1, n + 1):
            if j != i:
                tr = tr - frame.structure_constant(j, i, j)
        out.append(tr)
    return out


def is_unimodular(frame: Frame) -> bool:
    return all(not tr for tr in ad_traces(frame))


def extend_product_circle(frame: Frame) -> Frame:
    """``N x S^1``: append a closed unit generator ``e^{n+1}``."""
    if frame.t_index is not None:
        raise UnsupportedFrameError("cannot extend a t-dependent frame")
    n = frame.n + 1
    table = tuple(f.embed(n) for f in frame.table) + (Form(n),)
    return Frame(table, frame.orthonormal, None, (frame.name + " x S1") if frame.name else "")


def extend_interval(frame: Frame, scales: Sequence[object] | None = None) -> Frame:
    """``M x interval`` with coframe ``E^i = f_i(t) e^i`` and ``E^{n+1} = dt``.

    The base table must be constant with all parameters bound.
    """
    _require_constant(frame)
    if frame.variables():
        raise UnsupportedFrameError(f"bind parameters {sorted(frame.variables())} before adding a t-direction")
    n = frame.n
    m = n + 1
    if scales is None:
        scales = [1] * n
    if len(scales) != n:
        raise ValueError(f"expected {n} scales, got {len(scales)}")
    fs = []
    for s in scales:
        if isinstance(s, Poly):
            s = RatFuncT.const(s.constant_value())
        elif not isinstance(s, RatFuncT):
            s = RatFuncT.const(Fraction(s))
        if not s:
            raise ZeroDivisionError("zero scale in interval extension")
        fs.append(s)
    table = []
    for i in range(1, n + 1):
        fi = fs[i - 1]
        terms = {}
        log_deriv = fi.derivative() / fi
        if log_deriv:
            terms[(i, m)] = -log_deriv  # (f'/f) dt ^ E^i = -(f'/f) E^i ^ dt
        for (j, k), c in frame.table[i - 1].items():
            terms[(j, k)] = c * fi / (fs[j - 1] * fs[k - 1])
        table.append(Form(m, terms))
    table.append(Form(m))
    return Frame(tuple(table), frame.orthonormal, m, (frame.name + " x I") if frame.name else "")
