"""Exact linear systems whose unknowns are the coefficients of forms.

Systems with rational-constant matrices are row reduced here directly; the
right-hand sides may be polynomials or rational functions of ``t`` since
elimination only ever scales them by rationals.  Matrices with parametric
entries are handed to sympy's sparse domain matrices over the fraction
field of the parameters, and the answer converted back to polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Sequence, Tuple

from .coeffs import Poly, RatFuncT, normalize
from .forms import Form, basis

__all__ = [
    "InconsistentSystem",
    "NonPolynomialSolution",
    "LinearSolution",
    "solve_linear",
    "FormSystem",
    "FormSolution",
]


class InconsistentSystem(ValueError):
    """Raised when ``A x = b`` has no solution; ``label`` names the failing row."""

    def __init__(self, label, residual):
        self.label = label
        self.residual = residual
        super().__init__(f"inconsistent linear system at {label}: residual {residual}")


class NonPolynomialSolution(ValueError):
    pass


@dataclass
class LinearSolution:
    particular: List[object]
    nullspace: List[List[object]]


def _is_constant_entry(v) -> bool:
    return isinstance(v, (int, Fraction)) or (isinstance(v, Poly) and v.is_constant())


def solve_linear(rows: Sequence[Mapping[int, object]], rhs: Sequence[object], ncols: int,
                 labels: Sequence[object] | None = None) -> LinearSolution:
    """Solve ``rows @ x = rhs``; ``rows`` are sparse ``{column: entry}`` maps."""
    labels = list(labels) if labels is not None else list(range(len(rows)))
    if all(_is_constant_entry(v) for r in rows for v in r.values()):
        return _solve_rational(rows, rhs, ncols, labels)
    return _solve_parametric(rows, rhs, ncols, labels)


def _solve_rational(rows, rhs, ncols, labels) -> LinearSolution:
    A = [{c: Fraction(normalize(v)) for c, v in r.items() if v} for r in rows]
    b = [normalize(v) for v in rhs]
    pivots: List[Tuple[int, int]] = []  # (row, col)
    used = set()
    for col in range(ncols):
        piv = next((i for i in range(len(A)) if i not in used and A[i].get(col)), None)
        if piv is None:
            continue
        used.add(piv)
        inv = 1 / A[piv][col]
        A[piv] = {c: v * inv for c, v in A[piv].items()}
        b[piv] = normalize(b[piv] * inv)
        prow, pb = A[piv], b[piv]
        for i in range(len(A)):
            if i == piv:
                continue
            f = A[i].get(col)
            if not f:
                continue
            row = A[i]
            for c, v in prow.items():
                nv = row.get(c, Fraction(0)) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
            if pb:
                b[i] = normalize(b[i] - pb * f)
        pivots.append((piv, col))
    for i in range(len(A)):
        if i not in used and b[i]:
            raise InconsistentSystem(labels[i], b[i])
    pivot_cols = {c for _, c in pivots}
    x: List[object] = [Fraction(0)] * ncols
    for r, c in pivots:
        x[c] = b[r]
    null = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        v: List[object] = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for r, c in pivots:
            coef = A[r].get(free)
            if coef:
                v[c] = -coef
        null.append(v)
    return LinearSolution(x, null)


# ----------------------------------------------------------------------
# parametric fallback


def _to_sympy(v, syms):
    import sympy

    v = normalize(v)
    if isinstance(v, Fraction):
        return sympy.Rational(v.numerator, v.denominator)
    if isinstance(v, RatFuncT):
        raise TypeError("parametric matrices with t-dependent entries are not supported")
    out = sympy.Integer(0)
    for mono, c in v.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for name, k in mono:
            term *= syms[name] ** k
        out += term
    return out


def _from_sympy(expr, names) -> object:
    import sympy

    expr = sympy.cancel(sympy.together(expr))
    num, den = sympy.fraction(expr)
    pden = sympy.Poly(den, *[sympy.Symbol(n) for n in names]) if names else None
    if pden is not None and pden.total_degree() > 0:
        raise NonPolynomialSolution(f"solution entry {expr} is not a polynomial")
    den_val = Fraction(str(den))
    if not names:
        return Fraction(str(num)) / den_val
    pnum = sympy.Poly(num, *[sympy.Symbol(n) for n in names])
    terms = {}
    for powers, c in pnum.terms():
        mono = tuple((n, k) for n, k in zip(names, powers) if k)
        terms[mono] = Fraction(str(c)) / den_val
    return normalize(Poly(terms))


def _solve_parametric(rows, rhs, ncols, labels) -> LinearSolution:
    import sympy
    from sympy.polys.matrices import DomainMatrix

    names = set()
    for r in rows:
        for v in r.values():
            if isinstance(v, Poly):
                names |= v.variables()
    for v in rhs:
        if isinstance(v, Poly):
            names |= v.variables()
    names = sorted(names)
    syms = {n: sympy.Symbol(n) for n in names}
    K = sympy.QQ.frac_field(*syms.values())
    m = len(rows)
    data = [[K.zero] * (ncols + 1) for _ in range(m)]
    for i, r in enumerate(rows):
        for c, v in r.items():
            data[i][c] = K.from_sympy(_to_sympy(v, syms))
        data[i][ncols] = K.from_sympy(_to_sympy(rhs[i], syms))
    M = DomainMatrix(data, (m, ncols + 1), K)
    R, pivots = M.rref()
    R = R.to_Matrix()
    if ncols in pivots:
        raise InconsistentSystem(None, "inconsistent over the parameter fraction field")
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = _from_sympy(R[i, ncols], names)
    null = []
    pivot_set = set(pivots)
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [sympy.Integer(0)] * ncols
        vec[free] = sympy.Integer(1)
        for i, c in enumerate(pivots):
            vec[c] = -R[i, free]
        den = sympy.lcm([sympy.fraction(sympy.cancel(v))[1] for v in vec])
        null.append([_from_sympy(sympy.expand(v * den), names) for v in vec])
    return LinearSolution(x, null)


# ----------------------------------------------------------------------
# systems in form coefficients


@dataclass
class FormSolution:
    particular: Dict[str, Form]
    nullspace: List[Dict[str, Form]] = field(default_factory=list)

    @property
    def unique(self) -> bool:
        return not self.nullspace


class FormSystem:
    """Linear equations ``L(unknowns) = rhs`` with unknown forms.

    Each unknown is declared by name and degree; each equation is a linear
    map from the dictionary of unknown forms to a form, plus a target.
    """

    def __init__(self, n: int):
        self.n = n
        self.unknowns: List[Tuple[str, int]] = []
        self.equations: List[Tuple[str, Callable[[Dict[str, Form]], Form], Form]] = []

    def unknown(self, name: str, degree: int) -> "FormSystem":
        self.unknowns.append((name, degree))
        return self

    def equation(self, label: str, fn: Callable[[Dict[str, Form]], Form], rhs: Form | None = None) -> "FormSystem":
        self.equations.append((label, fn, rhs if rhs is not None else Form(self.n)))
        return self

    def _columns(self):
        cols = []
        for name, p in self.unknowns:
            for idx in basis(self.n, p):
                cols.append((name, idx))
        return cols

    def _zero(self):
        return {name: Form(self.n) for name, _ in self.unknowns}

    def assemble(self):
        cols = self._columns()
        images = []
        for name, idx in cols:
            args = self._zero()
            args[name] = Form(self.n, {idx: 1})
            images.append([fn(args) for _, fn, _ in self.equations])
        rows, rhs, labels = [], [], []
        for k, (label, _, target) in enumerate(self.equations):
            keys = set(target)
            for img in images:
                keys |= set(img[k])
            for key in sorted(keys, key=lambda t: (len(t), t)):
                row = {}
                for c, img in enumerate(images):
                    v = img[k][key]
                    if v:
                        row[c] = v
                rows.append(row)
                rhs.append(target[key])
                labels.append(label)
        return cols, rows, rhs, labels

    def solve(self) -> FormSolution:
        """Solve the system.

        On inconsistency the raised error names the first equation (in
        declaration order) whose addition makes the system unsolvable.
        """
        cols, rows, rhs, labels = self.assemble()
        try:
            sol = solve_linear(rows, rhs, len(cols), labels)
        except InconsistentSystem as exc:
            raise self._witness(cols, rows, rhs, labels) from exc
        return FormSolution(self._pack(cols, sol.particular), [self._pack(cols, v) for v in sol.nullspace])

    def _witness(self, cols, rows, rhs, labels) -> InconsistentSystem:
        order = []
        for label, _, _ in self.equations:
            if label not in order:
                order.append(label)
        for k in range(1, len(order) + 1):
            keep = set(order[:k])
            sel = [i for i, lab in enumerate(labels) if lab in keep]
            try:
                solve_linear([rows[i] for i in sel], [rhs[i] for i in sel], len(cols), [labels[i] for i in sel])
            except InconsistentSystem as exc:
                return InconsistentSystem(order[k - 1], exc.residual)
        return InconsistentSystem(None, "unlocated")

    def _pack(self, cols, vec) -> Dict[str, Form]:
        acc: Dict[str, Dict] = {name: {} for name, _ in self.unknowns}
        for (name, idx), v in zip(cols, vec):
            if v:
                acc[name][idx] = v
        return {name: Form(self.n, t) for name, t in acc.items()}

    def residuals(self, values: Mapping[str, Form]) -> Dict[str, Form]:
        """Evaluate every equation at ``values`` (independent of the solver)."""
        args = self._zero()
        args.update(values)
        out = {}
        for label, fn, target in self.equations:
            r = fn(args) - target
            out[label] = out[label] + r if label in out else r
        return out
