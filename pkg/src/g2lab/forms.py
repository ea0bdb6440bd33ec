"""Sparse exterior forms over a fixed coframe and the pointwise algebra on them.

A :class:`Form` maps strictly increasing index tuples (frame indices
``1..n``) to exact coefficients.  Mixed degrees are allowed; ``f ^ g`` is
the wedge product.  The metric-dependent operations (Hodge star, box
operator, volume functional) only need an object with ``n`` and
``orthonormal`` attributes, i.e. a :class:`~g2lab.frames.Frame`.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, Iterator, Mapping, Tuple

from .coeffs import Coefficient, Poly, RatFuncT, as_coeff, normalize

MultiIndex = Tuple[int, ...]

__all__ = [
    "DimensionError",
    "UnsupportedMetricError",
    "Form",
    "e",
    "wedge",
    "contract",
    "sigma",
    "epsilon",
    "q_pair",
    "hodge_star",
    "box_companion",
    "q_volume",
    "sort_sign",
    "basis",
]


class DimensionError(ValueError):
    pass


class UnsupportedMetricError(ValueError):
    pass


def sort_sign(idx: Iterable[int]) -> Tuple[int, MultiIndex]:
    """Sign of the permutation sorting ``idx``; 0 if an index repeats."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    inv = sum(1 for a, b in combinations(idx, 2) if a > b)
    return (-1 if inv % 2 else 1), tuple(sorted(idx))


def _merge_sign(I: MultiIndex, J: MultiIndex) -> int:
    # inversions of the concatenation I + J with I, J individually sorted
    inv = 0
    for j in J:
        inv += len(I) - bisect_right(I, j)
    return -1 if inv % 2 else 1


class Form:
    """Immutable sparse form of possibly mixed degree."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[MultiIndex, object] | None = None):
        self.n = n
        clean: Dict[MultiIndex, Coefficient] = {}
        if terms:
            for idx, c in terms.items():
                c = normalize(as_coeff(c))
                if not c:
                    continue
                idx = tuple(idx)
                if idx and (idx[0] < 1 or idx[-1] > n):
                    raise DimensionError(f"index {idx} out of range for frame dimension {n}")
                if any(a >= b for a, b in zip(idx, idx[1:])):
                    raise ValueError(f"multi-index {idx} is not strictly increasing")
                clean[idx] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[Tuple[Iterable[int], object]]) -> "Form":
        """Build from possibly unsorted index sequences, accumulating signs."""
        acc: Dict[MultiIndex, Coefficient] = {}
        for idx, c in terms:
            s, key = sort_sign(idx)
            if not s:
                continue
            c = as_coeff(c)
            acc[key] = acc[key] + s * c if key in acc else s * c
        return cls(n, acc)

    @classmethod
    def scalar(cls, n: int, c) -> "Form":
        return cls(n, {(): c})

    @classmethod
    def zero(cls, n: int) -> "Form":
        return cls(n)

    # container protocol
    @property
    def terms(self) -> Dict[MultiIndex, Coefficient]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __getitem__(self, idx) -> Coefficient:
        return self._terms.get(tuple(idx), Fraction(0))

    def coefficient(self, idx) -> Coefficient:
        s, key = sort_sign(idx)
        return s * self[key] if s else Fraction(0)

    def degrees(self) -> set:
        return {len(k) for k in self._terms}

    @property
    def degree(self) -> int:
        degs = self.degrees()
        if len(degs) > 1:
            raise ValueError(f"form has mixed degrees {sorted(degs)}")
        return degs.pop() if degs else 0

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def part(self, p: int) -> "Form":
        return Form(self.n, {k: c for k, c in self._terms.items() if len(k) == p})

    def even(self) -> "Form":
        return Form(self.n, {k: c for k, c in self._terms.items() if len(k) % 2 == 0})

    def odd(self) -> "Form":
        return Form(self.n, {k: c for k, c in self._terms.items() if len(k) % 2 == 1})

    def top(self) -> Coefficient:
        return self[tuple(range(1, self.n + 1))]

    def map_coeffs(self, fn) -> "Form":
        return Form(self.n, {k: fn(c) for k, c in self._terms.items()})

    def subs(self, bindings: Mapping[str, object]) -> "Form":
        return self.map_coeffs(lambda c: c.subs(bindings) if isinstance(c, Poly) else c)

    def variables(self) -> set:
        out = set()
        for c in self._terms.values():
            if isinstance(c, Poly):
                out |= c.variables()
        return out

    def embed(self, n: int) -> "Form":
        """Same form viewed over a frame of larger dimension ``n``."""
        if n < self.n and any(k and k[-1] > n for k in self._terms):
            raise DimensionError("cannot embed into a smaller frame")
        return Form(n, self._terms)

    def drop_index(self, k: int) -> "Form":
        """Pull back to the hyperplane ``e^k = 0`` and renumber indices."""
        out = {}
        for idx, c in self._terms.items():
            if k in idx:
                continue
            out[tuple(i - 1 if i > k else i for i in idx)] = c
        return Form(self.n - 1, out)

    # arithmetic
    def _check(self, other: "Form"):
        if not isinstance(other, Form):
            raise TypeError(f"expected a Form, got {type(other).__name__}")
        if other.n != self.n:
            raise DimensionError(f"frame dimensions differ: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, Form):
            return self + Form.scalar(self.n, other)
        self._check(other)
        terms = dict(self._terms)
        for k, c in other._terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return Form(self.n, terms)

    __radd__ = __add__

    def __neg__(self):
        return Form(self.n, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        if isinstance(c, Form):
            return wedge(self, c)
        c = as_coeff(c)
        return Form(self.n, {k: v * c for k, v in self._terms.items()})

    def __rmul__(self, c):
        c = as_coeff(c)
        return Form(self.n, {k: c * v for k, v in self._terms.items()})

    def __truediv__(self, c):
        return self * (1 / Fraction(c)) if isinstance(c, (int, Fraction)) else self.map_coeffs(lambda v: v / c)

    def __xor__(self, other):
        return wedge(self, other)

    def __pow__(self, k: int):
        out = Form.scalar(self.n, 1)
        for _ in range(k):
            out = wedge(out, self)
        return out

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, Form):
            return self.n == other.n and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not other:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda kc: (len(kc[0]), kc[0]))

    def __str__(self):
        from .grammar import format_form

        return format_form(self)

    def __repr__(self):
        return f"Form(n={self.n}, {self})"


def e(n: int, idx) -> Form:
    """Basis monomial ``e^{idx}``; ``idx`` may be a digit string like ``"146"``."""
    if isinstance(idx, str):
        idx = [int(ch) for ch in idx]
    elif isinstance(idx, int):
        idx = [idx]
    return Form.from_terms(n, [(idx, 1)])


def basis(n: int, p: int):
    """All degree-``p`` multi-indices of an ``n``-frame in lexicographic order."""
    return list(combinations(range(1, n + 1), p))


def wedge(f: Form, g: Form) -> Form:
    if not isinstance(f, Form) or not isinstance(g, Form):
        raise TypeError("wedge expects two Forms")
    if f.n != g.n:
        raise DimensionError(f"frame dimensions differ: {f.n} vs {g.n}")
    acc: Dict[MultiIndex, Coefficient] = {}
    for I, a in f._terms.items():
        sI = set(I)
        for J, b in g._terms.items():
            if sI.intersection(J):
                continue
            key = tuple(sorted(I + J))
            c = a * b if _merge_sign(I, J) > 0 else -(a * b)
            acc[key] = acc[key] + c if key in acc else c
    return Form(f.n, acc)


def contract(k: int, f: Form) -> Form:
    """Interior product with the ``k``-th dual frame vector."""
    if not 1 <= k <= f.n:
        raise DimensionError(f"contraction index {k} out of range 1..{f.n}")
    out = {}
    for I, c in f._terms.items():
        pos = bisect_left(I, k)
        if pos < len(I) and I[pos] == k:
            out[I[:pos] + I[pos + 1:]] = c if pos % 2 == 0 else -c
    return Form(f.n, out)


def epsilon(p: int) -> int:
    return 1 if p % 4 in (0, 3) else -1


def sigma(f: Form) -> Form:
    return Form(f.n, {I: (c if epsilon(len(I)) > 0 else -c) for I, c in f._terms.items()})


def q_pair(f: Form, g: Form) -> Coefficient:
    """Top-degree coefficient of ``f ^ sigma(g)``."""
    return wedge(f, sigma(g)).top()


def _require_metric(frame):
    if not getattr(frame, "orthonormal", False):
        raise UnsupportedMetricError("operation needs a coframe declared orthonormal")


def hodge_star(frame, f: Form) -> Form:
    _require_metric(frame)
    n = frame.n
    if f.n != n:
        raise DimensionError(f"form over {f.n}-frame, star over {n}-frame")
    full = range(1, n + 1)
    out = {}
    for I, c in f._terms.items():
        comp = tuple(i for i in full if i not in I)
        inv = 0
        for i in I:
            inv += bisect_left(comp, i)
        out[comp] = -c if inv % 2 else c
    return Form(n, out)


def box_companion(frame, rho: Form) -> Form:
    """Box operator with trivial B-field: ``*sigma(rho)``."""
    return hodge_star(frame, sigma(rho))


def q_volume(frame, rho: Form) -> Coefficient:
    return q_pair(box_companion(frame, rho), rho)
