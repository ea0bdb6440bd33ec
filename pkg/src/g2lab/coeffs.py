"""Exact coefficient rings.

``Poly`` is a sparse multivariate polynomial over the rationals in named
parameters.  ``RatFuncT`` is a reduced univariate rational function in the
flow parameter ``t``.  Forms store plain ``Fraction`` values whenever a
coefficient is constant, so mixing the two rings is only allowed through
constants.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Mapping, Tuple, Union

Monomial = Tuple[Tuple[str, int], ...]

__all__ = [
    "Poly",
    "RatFuncT",
    "Coefficient",
    "as_coeff",
    "normalize",
    "is_zero",
    "parse_rational",
    "coeff_str",
    "substitute",
    "derivative_t",
]


def parse_rational(text: str) -> Fraction:
    """Parse ``"3"``, ``"-1/2"`` (or ``"0.25"``) into an exact Fraction."""
    return Fraction(text.strip())


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    powers = dict(m1)
    for name, k in m2:
        powers[name] = powers.get(name, 0) + k
    return tuple(sorted(powers.items()))


def _mono_str(m: Monomial) -> str:
    return "*".join(name if k == 1 else f"{name}^{k}" for name, k in m)


class Poly:
    """Multivariate polynomial with Fraction coefficients.

    Terms are kept as a mapping ``monomial -> Fraction`` with no zero
    entries; a monomial is a sorted tuple of ``(name, power)`` pairs.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    clean[mono] = Fraction(c)
        self._terms = clean
        self._hash = None

    # constructors
    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): Fraction(1)})

    @classmethod
    def const(cls, value) -> "Poly":
        return cls({(): Fraction(value)})

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def variables(self) -> set:
        return {name for mono in self._terms for name, _ in mono}

    def is_constant(self) -> bool:
        return all(not mono for mono in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"polynomial {self} is not constant")
        return self._terms.get((), Fraction(0))

    def degree(self) -> int:
        return max((sum(k for _, k in m) for m in self._terms), default=0)

    # arithmetic
    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return Poly.const(other)
        if isinstance(other, RatFuncT):
            return None
        return None

    def __add__(self, other):
        if isinstance(other, RatFuncT):
            return other + self
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self._terms)
        for mono, c in o._terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + c
        return Poly(terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, RatFuncT):
            return (-other) + self
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RatFuncT):
            return other * self
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly()
            f = Fraction(other)
            return Poly({m: c * f for m, c in self._terms.items()})
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in o._terms.items():
                m = _mono_mul(m1, m2)
                terms[m] = terms.get(m, Fraction(0)) + c1 * c2
        return Poly(terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # division only by nonzero rational constants
        if isinstance(other, Poly):
            other = other.constant_value()
        f = Fraction(other)
        if not f:
            raise ZeroDivisionError("division of polynomial by zero")
        return self * (1 / f)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self._terms
            return self._terms == {(): Fraction(other)}
        if isinstance(other, RatFuncT):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def subs(self, bindings: Mapping[str, object]) -> "Poly":
        """Substitute parameter values (rationals or polynomials)."""
        out = Poly()
        for mono, c in self._terms.items():
            term = Poly.const(c)
            for name, k in mono:
                if name in bindings:
                    term = term * as_coeff(bindings[name]) ** k
                else:
                    term = term * Poly({((name, k),): Fraction(1)})
            out = out + term
        return out

    def evaluate(self, bindings: Mapping[str, float]) -> float:
        total = 0.0
        for mono, c in self._terms.items():
            v = float(c)
            for name, k in mono:
                v *= float(bindings[name]) ** k
            total += v
        return total

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda mc: (-sum(k for _, k in mc[0]), mc[0]))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = _mono_str(mono)
            else:
                body = f"{abs(c)}*{_mono_str(mono)}"
            parts.append(("-" if c < 0 else "+", body))
        s = "".join(f"{sg}{b}" for sg, b in parts)
        return s[1:] if s.startswith("+") else s

    def __repr__(self):
        return f"Poly({self})"


# ----------------------------------------------------------------------
# univariate polynomials in t, as tuples of Fractions in ascending degree

UPoly = Tuple[Fraction, ...]


def _utrim(p: Iterable[Fraction]) -> UPoly:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return tuple(p)


def _uadd(p: UPoly, q: UPoly) -> UPoly:
    n = max(len(p), len(q))
    return _utrim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def _uneg(p: UPoly) -> UPoly:
    return tuple(-c for c in p)


def _umul(p: UPoly, q: UPoly) -> UPoly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _utrim(out)


def _udivmod(p: UPoly, q: UPoly) -> Tuple[UPoly, UPoly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quo = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    lead = q[-1]
    while len(rem) >= len(q) and rem:
        shift = len(rem) - len(q)
        f = rem[-1] / lead
        quo[shift] = f
        for i, c in enumerate(q):
            rem[shift + i] -= f * c
        rem = list(_utrim(rem))
    return _utrim(quo), _utrim(rem)


def _umonic(p: UPoly) -> UPoly:
    return tuple(c / p[-1] for c in p) if p else p


def _ugcd(p: UPoly, q: UPoly) -> UPoly:
    while q:
        p, q = q, _udivmod(p, q)[1]
    return _umonic(p)


def _uderiv(p: UPoly) -> UPoly:
    return _utrim(i * c for i, c in enumerate(p) if i > 0)


def _ustr(p: UPoly) -> str:
    if not p:
        return "0"
    parts = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if not c:
            continue
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        parts.append(("-" if c < 0 else "+") + body)
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


class RatFuncT:
    """Rational function in ``t`` over the rationals.

    Always stored reduced with a monic denominator.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Iterable = (), den: Iterable = (1,)):
        num = _utrim(Fraction(c) for c in num)
        den = _utrim(Fraction(c) for c in den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = (), (Fraction(1),)
            return
        g = _ugcd(num, den)
        if len(g) > 1:
            num = _udivmod(num, g)[0]
            den = _udivmod(den, g)[0]
        lead = den[-1]
        self.num = tuple(c / lead for c in num)
        self.den = tuple(c / lead for c in den)

    @classmethod
    def t(cls) -> "RatFuncT":
        return cls((0, 1))

    @classmethod
    def const(cls, value) -> "RatFuncT":
        return cls((Fraction(value),))

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and len(self.den) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num[0] if self.num else Fraction(0)

    def _coerce(self, other):
        if isinstance(other, RatFuncT):
            return other
        if isinstance(other, (int, Fraction)):
            return RatFuncT.const(other)
        if isinstance(other, Poly):
            if not other.is_constant():
                raise TypeError("cannot mix a parametric polynomial with a rational function of t; bind parameters first")
            return RatFuncT.const(other.constant_value())
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFuncT(_uadd(self.num, o.num), self.den)
        return RatFuncT(_uadd(_umul(self.num, o.den), _umul(o.num, self.den)), _umul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFuncT(_uneg(self.num), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return RatFuncT(tuple(c * f for c in self.num), self.den)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFuncT(_umul(self.num, o.num), _umul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("division by zero rational function")
        return RatFuncT(_umul(self.num, o.den), _umul(self.den, o.num))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFuncT.const(1) / (self ** (-k))
        out = RatFuncT.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, RatFuncT):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if isinstance(other, Poly):
            return other.is_constant() and self.is_constant() and self.constant_value() == other.constant_value()
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash((self.num, self.den))

    def derivative(self) -> "RatFuncT":
        # (n/d)' = (n'd - nd') / d^2
        top = _uadd(_umul(_uderiv(self.num), self.den), _uneg(_umul(self.num, _uderiv(self.den))))
        return RatFuncT(top, _umul(self.den, self.den))

    def __call__(self, t):
        """Evaluate at ``t`` (exact for Fraction input, float otherwise)."""
        exact = isinstance(t, (int, Fraction))

        def ev(p):
            acc = Fraction(0) if exact else 0.0
            for c in reversed(p):
                acc = acc * t + (c if exact else float(c))
            return acc
        d = ev(self.den)
        if not d:
            raise ZeroDivisionError(f"pole of {self} at t = {t}")
        return ev(self.num) / d

    def __str__(self):
        if len(self.den) == 1:
            if len(self.num) <= 1:
                return _ustr(self.num)
            return f"({_ustr(self.num)})"
        return f"({_ustr(self.num)})/({_ustr(self.den)})"

    def __repr__(self):
        return f"RatFuncT({self})"


Coefficient = Union[Fraction, Poly, RatFuncT]


def as_coeff(value) -> Coefficient:
    if isinstance(value, (Poly, RatFuncT, Fraction)):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Poly.var(value)
    if isinstance(value, float):
        raise TypeError(f"floats are not exact coefficients: {value!r}; use Fraction or a string")
    return Fraction(value)


def normalize(c) -> Coefficient:
    """Collapse constant ring elements to plain Fractions."""
    if isinstance(c, Poly):
        return c.constant_value() if c.is_constant() else c
    if isinstance(c, RatFuncT):
        return c.constant_value() if c.is_constant() else c
    if isinstance(c, int):
        return Fraction(c)
    return c


def is_zero(c) -> bool:
    return not c


def substitute(c: Coefficient, bindings: Mapping[str, object]) -> Coefficient:
    if isinstance(c, Poly):
        return normalize(c.subs(bindings))
    return c


def derivative_t(c: Coefficient) -> Coefficient:
    if isinstance(c, RatFuncT):
        return normalize(c.derivative())
    if isinstance(c, Poly) and not c.is_constant():
        raise TypeError("parametric polynomial coefficient in a t-dependent frame; bind parameters first")
    return Fraction(0)


def coeff_str(c: Coefficient) -> str:
    return str(c)
