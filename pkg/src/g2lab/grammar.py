"""Text syntax for structure equations and forms.

Grammar (whitespace-insensitive)::

    frame   := "(" entry ("," entry)* ")"
    entry   := "0" | signed-term+
    signed-term := ["+" | "-"] term
    term    := [coef "*"] index
    coef    := factor ("*" factor)*
    factor  := rational | ident ["^" int]
    rational:= int ["/" int]
    index   := digit+ | "()"

The last factor of a term is always its index string; ``"146"`` is
``e^{146}`` and ``"()"`` the constant 1.  Index strings need not be sorted,
the permutation sign is applied.  Terms print back in the same syntax.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Tuple

from .coeffs import Poly, RatFuncT
from .forms import Form

__all__ = ["GrammarError", "parse_form", "parse_table", "format_form", "format_table"]


class GrammarError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = -1):
        self.text = text
        self.pos = pos
        if pos >= 0:
            message = f"{message} at position {pos}: {text[:pos]}>>{text[pos:]}"
        super().__init__(message)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^(),]))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise GrammarError("unexpected character", text, pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise GrammarError(f"expected {value!r}", self.text, pos)

    def error(self, msg):
        raise GrammarError(msg, self.text, self.peek()[2])

    def at_end(self):
        return self.i >= len(self.toks)

    # term := [coef "*"] index
    def term(self):
        """Return (coefficient polynomial, index digits)."""
        factors = []
        while True:
            kind, val, pos = self.peek()
            if kind == "num":
                self.take()
                if self.peek()[1] == "/":
                    self.take()
                    k2, v2, p2 = self.take()
                    if k2 != "num":
                        raise GrammarError("expected denominator", self.text, p2)
                    factors.append(("rat", Fraction(int(val), int(v2)), pos))
                else:
                    factors.append(("num", val, pos))
            elif kind == "ident":
                self.take()
                power = 1
                if self.peek()[1] == "^":
                    self.take()
                    k2, v2, p2 = self.take()
                    if k2 != "num":
                        raise GrammarError("expected exponent", self.text, p2)
                    power = int(v2)
                factors.append(("ident", (val, power), pos))
            elif val == "(" and self.peek(1)[1] == ")":
                self.take()
                self.take()
                factors.append(("unit", "", pos))
            else:
                self.error("expected a coefficient or index")
            if self.peek()[1] == "*":
                self.take()
                continue
            break
        kind, last, pos = factors[-1]
        if kind == "num":
            index = last
        elif kind == "unit":
            index = ""
        else:
            raise GrammarError("term must end in an index string", self.text, pos)
        coef = Poly.const(1)
        for kind, val, _ in factors[:-1]:
            if kind == "num":
                coef = coef * int(val)
            elif kind == "rat":
                coef = coef * val
            elif kind == "ident":
                name, power = val
                coef = coef * Poly.var(name) ** power
            else:
                raise GrammarError("'()' only allowed as the index", self.text, _)
        return coef, index

    def expression(self, n, stop=(",", ")", None)):
        terms = []
        kind, val, pos = self.peek()
        if kind == "num" and val == "0" and self.peek(1)[1] in stop:
            self.take()
            return Form(n)
        first = True
        while True:
            kind, val, pos = self.peek()
            sign = 1
            if val in ("+", "-"):
                self.take()
                sign = -1 if val == "-" else 1
            elif not first:
                break
            coef, index = self.term()
            digits = [int(ch) for ch in index]
            for d in digits:
                if not 1 <= d <= n:
                    raise GrammarError(f"index {d} out of range 1..{n}", self.text, pos)
            terms.append((digits, coef if sign > 0 else -coef))
            first = False
            if self.peek()[1] in stop:
                break
        return Form.from_terms(n, terms)


def parse_form(text: str, n: int) -> Form:
    """Parse a signed sum of terms into a form over an ``n``-frame."""
    p = _Parser(text)
    if p.at_end():
        raise GrammarError("empty form expression", text, 0)
    f = p.expression(n, stop=(None,))
    if not p.at_end():
        p.error("trailing input")
    return f


def parse_table(text: str) -> List[Form]:
    """Parse ``"(0,0,12,...)"`` into the list of ``d e^i`` forms."""
    p = _Parser(text)
    p.expect("(")
    # count entries first so that index range checks know n
    depth, n = 0, 1
    for kind, val, _ in p.toks[1:]:
        if val == "(":
            depth += 1
        elif val == ")":
            if depth == 0:
                break
            depth -= 1
        elif val == "," and depth == 0:
            n += 1
    entries = []
    while True:
        entries.append(p.expression(n))
        kind, val, pos = p.take()
        if val == ")":
            break
        if val != ",":
            raise GrammarError("expected ',' or ')'", text, pos)
    if not p.at_end():
        p.error("trailing input after ')'")
    return entries


def _coef_parts(c) -> List[Tuple[int, str]]:
    """Split a coefficient into (sign, printed magnitude) summands."""
    if isinstance(c, Fraction):
        return [(1 if c > 0 else -1, "" if abs(c) == 1 else str(abs(c)))]
    if isinstance(c, Poly):
        out = []
        for mono, v in c.sorted_terms():
            mono_s = "*".join(name if k == 1 else f"{name}^{k}" for name, k in mono)
            if not mono_s:
                body = "" if abs(v) == 1 else str(abs(v))
            else:
                body = mono_s if abs(v) == 1 else f"{abs(v)}*{mono_s}"
            out.append((1 if v > 0 else -1, body))
        return out
    if isinstance(c, RatFuncT):
        return [(1, str(c))]
    return [(1, str(c))]


def format_form(f: Form) -> str:
    if not f:
        return "0"
    pieces = []
    for idx, c in f.sorted_items():
        index = "".join(str(i) for i in idx) if idx else "()"
        for sign, body in _coef_parts(c):
            pieces.append(("-" if sign < 0 else "+") + (f"{body}*{index}" if body else index))
    s = "".join(pieces)
    return s[1:] if s.startswith("+") else s


def format_table(table) -> str:
    return "(" + ",".join(format_form(f) for f in table) + ")"
