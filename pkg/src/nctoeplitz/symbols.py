"""Exact polynomial symbols over phase-space or complex-chart variables.

A PolySymbol stores a map from exponent multi-indices to coefficients.
Coefficients are usually complex numbers, but any commutative-ring value
supporting +, -, * works (the star-product Taylor machinery substitutes
truncated power series in the renormalized parameters B, T).

In the complex charts z_j and zb_j are independent formal variables;
zb_j plays the role of the conjugate on real phase-space data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    ChartMismatch,
    DimensionMismatch,
    SymbolSyntaxError,
    UnknownVariable,
)
from .params import DeformationParams


@dataclass(frozen=True)
class Chart:
    name: str
    variables: tuple[str, ...]

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def axis(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise UnknownVariable(f"{var!r} is not a variable of chart {self.name}")


PHASE = Chart("phase", ("q1", "q2", "p1", "p2"))
COMPLEX1 = Chart("complex1", ("z1", "zb1"))
COMPLEX2 = Chart("complex2", ("z1", "zb1", "z2", "zb2"))


def complex_chart(d: int) -> Chart:
    if d == 1:
        return COMPLEX1
    if d == 2:
        return COMPLEX2
    raise DimensionMismatch(f"complex chart supports d = 1 or 2, got {d}")


def _is_zero(c) -> bool:
    try:
        return c == 0
    except TypeError:
        return False


class PolySymbol:
    """Polynomial with exact term-dict storage; immutable by convention."""

    __slots__ = ("chart", "terms")

    def __init__(self, chart: Chart, terms: Mapping[tuple, object] | None = None):
        pruned = {}
        if terms:
            for e, c in terms.items():
                if len(e) != chart.nvars:
                    raise DimensionMismatch(
                        f"exponent {e} does not match chart {chart.name}")
                if not _is_zero(c):
                    pruned[tuple(e)] = c
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "terms", pruned)

    def __setattr__(self, *a):
        raise AttributeError("PolySymbol is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, chart: Chart) -> "PolySymbol":
        return cls(chart, {})

    @classmethod
    def constant(cls, chart: Chart, c) -> "PolySymbol":
        return cls(chart, {(0,) * chart.nvars: c})

    @classmethod
    def variable(cls, chart: Chart, name: str) -> "PolySymbol":
        e = [0] * chart.nvars
        e[chart.axis(name)] = 1
        return cls(chart, {tuple(e): 1.0})

    # -- ring operations ---------------------------------------------------

    def _check_chart(self, other: "PolySymbol"):
        if self.chart is not other.chart and self.chart != other.chart:
            raise ChartMismatch(
                f"charts differ: {self.chart.name} vs {other.chart.name}")

    def __add__(self, other):
        if not isinstance(other, PolySymbol):
            return self + PolySymbol.constant(self.chart, other)
        self._check_chart(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return PolySymbol(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return PolySymbol(self.chart, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, PolySymbol)
                       else PolySymbol.constant(self.chart, -other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PolySymbol):
            return PolySymbol(self.chart,
                              {e: c * other for e, c in self.terms.items()})
        self._check_chart(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                out[e] = out[e] + c if e in out else c
        return PolySymbol(self.chart, out)

    def __rmul__(self, other):
        return PolySymbol(self.chart,
                          {e: other * c for e, c in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers of symbols")
        out = PolySymbol.constant(self.chart, 1.0)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, PolySymbol):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __hash__(self):
        return hash((self.chart.name, frozenset(self.terms.items())))

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def coefficient(self, exponents: tuple) -> complex:
        return self.terms.get(tuple(exponents), 0.0)

    def map_coefficients(self, fn) -> "PolySymbol":
        return PolySymbol(self.chart, {e: fn(c) for e, c in self.terms.items()})

    def max_coeff_diff(self, other: "PolySymbol") -> float:
        """Largest absolute coefficient difference (numeric coefficients)."""
        self._check_chart(other)
        keys = set(self.terms) | set(other.terms)
        return max((abs(self.terms.get(e, 0.0) - other.terms.get(e, 0.0))
                    for e in keys), default=0.0)

    def isclose(self, other: "PolySymbol", tol: float = 1e-12) -> bool:
        scale = max(self.max_abs_coeff(), other.max_abs_coeff(), 1.0)
        return self.max_coeff_diff(other) <= tol * scale

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def bar_swap(self) -> "PolySymbol":
        """Swap z_j <-> zb_j and conjugate coefficients (complex charts only).

        The image of a real phase-space symbol is a fixed point of this map.
        """
        if self.chart is PHASE:
            raise ChartMismatch("bar_swap is defined on complex charts")
        d = self.chart.nvars // 2
        out = {}
        for e, c in self.terms.items():
            swapped = []
            for j in range(d):
                swapped.extend((e[2 * j + 1], e[2 * j]))
            out[tuple(swapped)] = complex(c).conjugate()
        return PolySymbol(self.chart, out)

    # -- calculus ----------------------------------------------------------

    def differentiate(self, var: str, order: int = 1) -> "PolySymbol":
        """Exact partial derivative of the given order."""
        ax = self.chart.axis(var)
        out = self
        for _ in range(order):
            terms = {}
            for e, c in out.terms.items():
                k = e[ax]
                if k == 0:
                    continue
                e2 = e[:ax] + (k - 1,) + e[ax + 1:]
                c2 = c * k
                terms[e2] = terms[e2] + c2 if e2 in terms else c2
            out = PolySymbol(self.chart, terms)
        return out

    def substitute(self, images: Mapping[str, "PolySymbol"]) -> "PolySymbol":
        """Compose with var -> polynomial images (all on one target chart)."""
        missing = [v for v in self.chart.variables if v not in images]
        if missing:
            raise UnknownVariable(f"no image given for {missing}")
        target = next(iter(images.values())).chart
        # cache powers of each image
        maxdeg = {v: 0 for v in self.chart.variables}
        for e in self.terms:
            for v, k in zip(self.chart.variables, e):
                maxdeg[v] = max(maxdeg[v], k)
        powers = {}
        for v, img in images.items():
            if v not in maxdeg:
                continue
            row = [PolySymbol.constant(target, 1.0)]
            for _ in range(maxdeg[v]):
                row.append(row[-1] * img)
            powers[v] = row
        out = PolySymbol.zero(target)
        for e, c in self.terms.items():
            term = PolySymbol.constant(target, c)
            for v, k in zip(self.chart.variables, e):
                if k:
                    term = term * powers[v][k]
            out = out + term
        return out

    def evaluate_raw(self, values: Iterable[complex]) -> complex:
        """Evaluate with one value per formal variable."""
        vals = tuple(values)
        if len(vals) != self.chart.nvars:
            raise DimensionMismatch(
                f"need {self.chart.nvars} values for chart {self.chart.name}")
        maxe = [0] * self.chart.nvars
        for e in self.terms:
            for i, k in enumerate(e):
                maxe[i] = max(maxe[i], k)
        pows = []
        for v, m in zip(vals, maxe):
            row = [1.0]
            for _ in range(m):
                row.append(row[-1] * v)
            pows.append(row)
        total = 0.0
        for e, c in self.terms.items():
            mono = 1.0
            for i, k in enumerate(e):
                if k:
                    mono = mono * pows[i][k]
            total = total + c * mono
        return total

    def __call__(self, point) -> complex:
        """Evaluate at a point of the chart.

        Phase chart: 4 values (q1, q2, p1, p2).  Complex chart of dimension
        d: d complex values; the zb variables take the conjugates.
        """
        point = tuple(point)
        if self.chart is PHASE:
            return self.evaluate_raw(point)
        d = self.chart.nvars // 2
        if len(point) != d:
            raise DimensionMismatch(f"need {d} complex values, got {len(point)}")
        full = []
        for z in point:
            full.extend((z, np.conjugate(z)))
        return self.evaluate_raw(full)

    # -- printing ----------------------------------------------------------

    def __repr__(self):
        return f"PolySymbol({self.chart.name}, {self.to_text()!r})"

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), ec[0]))

    def to_text(self) -> str:
        """Render in the grammar accepted by parse_symbol (round-trip stable)."""
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}"
                for v, k in zip(self.chart.variables, e) if k)
            cs = _format_coeff(complex(c))
            parts.append(f"{cs}*{mono}" if mono else cs)
        return " + ".join(parts)


def _format_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _format_coeff(c: complex) -> str:
    re, im = c.real, c.imag
    if im == 0.0:
        return _format_real(re) if re >= 0 else f"({_format_real(re)})"
    if re == 0.0:
        if im == 1.0:
            return "i"
        return f"({_format_real(im)}*i)"
    sign = "+" if im >= 0 else "-"
    return f"({_format_real(re)} {sign} {_format_real(abs(im))}*i)"


# -- parsing ---------------------------------------------------------------

_NUMBER_CHARS = "0123456789."


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        if self.pos >= len(self.text):
            return ("end", "", self.pos)
        ch = self.text[self.pos]
        if ch in "+-*^()":
            return ("op", ch, self.pos)
        if ch in _NUMBER_CHARS:
            j = self.pos
            seen_exp = False
            while j < len(self.text):
                cj = self.text[j]
                if cj in _NUMBER_CHARS:
                    j += 1
                elif cj in "eE" and not seen_exp:
                    seen_exp = True
                    j += 1
                    if j < len(self.text) and self.text[j] in "+-":
                        j += 1
                else:
                    break
            return ("number", self.text[self.pos:j], self.pos)
        if ch.isalpha():
            j = self.pos
            while j < len(self.text) and (self.text[j].isalnum() or self.text[j] == "_"):
                j += 1
            return ("name", self.text[self.pos:j], self.pos)
        raise SymbolSyntaxError(f"unexpected character {ch!r}", self.pos)

    def next(self):
        tok = self.peek()
        self.pos = tok[2] + len(tok[1])
        return tok


class _Parser:
    def __init__(self, text: str, chart: Chart):
        self.toks = _Tokenizer(text)
        self.chart = chart

    def parse(self) -> PolySymbol:
        out = self.expr()
        kind, val, pos = self.toks.peek()
        if kind != "end":
            raise SymbolSyntaxError(f"unexpected trailing {val!r}", pos)
        return out

    def expr(self) -> PolySymbol:
        # optional leading sign (beyond the minimal grammar, needed so that
        # printed symbols with negative coefficients re-parse)
        kind, val, _ = self.toks.peek()
        if kind == "op" and val in "+-":
            self.toks.next()
            out = self.term()
            if val == "-":
                out = -out
        else:
            out = self.term()
        while True:
            kind, val, _ = self.toks.peek()
            if kind == "op" and val in "+-":
                self.toks.next()
                rhs = self.term()
                out = out + rhs if val == "+" else out - rhs
            else:
                return out

    def term(self) -> PolySymbol:
        out = self.factor()
        while True:
            kind, val, _ = self.toks.peek()
            if kind == "op" and val == "*":
                self.toks.next()
                out = out * self.factor()
            else:
                return out

    def factor(self) -> PolySymbol:
        base = self.base()
        kind, val, pos = self.toks.peek()
        if kind == "op" and val == "^":
            self.toks.next()
            kind, val, pos = self.toks.next()
            if kind != "number" or not val.isdigit():
                raise SymbolSyntaxError("exponent must be a nonnegative integer", pos)
            return base ** int(val)
        return base

    def base(self) -> PolySymbol:
        kind, val, pos = self.toks.next()
        if kind == "number":
            try:
                num = float(val)
            except ValueError:
                raise SymbolSyntaxError(f"bad number {val!r}", pos)
            return PolySymbol.constant(self.chart, num)
        if kind == "name":
            if val == "i":
                return PolySymbol.constant(self.chart, 1j)
            if val not in self.chart.variables:
                raise UnknownVariable(
                    f"{val!r} is not a variable of chart {self.chart.name}")
            return PolySymbol.variable(self.chart, val)
        if kind == "op" and val == "(":
            inner = self.expr()
            kind, val, pos = self.toks.next()
            if not (kind == "op" and val == ")"):
                raise SymbolSyntaxError("expected ')'", pos)
            return inner
        raise SymbolSyntaxError(f"unexpected token {val!r}", pos)


def parse_symbol(text: str, chart: Chart = PHASE) -> PolySymbol:
    """Parse an expression into a PolySymbol on the given chart.

    Grammar: expr := term (('+'|'-') term)*; term := factor ('*' factor)*;
    factor := base ('^' uint)?; base := number | 'i' | var | '(' expr ')'.
    A leading sign inside expr is also accepted.
    """
    return _Parser(text, chart).parse()


# -- phase <-> complex chart composition ------------------------------------

def poisson_bracket(F: PolySymbol, G: PolySymbol) -> PolySymbol:
    """{F, G} = sum_k dF/dq_k dG/dp_k - dF/dp_k dG/dq_k on the phase chart."""
    if F.chart is not PHASE or G.chart is not PHASE:
        raise ChartMismatch("poisson_bracket needs phase-chart symbols")
    out = PolySymbol.zero(PHASE)
    for qk, pk in (("q1", "p1"), ("q2", "p2")):
        out = out + F.differentiate(qk) * G.differentiate(pk) \
                  - F.differentiate(pk) * G.differentiate(qk)
    return out


def _reciprocal(x):
    return x.reciprocal() if hasattr(x, "reciprocal") else 1.0 / x


def phase_to_complex_images(B, T, S: float, one=1.0) -> dict[str, PolySymbol]:
    """Images of q1, q2, p1, p2 as polynomials in (z1, zb1, z2, zb2).

    B and T may be numbers or ring elements (e.g. truncated power series,
    which turns the map into its joint (B, T) expansion); `one` is the
    ring unit.  The map depends only on (B, T, S), not on hbar.
    """
    a = (S / math.sqrt(2.0)) * one          # q_nc coefficient
    b = (1.0 / (math.sqrt(2.0) * S)) * one  # p_nc coefficient / i
    inv = _reciprocal(one - B * T)
    z1 = PolySymbol.variable(COMPLEX2, "z1")
    zb1 = PolySymbol.variable(COMPLEX2, "zb1")
    z2 = PolySymbol.variable(COMPLEX2, "z2")
    zb2 = PolySymbol.variable(COMPLEX2, "zb2")
    q1nc = (z1 + zb1) * a
    q2nc = (z2 + zb2) * a
    p1nc = (z1 - zb1) * (1j * b)
    p2nc = (z2 - zb2) * (1j * b)
    return {
        "q1": q1nc,
        "q2": (q2nc - p1nc * T) * inv,
        "p1": (p1nc - q2nc * B) * inv,
        "p2": p2nc,
    }


def complex_to_phase_images(B, T, S: float, one=1.0) -> dict[str, PolySymbol]:
    """Images of z1, zb1, z2, zb2 as polynomials in (q1, q2, p1, p2)."""
    a = (1.0 / (math.sqrt(2.0) * S)) * one  # multiplies q_nc
    b = (S / math.sqrt(2.0)) * one          # multiplies p_nc
    q1 = PolySymbol.variable(PHASE, "q1")
    q2 = PolySymbol.variable(PHASE, "q2")
    p1 = PolySymbol.variable(PHASE, "p1")
    p2 = PolySymbol.variable(PHASE, "p2")
    q1nc, q2nc = q1, q2 + p1 * T
    p1nc, p2nc = p1 + q2 * B, p2
    return {
        "z1": q1nc * a - p1nc * (1j * b),
        "zb1": q1nc * a + p1nc * (1j * b),
        "z2": q2nc * a - p2nc * (1j * b),
        "zb2": q2nc * a + p2nc * (1j * b),
    }


def to_complex_chart(p: DeformationParams, F: PolySymbol) -> PolySymbol:
    """Exact composition of a phase symbol with the complex-chart inverse map."""
    if F.chart is not PHASE:
        raise ChartMismatch("to_complex_chart needs a phase-chart symbol")
    p.require_generic("to_complex_chart")
    return F.substitute(phase_to_complex_images(p.B, p.T, p.S))


def from_complex_chart(p: DeformationParams, f: PolySymbol) -> PolySymbol:
    """Exact composition of a complex-chart symbol back to phase space."""
    if f.chart is not COMPLEX2:
        raise ChartMismatch("from_complex_chart needs a 2d complex-chart symbol")
    p.require_generic("from_complex_chart")
    return f.substitute(complex_to_phase_images(p.B, p.T, p.S))
