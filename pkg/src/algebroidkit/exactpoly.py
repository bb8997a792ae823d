"""Exact multivariate polynomials over the rationals on named coordinate charts.

Everything here is immutable.  Coefficients are :class:`fractions.Fraction`
values, so every identity check in the package is an exact zero test.

Terms are stored sparsely as ``{exponent tuple: coefficient}`` with zero
coefficients dropped, which makes the representation canonical: two equal
polynomials always have identical term maps.  Printing uses graded
lexicographic order (highest total degree first, ties broken
lexicographically in chart coordinate order).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Chart",
    "ChartMap",
    "ChartMismatchError",
    "Poly",
    "PolyParseError",
    "VectorField",
    "IDENTIFIER",
    "grlex_key",
    "parse_poly",
    "partial_derivative",
    "poly_arith",
    "pushforward_check",
    "vf_apply",
    "vf_bracket",
]

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class ChartMismatchError(ValueError):
    """Raised when objects living on different charts are combined."""


class PolyParseError(ValueError):
    """Polynomial text does not follow the grammar.

    ``position`` is the 0-based offset of the offending token in ``text``.
    """

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at column {position + 1} in {text!r}")
        self.text = text
        self.position = position


@dataclass(frozen=True)
class Chart:
    """An ordered list of distinct coordinate names.

    A chart with no coordinates stands for a one-point base.
    """

    coords: tuple[str, ...]

    def __init__(self, coords: Iterable[str]):
        coords = tuple(coords)
        for name in coords:
            if not isinstance(name, str) or not IDENTIFIER.match(name):
                raise ValueError(f"invalid coordinate name {name!r}")
        if len(set(coords)) != len(coords):
            raise ValueError(f"duplicate coordinate names in {coords}")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def index(self, name: str) -> int:
        try:
            return self.coords.index(name)
        except ValueError:
            raise KeyError(f"unknown coordinate {name!r} on chart {self.coords}") from None

    def __repr__(self) -> str:
        return f"Chart({list(self.coords)})"


def grlex_key(exps: tuple[int, ...]):
    return (sum(exps), exps)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"coefficient must be rational, got {type(c).__name__}")


class Poly:
    """A polynomial with rational coefficients over a :class:`Chart`.

    Arithmetic with plain ints and Fractions promotes them to constants.
    Combining polynomials over different charts raises
    :class:`ChartMismatchError`.

    >>> c = Chart(["x", "y"])
    >>> p = Poly.parse("x + 1", c) * Poly.parse("x - 1", c)
    >>> str(p)
    'x^2 - 1'
    """

    __slots__ = ("chart", "_terms", "_hash")

    def __init__(self, chart: Chart, terms: Mapping[tuple[int, ...], object] | None = None):
        clean: dict[tuple[int, ...], Fraction] = {}
        n = chart.dim
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n or any((not isinstance(e, int)) or e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for chart {chart.coords}")
            c = _as_fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self.chart = chart
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, chart: Chart, terms: dict) -> "Poly":
        # terms already canonical: no zeros, correct exponent lengths
        p = cls.__new__(cls)
        p.chart = chart
        p._terms = terms
        p._hash = None
        return p

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, chart: Chart) -> "Poly":
        return cls._raw(chart, {})

    @classmethod
    def const(cls, chart: Chart, c) -> "Poly":
        c = _as_fraction(c)
        return cls._raw(chart, {(0,) * chart.dim: c} if c else {})

    @classmethod
    def var(cls, chart: Chart, name: str) -> "Poly":
        exps = [0] * chart.dim
        exps[chart.index(name)] = 1
        return cls._raw(chart, {tuple(exps): Fraction(1)})

    @classmethod
    def parse(cls, text: str, chart: Chart) -> "Poly":
        return parse_poly(text, chart)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.chart != self.chart:
                raise ChartMismatchError(
                    f"chart mismatch: {self.chart.coords} vs {other.chart.coords}"
                )
            return other
        if isinstance(other, (int, Rational)):
            return Poly.const(self.chart, other)
        return NotImplemented

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> Mapping[tuple[int, ...], Fraction]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {(0,) * self.chart.dim}

    def constant_value(self) -> Fraction:
        return self._terms.get((0,) * self.chart.dim, Fraction(0))

    @property
    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        return max((sum(e) for e in self._terms), default=-1)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.chart == other.chart and self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return self._terms == Poly.const(self.chart, other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.chart, frozenset(self._terms.items())))
        return self._hash

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s += c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly._raw(self.chart, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.chart, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._terms, other._terms
        if not a or not b:
            return Poly._raw(self.chart, {})
        out: dict[tuple[int, ...], Fraction] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(e)
                out[e] = ca * cb if s is None else s + ca * cb
        return Poly._raw(self.chart, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.const(self.chart, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Poly":
        c = _as_fraction(c)
        if not c:
            return Poly._raw(self.chart, {})
        return Poly._raw(self.chart, {e: v * c for e, v in self._terms.items()})

    # -- calculus and substitution -----------------------------------------

    def diff(self, coord: str) -> "Poly":
        k = self.chart.index(coord)
        out = {}
        for e, c in self._terms.items():
            if e[k]:
                ne = e[:k] + (e[k] - 1,) + e[k + 1 :]
                out[ne] = c * e[k]
        return Poly._raw(self.chart, out)

    def evaluate(self, point: Mapping[str, object] | Sequence) -> Fraction:
        if isinstance(point, Mapping):
            values = [_as_fraction(point[name]) for name in self.chart.coords]
        else:
            values = [_as_fraction(v) for v in point]
            if len(values) != self.chart.dim:
                raise ValueError("point has wrong dimension")
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    term *= v**k
            total += term
        return total

    def substitute(self, formulas: Sequence["Poly"], chart: Chart) -> "Poly":
        """Compose with a polynomial map: replace coordinate k by ``formulas[k]``.

        All formulas must live on ``chart``, which becomes the result's chart.
        """
        if len(formulas) != self.chart.dim:
            raise ValueError("need one formula per coordinate")
        for f in formulas:
            if f.chart != chart:
                raise ChartMismatchError("substitution formulas must share the new chart")
        powers: list[dict[int, Poly]] = [{0: Poly.const(chart, 1)} for _ in formulas]

        def power(k: int, n: int) -> Poly:
            cache = powers[k]
            if n not in cache:
                cache[n] = power(k, n - 1) * formulas[k]
            return cache[n]

        result = Poly.zero(chart)
        for e, c in self._terms.items():
            term = Poly.const(chart, c)
            for k, n in enumerate(e):
                if n:
                    term = term * power(k, n)
            result = result + term
        return result

    def rechart(self, chart: Chart) -> "Poly":
        """Re-express over a chart that contains all coordinates actually used."""
        idx = []
        for name in self.chart.coords:
            idx.append(chart.coords.index(name) if name in chart.coords else None)
        out = {}
        for e, c in self._terms.items():
            ne = [0] * chart.dim
            for k, n in enumerate(e):
                if n:
                    if idx[k] is None:
                        raise ChartMismatchError(
                            f"coordinate {self.chart.coords[k]!r} not on chart {chart.coords}"
                        )
                    ne[idx[k]] = n
            out[tuple(ne)] = c
        return Poly._raw(chart, out)

    # -- text ---------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                name if k == 1 else f"{name}^{k}"
                for name, k in zip(self.chart.coords, e)
                if k
            )
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r}, {list(self.chart.coords)})"


_TOKEN = re.compile(r"(\s+)|(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.)")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    for m in _TOKEN.finditer(text):
        space, num, name, other = m.groups()
        if space:
            continue
        if num is not None:
            tokens.append(("num", num, m.start()))
        elif name is not None:
            tokens.append(("name", name, m.start()))
        elif other in ("+", "-", "*", "/", "^"):
            tokens.append((other, other, m.start()))
        else:
            raise PolyParseError(f"unexpected character {other!r}", text, m.start())
    tokens.append(("end", "", len(text)))
    return tokens


def parse_poly(text: str, chart: Chart) -> Poly:
    """Parse ``3/2*x^2*y - x + 1`` style text into a :class:`Poly` on ``chart``.

    A term is an optional rational coefficient and ``name`` or ``name^k``
    factors joined by ``*``.  Raises :class:`PolyParseError` with the offending
    column on any deviation, including negative exponents (``x^-1``) and
    names that are not chart coordinates.
    """
    if not isinstance(text, str):
        raise PolyParseError("polynomial must be a string", repr(text), 0)
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos]

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def factor() -> Poly:
        kind, val, at = take()
        if kind == "num":
            num = int(val)
            if peek()[0] == "/":
                take()
                kind2, val2, at2 = take()
                if kind2 != "num":
                    raise PolyParseError("expected integer denominator", text, at2)
                if int(val2) == 0:
                    raise PolyParseError("zero denominator", text, at2)
                return Poly.const(chart, Fraction(num, int(val2)))
            return Poly.const(chart, num)
        if kind == "name":
            if val not in chart.coords:
                raise PolyParseError(f"unknown coordinate {val!r}", text, at)
            exp = 1
            if peek()[0] == "^":
                take()
                kind2, val2, at2 = take()
                if kind2 != "num":
                    raise PolyParseError("expected non-negative integer exponent", text, at2)
                exp = int(val2)
            e = [0] * chart.dim
            e[chart.index(val)] = exp
            return Poly._raw(chart, {tuple(e): Fraction(1)})
        raise PolyParseError("expected a number or coordinate name", text, at)

    def term() -> Poly:
        p = factor()
        while peek()[0] == "*":
            take()
            p = p * factor()
        return p

    sign = 1
    if peek()[0] in ("+", "-"):
        sign = -1 if take()[0] == "-" else 1
    result = term().scale(sign)
    while peek()[0] in ("+", "-"):
        sign = -1 if take()[0] == "-" else 1
        result = result + term().scale(sign)
    kind, val, at = peek()
    if kind != "end":
        raise PolyParseError(f"unexpected token {val!r}", text, at)
    return result


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def partial_derivative(p: Poly, coord: str) -> Poly:
    return p.diff(coord)


class VectorField:
    """A polynomial vector field ``sum_a V_a d/dx_a`` on a chart."""

    __slots__ = ("chart", "components")

    def __init__(self, chart: Chart, components: Sequence[Poly]):
        components = tuple(components)
        if len(components) != chart.dim:
            raise ValueError(f"expected {chart.dim} components, got {len(components)}")
        for c in components:
            if not isinstance(c, Poly) or c.chart != chart:
                raise ChartMismatchError("vector field components must live on its chart")
        self.chart = chart
        self.components = components

    @classmethod
    def zero(cls, chart: Chart) -> "VectorField":
        z = Poly.zero(chart)
        return cls(chart, [z] * chart.dim)

    @classmethod
    def coordinate(cls, chart: Chart, name: str) -> "VectorField":
        k = chart.index(name)
        return cls(
            chart,
            [Poly.const(chart, 1 if a == k else 0) for a in range(chart.dim)],
        )

    @classmethod
    def parse(cls, texts: Sequence[str], chart: Chart) -> "VectorField":
        return cls(chart, [parse_poly(t, chart) for t in texts])

    def _check(self, other: "VectorField") -> None:
        if self.chart != other.chart:
            raise ChartMismatchError(
                f"chart mismatch: {self.chart.coords} vs {other.chart.coords}"
            )

    def __call__(self, f: Poly) -> Poly:
        return vf_apply(self, f)

    def bracket(self, other: "VectorField") -> "VectorField":
        return vf_bracket(self, other)

    def __add__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField(self.chart, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField(self.chart, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "VectorField":
        return VectorField(self.chart, [-a for a in self.components])

    def __rmul__(self, f) -> "VectorField":
        if isinstance(f, Poly) and f.chart != self.chart:
            raise ChartMismatchError("scalar function on a different chart")
        return VectorField(self.chart, [f * a for a in self.components])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.chart == other.chart and self.components == other.components

    def __hash__(self) -> int:
        return hash((self.chart, self.components))

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.components]

    def __str__(self) -> str:
        parts = [
            f"({c})*d_{name}"
            for name, c in zip(self.chart.coords, self.components)
            if not c.is_zero()
        ]
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"VectorField({self.to_strings()}, {list(self.chart.coords)})"


def vf_apply(V: VectorField, f: Poly) -> Poly:
    if V.chart != f.chart:
        raise ChartMismatchError(f"chart mismatch: {V.chart.coords} vs {f.chart.coords}")
    result = Poly.zero(f.chart)
    if f.is_zero():
        return result
    for name, c in zip(V.chart.coords, V.components):
        if not c.is_zero():
            d = f.diff(name)
            if not d.is_zero():
                result = result + c * d
    return result


def vf_bracket(V: VectorField, W: VectorField) -> VectorField:
    V._check(W)
    return VectorField(
        V.chart,
        [vf_apply(V, wa) - vf_apply(W, va) for va, wa in zip(V.components, W.components)],
    )


class ChartMap:
    """A polynomial map ``source -> target``: one formula per target coordinate."""

    __slots__ = ("source", "target", "formulas")

    def __init__(self, source: Chart, target: Chart, formulas: Sequence[Poly]):
        formulas = tuple(formulas)
        if len(formulas) != target.dim:
            raise ValueError(
                f"need {target.dim} formulas for target {target.coords}, got {len(formulas)}"
            )
        for f in formulas:
            if f.chart != source:
                raise ChartMismatchError("chart map formulas must live on the source chart")
        self.source = source
        self.target = target
        self.formulas = formulas

    @classmethod
    def identity(cls, chart: Chart) -> "ChartMap":
        return cls(chart, chart, [Poly.var(chart, n) for n in chart.coords])

    @classmethod
    def projection(cls, source: Chart, target_coords: Iterable[str]) -> "ChartMap":
        target = Chart(target_coords)
        for name in target.coords:
            source.index(name)
        return cls(source, target, [Poly.var(source, n) for n in target.coords])

    def projection_coords(self) -> tuple[str, ...] | None:
        """Target coordinate names if this is a coordinate projection, else None.

        A coordinate projection sends each target coordinate to the source
        coordinate of the same name.
        """
        for name, f in zip(self.target.coords, self.formulas):
            if name not in self.source.coords or f != Poly.var(self.source, name):
                return None
        return self.target.coords

    def pullback(self, p: Poly) -> Poly:
        """``p o phi`` for ``p`` on the target chart."""
        if p.chart != self.target:
            raise ChartMismatchError("pullback expects a polynomial on the target chart")
        return p.substitute(self.formulas, self.source)

    def compose(self, inner: "ChartMap") -> "ChartMap":
        """``self o inner``."""
        if inner.target != self.source:
            raise ChartMismatchError("cannot compose: inner target is not outer source")
        return ChartMap(inner.source, self.target, [inner.pullback(f) for f in self.formulas])

    def jacobian_apply(self, V: VectorField) -> list[Poly]:
        """Components of ``d(phi)(V)``: ``sum_b V_b d(phi_a)/dy_b`` for each target a."""
        if V.chart != self.source:
            raise ChartMismatchError("vector field must live on the source chart")
        return [vf_apply(V, f) for f in self.formulas]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChartMap):
            return NotImplemented
        return (self.source, self.target, self.formulas) == (
            other.source,
            other.target,
            other.formulas,
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.formulas))

    def __repr__(self) -> str:
        return (
            f"ChartMap({list(self.source.coords)} -> {list(self.target.coords)}, "
            f"{[str(f) for f in self.formulas]})"
        )


def pushforward_check(V: VectorField, W: VectorField, q: ChartMap) -> bool:
    """True iff ``V`` is q-related to ``W``: ``V(f o q) = W(f) o q`` for all f."""
    if V.chart != q.source or W.chart != q.target:
        raise ChartMismatchError("vector fields do not match the chart map")
    return all(
        lhs == q.pullback(wa) for lhs, wa in zip(q.jacobian_apply(V), W.components)
    )
