"""Lie algebroids presented by a global frame over a polynomial chart.

An algebroid of rank r over a chart with coordinates x_1..x_m is given by

* an anchor matrix: row i holds the components of rho(e_i) as a vector field,
* structure functions: for i < j, the coefficients c^k_ij in
  [e_i, e_j] = sum_k c^k_ij e_k.

Only pairs i < j are stored, so antisymmetry of the bracket is a property of
the representation.  The bracket of arbitrary sections is the Leibniz
expansion of the frame data, which makes the Leibniz identity hold by
construction.  What remains to be checked is that the anchor is a
homomorphism and the Jacobi identity; both reduce to finitely many exact
polynomial identities on the frame.

Indices are 0-based in Python and 1-based in files and reports.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactpoly import IDENTIFIER, Chart, Poly, VectorField, parse_poly
from .report import CheckReport

__all__ = [
    "Algebroid",
    "AlgebroidMismatchError",
    "Section",
    "SAMPLE_COEFFICIENTS",
    "anchor_generic_rank",
    "anchor_of",
    "bracket",
    "check_anchor_homomorphism",
    "check_axioms",
    "check_jacobi_frame",
    "check_jacobi_random",
    "field_witness",
    "random_poly",
    "random_section",
    "section_witness",
]

SAMPLE_COEFFICIENTS = tuple(Fraction(c) for c in ("-2", "-1", "-1/2", "1/2", "1", "2"))


class AlgebroidMismatchError(ValueError):
    """Sections or derivations of different algebroids were combined."""


def _to_poly(value, chart: Chart) -> Poly:
    if isinstance(value, Poly):
        if value.chart != chart:
            raise ValueError(f"polynomial on chart {value.chart.coords}, expected {chart.coords}")
        return value
    if isinstance(value, str):
        return parse_poly(value, chart)
    return Poly.const(chart, value)


class Algebroid:
    """A Lie algebroid presentation: base chart, frame, anchor, structure functions.

    ``structure`` maps 0-based pairs ``(i, j)`` with ``i < j`` to the r
    coefficients of ``[e_i, e_j]``.  Omitted pairs bracket to zero; all-zero
    entries are dropped so that equal presentations compare equal.  Entries
    may be given as :class:`Poly`, numbers or polynomial strings.
    """

    __slots__ = ("base", "frame", "anchor", "structure", "name")

    def __init__(
        self,
        base: Chart,
        frame: Sequence[str],
        anchor: Sequence[Sequence],
        structure: Mapping[tuple[int, int], Sequence] | None = None,
        name: str = "",
    ):
        frame = tuple(frame)
        for f in frame:
            if not isinstance(f, str) or not IDENTIFIER.match(f):
                raise ValueError(f"invalid frame name {f!r}")
        if len(set(frame)) != len(frame):
            raise ValueError(f"duplicate frame names in {frame}")
        r, m = len(frame), base.dim
        if len(anchor) != r:
            raise ValueError(f"anchor needs {r} rows, got {len(anchor)}")
        rows = []
        for row in anchor:
            if len(row) != m:
                raise ValueError(f"anchor rows need {m} entries, got {len(row)}")
            rows.append(tuple(_to_poly(v, base) for v in row))
        struct: dict[tuple[int, int], tuple[Poly, ...]] = {}
        for key, vec in sorted((structure or {}).items()):
            i, j = key
            if not (0 <= i < j < r):
                raise ValueError(f"structure pair {key} must satisfy 0 <= i < j < rank")
            if len(vec) != r:
                raise ValueError(f"structure vector for {key} needs {r} entries")
            vec = tuple(_to_poly(v, base) for v in vec)
            if any(not c.is_zero() for c in vec):
                struct[(i, j)] = vec
        self.base = base
        self.frame = frame
        self.anchor = tuple(rows)
        self.structure = struct
        self.name = name

    @property
    def rank(self) -> int:
        return len(self.frame)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Algebroid):
            return NotImplemented
        return self is other or (
            self.base == other.base
            and self.frame == other.frame
            and self.anchor == other.anchor
            and self.structure == other.structure
        )

    def __hash__(self) -> int:
        return hash((self.base, self.frame, self.anchor, tuple(self.structure.items())))

    def same_data(self, other: "Algebroid") -> bool:
        """Equal anchor and structure functions, ignoring frame names."""
        return (
            self.base == other.base
            and self.anchor == other.anchor
            and self.structure == other.structure
        )

    def __repr__(self) -> str:
        label = f"{self.name!r}, " if self.name else ""
        return f"Algebroid({label}rank={self.rank}, base={list(self.base.coords)})"

    def renamed(self, name: str) -> "Algebroid":
        return Algebroid(self.base, self.frame, self.anchor, self.structure, name)

    def structure_vector(self, i: int, j: int) -> tuple[Poly, ...]:
        """Coefficients of ``[e_i, e_j]`` for any ordered pair."""
        if i < j:
            vec = self.structure.get((i, j))
            return vec if vec is not None else (Poly.zero(self.base),) * self.rank
        if i > j:
            vec = self.structure.get((j, i))
            return tuple(-c for c in vec) if vec is not None else (Poly.zero(self.base),) * self.rank
        return (Poly.zero(self.base),) * self.rank

    def anchor_field(self, i: int) -> VectorField:
        return VectorField(self.base, self.anchor[i])

    def frame_section(self, i: int) -> "Section":
        one, zero = Poly.const(self.base, 1), Poly.zero(self.base)
        return Section(self, [one if k == i else zero for k in range(self.rank)])

    def zero_section(self) -> "Section":
        return Section(self, [Poly.zero(self.base)] * self.rank)

    def section(self, *coeffs) -> "Section":
        """Build a section from polynomials, numbers or polynomial strings."""
        return Section(self, [_to_poly(c, self.base) for c in coeffs])

    def poly(self, text) -> Poly:
        return _to_poly(text, self.base)


class Section:
    """A section ``sum_i f_i e_i`` with polynomial coefficients."""

    __slots__ = ("algebroid", "coeffs")

    def __init__(self, algebroid: Algebroid, coeffs: Sequence[Poly]):
        coeffs = tuple(coeffs)
        if len(coeffs) != algebroid.rank:
            raise ValueError(f"section needs {algebroid.rank} coefficients, got {len(coeffs)}")
        for c in coeffs:
            if not isinstance(c, Poly) or c.chart != algebroid.base:
                raise ValueError("section coefficients must live on the base chart")
        self.algebroid = algebroid
        self.coeffs = coeffs

    def _same(self, other: "Section") -> None:
        if other.algebroid is not self.algebroid and other.algebroid != self.algebroid:
            raise AlgebroidMismatchError("sections belong to different algebroids")

    def __add__(self, other: "Section") -> "Section":
        self._same(other)
        return Section(self.algebroid, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "Section") -> "Section":
        self._same(other)
        return Section(self.algebroid, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "Section":
        return Section(self.algebroid, [-a for a in self.coeffs])

    def __rmul__(self, f) -> "Section":
        f = _to_poly(f, self.algebroid.base)
        return Section(self.algebroid, [f * a for a in self.coeffs])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Section):
            return NotImplemented
        return self.algebroid == other.algebroid and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __str__(self) -> str:
        parts = [
            f"({c})*{name}"
            for name, c in zip(self.algebroid.frame, self.coeffs)
            if not c.is_zero()
        ]
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"Section({self.to_strings()})"


def anchor_of(s: Section) -> VectorField:
    A = s.algebroid
    comps = [Poly.zero(A.base) for _ in range(A.base.dim)]
    for f, row in zip(s.coeffs, A.anchor):
        if f.is_zero():
            continue
        for a, rho in enumerate(row):
            if not rho.is_zero():
                comps[a] = comps[a] + f * rho
    return VectorField(A.base, comps)


def bracket(s: Section, t: Section) -> Section:
    """Bracket of arbitrary sections by Leibniz expansion of the frame data.

    Coefficient k is ``sum_{i<j} (f_i g_j - f_j g_i) c^k_ij + rho(s)(g_k) - rho(t)(f_k)``.
    """
    s._same(t)
    A = s.algebroid
    f, g = s.coeffs, t.coeffs
    rs, rt = anchor_of(s), anchor_of(t)
    out = [rs(gk) - rt(fk) for fk, gk in zip(f, g)]
    for (i, j), vec in A.structure.items():
        w = f[i] * g[j] - f[j] * g[i]
        if w.is_zero():
            continue
        for k, c in enumerate(vec):
            if not c.is_zero():
                out[k] = out[k] + w * c
    return Section(A, out)


def field_witness(V: VectorField) -> dict[str, str]:
    return {name: str(c) for name, c in zip(V.chart.coords, V.components)}


def section_witness(s: Section) -> dict[str, str]:
    return {name: str(c) for name, c in zip(s.algebroid.frame, s.coeffs)}


def _subject(A: Algebroid) -> str:
    return A.name or "algebroid"


def check_anchor_homomorphism(A: Algebroid) -> CheckReport:
    """``[rho(e_i), rho(e_j)] = sum_k c^k_ij rho(e_k)`` for every pair i < j."""
    fields = [A.anchor_field(i) for i in range(A.rank)]
    failures = []
    for i in range(A.rank):
        for j in range(i + 1, A.rank):
            residual = fields[i].bracket(fields[j])
            for k, c in enumerate(A.structure_vector(i, j)):
                if not c.is_zero():
                    residual = residual - c * fields[k]
            if not residual.is_zero():
                failures.append(((i, j), residual))
    if not failures:
        return CheckReport.single(_subject(A), "anchor_hom", True)
    (i, j), residual = failures[0]
    witness = {"pair": [i + 1, j + 1], "residual": field_witness(residual)}
    if len(failures) > 1:
        witness["failing_pairs"] = len(failures)
    return CheckReport.single(_subject(A), "anchor_hom", False, witness)


def jacobiator(s: Section, t: Section, u: Section) -> Section:
    return bracket(s, bracket(t, u)) + bracket(t, bracket(u, s)) + bracket(u, bracket(s, t))


def check_jacobi_frame(A: Algebroid) -> CheckReport:
    """Cyclic Jacobi sum on every frame triple i < j < k."""
    frame = [A.frame_section(i) for i in range(A.rank)]
    failures = []
    for i in range(A.rank):
        for j in range(i + 1, A.rank):
            for k in range(j + 1, A.rank):
                residual = jacobiator(frame[i], frame[j], frame[k])
                if not residual.is_zero():
                    failures.append(((i, j, k), residual))
    if not failures:
        return CheckReport.single(_subject(A), "jacobi_frame", True)
    (i, j, k), residual = failures[0]
    witness = {"triple": [i + 1, j + 1, k + 1], "residual": section_witness(residual)}
    if len(failures) > 1:
        witness["failing_triples"] = len(failures)
    return CheckReport.single(_subject(A), "jacobi_frame", False, witness)


def random_poly(chart: Chart, rng: random.Random, max_degree: int) -> Poly:
    """Sum of one to three distinct monomials of degree <= max_degree, each with
    a coefficient drawn from the sample set."""
    terms: dict[tuple[int, ...], Fraction] = {}
    for _ in range(rng.randint(1, 3)):
        c = rng.choice(SAMPLE_COEFFICIENTS)
        exps = [0] * chart.dim
        if chart.dim:
            for _ in range(rng.randint(0, max_degree)):
                exps[rng.randrange(chart.dim)] += 1
        terms.setdefault(tuple(exps), c)
    return Poly(chart, terms)


def random_section(A: Algebroid, rng: random.Random, max_degree: int) -> Section:
    return Section(A, [random_poly(A.base, rng, max_degree) for _ in range(A.rank)])


def check_jacobi_random(
    A: Algebroid, n: int = 25, max_degree: int = 2, seed: int = 42
) -> CheckReport:
    """Jacobi identity on ``n`` random triples of sections, reproducible from ``seed``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = random.Random(seed)
    if A.rank:
        for trial in range(n):
            s, t, u = (random_section(A, rng, max_degree) for _ in range(3))
            residual = jacobiator(s, t, u)
            if not residual.is_zero():
                witness = {
                    "seed": seed,
                    "trial": trial + 1,
                    "sections": {
                        "s": section_witness(s),
                        "t": section_witness(t),
                        "u": section_witness(u),
                    },
                    "residual": section_witness(residual),
                }
                return CheckReport.single(_subject(A), "jacobi_random", False, witness)
    return CheckReport.single(_subject(A), "jacobi_random", True)


def check_axioms(
    A: Algebroid,
    suite: str = "all",
    n: int = 25,
    max_degree: int = 2,
    seed: int = 42,
) -> CheckReport:
    """Run a named suite: ``axioms`` (anchor + frame Jacobi), ``jacobi`` or ``all``."""
    parts = []
    if suite in ("axioms", "all"):
        parts.append(check_anchor_homomorphism(A))
    if suite in ("axioms", "jacobi", "all"):
        parts.append(check_jacobi_frame(A))
    if suite in ("jacobi", "all"):
        parts.append(check_jacobi_random(A, n, max_degree, seed))
    if not parts:
        raise ValueError(f"unknown suite {suite!r}")
    return CheckReport.merge(_subject(A), parts)


def _poly_size(p: Poly) -> tuple[int, int]:
    return (len(p.terms), p.degree)


def matrix_generic_rank(rows: Iterable[Sequence[Poly]]) -> int:
    """Rank over the rational function field by fraction-free elimination.

    Row operations ``row <- p*row - a*pivot`` never divide, and multiplying
    by a nonzero polynomial keeps the rank over the fraction field.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        candidates = [r for r in range(rank, len(rows)) if not rows[r][col].is_zero()]
        if not candidates:
            continue
        piv = min(candidates, key=lambda r: _poly_size(rows[r][col]))
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pivot_row = rows[rank]
        p = pivot_row[col]
        for r in range(rank + 1, len(rows)):
            a = rows[r][col]
            if a.is_zero():
                continue
            rows[r] = [p * x - a * y for x, y in zip(rows[r], pivot_row)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def anchor_generic_rank(A: Algebroid) -> int:
    return matrix_generic_rank(A.anchor)
