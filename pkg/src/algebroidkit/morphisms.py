"""Bundle maps between algebroids over polynomial chart maps.

A morphism from ``source`` (frame f_1..f_s over N) to ``target`` (frame
e_1..e_r over M) over ``phi: N -> M`` is a matrix with
``Phi(f_i) = sum_j matrix[j][i] phi*(e_j)``.  Pulled-back frame sections form
a basis of the pullback bundle, so every section has exactly one
decomposition against them; this canonical decomposition is what the
bracket condition is evaluated on.
"""
from __future__ import annotations

from typing import Sequence

from .algebroid import Algebroid, Section, anchor_of, bracket
from .exactpoly import ChartMap, Poly
from .report import CheckItem, CheckReport

__all__ = [
    "AlgebroidMorphism",
    "anchor_morphism",
    "check_decomposition_bracket",
    "check_morphism",
    "compose_morphisms",
    "flatten_decomposition",
    "phi_decompose",
]


class AlgebroidMorphism:
    __slots__ = ("source", "target", "base_map", "matrix", "name")

    def __init__(
        self,
        source: Algebroid,
        target: Algebroid,
        base_map: ChartMap,
        matrix: Sequence[Sequence],
        name: str = "",
    ):
        if base_map.source != source.base or base_map.target != target.base:
            raise ValueError("base map must go from the source base to the target base")
        if len(matrix) != target.rank or any(len(row) != source.rank for row in matrix):
            raise ValueError(f"morphism matrix must be {target.rank}x{source.rank}")
        self.source = source
        self.target = target
        self.base_map = base_map
        self.matrix = tuple(tuple(source.poly(v) for v in row) for row in matrix)
        self.name = name

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebroidMorphism):
            return NotImplemented
        return (self.source, self.target, self.base_map, self.matrix) == (
            other.source,
            other.target,
            other.base_map,
            other.matrix,
        )

    def __hash__(self) -> int:
        return hash((self.base_map, self.matrix))

    def __repr__(self) -> str:
        return f"AlgebroidMorphism({self.source!r} -> {self.target!r})"


def phi_decompose(F: AlgebroidMorphism, s: Section) -> list[Poly]:
    """Coefficients ``g_j = sum_i f_i Phi^j_i`` of ``Phi(s)`` against ``phi*(e_j)``."""
    if s.algebroid != F.source:
        raise ValueError("section does not belong to the morphism's source")
    out = []
    for row in F.matrix:
        acc = Poly.zero(F.source.base)
        for f, a in zip(s.coeffs, row):
            if not f.is_zero() and not a.is_zero():
                acc = acc + f * a
        out.append(acc)
    return out


def flatten_decomposition(
    F: AlgebroidMorphism, decomposition: Sequence[tuple[Poly, Section]]
) -> list[Poly]:
    """Canonical coefficients of ``sum_i h_i phi*(X_i)`` for target sections X_i."""
    out = [Poly.zero(F.source.base) for _ in range(F.target.rank)]
    for h, X in decomposition:
        if X.algebroid != F.target:
            raise ValueError("decomposition sections must belong to the target")
        for j, c in enumerate(X.coeffs):
            if not c.is_zero():
                out[j] = out[j] + h * F.base_map.pullback(c)
    return out


def check_decomposition_bracket(
    F: AlgebroidMorphism,
    Y: Section,
    decomp: Sequence[tuple[Poly, Section]],
    Y2: Section,
    decomp2: Sequence[tuple[Poly, Section]],
) -> bool:
    """Is the three-term combination built from two arbitrary decompositions
    a decomposition of ``Phi([Y, Y2])``?

    Decompositions are lists of ``(h, X)`` with h on N and X a target section.
    Both inputs must actually decompose ``Phi(Y)`` and ``Phi(Y2)``.
    """
    if flatten_decomposition(F, decomp) != phi_decompose(F, Y):
        raise ValueError("first decomposition does not represent Phi(Y)")
    if flatten_decomposition(F, decomp2) != phi_decompose(F, Y2):
        raise ValueError("second decomposition does not represent Phi(Y2)")
    rY, rY2 = anchor_of(Y), anchor_of(Y2)
    terms: list[tuple[Poly, Section]] = []
    for h, X in decomp:
        for h2, X2 in decomp2:
            terms.append((h * h2, bracket(X, X2)))
    for h2, X2 in decomp2:
        terms.append((rY(h2), X2))
    for h, X in decomp:
        terms.append((-rY2(h), X))
    return flatten_decomposition(F, terms) == phi_decompose(F, bracket(Y, Y2))


def check_morphism(F: AlgebroidMorphism, subject: str | None = None) -> CheckReport:
    """Anchor compatibility ``rho o Phi = d(phi) o rho`` and bracket compatibility
    on every source frame pair, both as exact identities over N."""
    S, T, phi = F.source, F.target, F.base_map
    subject = subject or F.name or "morphism"
    target_anchor = [[phi.pullback(c) for c in row] for row in T.anchor]

    anchor_item = CheckItem("morphism_anchor", True)
    for i in range(S.rank):
        lhs = [Poly.zero(S.base) for _ in range(T.base.dim)]
        for j in range(T.rank):
            Pji = F.matrix[j][i]
            if Pji.is_zero():
                continue
            for a in range(T.base.dim):
                lhs[a] = lhs[a] + Pji * target_anchor[j][a]
        rhs = phi.jacobian_apply(S.anchor_field(i))
        if lhs != rhs:
            diff = {name: str(l - r) for name, l, r in zip(T.base.coords, lhs, rhs)}
            anchor_item = CheckItem(
                "morphism_anchor", False, {"index": [i + 1], "residual": diff}
            )
            break

    # structure functions of the target, pulled back to N
    pulled = {
        key: tuple(phi.pullback(c) for c in vec) for key, vec in T.structure.items()
    }

    def target_c(k: int, l: int) -> tuple[Poly, ...] | None:
        if k < l:
            return pulled.get((k, l))
        if k > l:
            vec = pulled.get((l, k))
            return tuple(-c for c in vec) if vec is not None else None
        return None

    bracket_item = CheckItem("morphism_bracket", True)
    frame = [S.frame_section(i) for i in range(S.rank)]
    for i in range(S.rank):
        for i2 in range(i + 1, S.rank):
            lhs = phi_decompose(F, bracket(frame[i], frame[i2]))
            rho_i, rho_i2 = S.anchor_field(i), S.anchor_field(i2)
            rhs = []
            for m in range(T.rank):
                acc = rho_i(F.matrix[m][i2]) - rho_i2(F.matrix[m][i])
                rhs.append(acc)
            for k in range(T.rank):
                a = F.matrix[k][i]
                if a.is_zero():
                    continue
                for l in range(T.rank):
                    b = F.matrix[l][i2]
                    c = target_c(k, l)
                    if b.is_zero() or c is None:
                        continue
                    ab = a * b
                    for m in range(T.rank):
                        if not c[m].is_zero():
                            rhs[m] = rhs[m] + ab * c[m]
            if lhs != rhs:
                diff = {name: str(x - y) for name, x, y in zip(T.frame, lhs, rhs)}
                bracket_item = CheckItem(
                    "morphism_bracket", False, {"pair": [i + 1, i2 + 1], "residual": diff}
                )
                break
        if not bracket_item.passed:
            break
    return CheckReport(subject, (anchor_item, bracket_item))


def compose_morphisms(G: AlgebroidMorphism, F: AlgebroidMorphism) -> AlgebroidMorphism:
    """``G o F`` for ``F: K -> H`` and ``G: H -> L``."""
    if F.target != G.source:
        raise ValueError("cannot compose: F's target is not G's source")
    phi_F = F.base_map
    G_pulled = [[phi_F.pullback(c) for c in row] for row in G.matrix]
    K = F.source
    matrix = []
    for row in G_pulled:
        out_row = []
        for i in range(K.rank):
            acc = Poly.zero(K.base)
            for j, g in enumerate(row):
                f = F.matrix[j][i]
                if not g.is_zero() and not f.is_zero():
                    acc = acc + g * f
            out_row.append(acc)
        matrix.append(out_row)
    return AlgebroidMorphism(K, G.target, G.base_map.compose(phi_F), matrix)


def anchor_morphism(A: Algebroid, tangent: Algebroid) -> AlgebroidMorphism:
    """The anchor viewed as a morphism ``A -> T(M)`` over the identity."""
    m = A.base.dim
    matrix = [[A.anchor[i][a] for i in range(A.rank)] for a in range(m)]
    return AlgebroidMorphism(
        A, tangent, ChartMap.identity(A.base), matrix, name=f"anchor of {A.name or 'algebroid'}"
    )

