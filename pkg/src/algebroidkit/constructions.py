"""Builders for standard algebroids, infinitesimal actions and semi-direct products.

Poisson sign convention
-----------------------
For a bivector with components ``P[a][b]`` the cotangent algebroid has frame
``dx_1..dx_m`` and anchor ``-P~`` where ``P~(dx_a) = sum_b P[a][b] d/dx_b``.
With that anchor the exact-form bracket has to carry a minus sign,

    [dx_a, dx_b] = - sum_k (d P[a][b] / dx_k) dx_k,

for the anchor to be a homomorphism.  With the opposite bracket sign the
Lie-Poisson structure on so(3)* fails the anchor check, which
``tests/test_constructions.py`` pins.

Actions and extensions
----------------------
The submersion ``q: N -> M`` is always a coordinate projection, so pulling a
function back along q only renames variables.  An action is given on the
frame of the acting algebroid: one derivation of the acted algebroid per
frame element.  Split extensions use an adapted frame: the first r frame
elements of the total algebroid are the lifted ``q*e_i``, the last s are the
sub-algebroid.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .algebroid import (
    Algebroid,
    Section,
    bracket,
    check_anchor_homomorphism,
    check_axioms,
    field_witness,
    section_witness,
)
from .derivations import Derivation, check_derivation, der_bracket
from .exactpoly import Chart, ChartMap, Poly, VectorField, pushforward_check
from .morphisms import AlgebroidMorphism
from .report import CheckItem, CheckReport

__all__ = [
    "ActionError",
    "AlgebroidAction",
    "Curvature",
    "CurvatureError",
    "ExtensionError",
    "InfinitesimalGroupAction",
    "LieAlgebraPresentation",
    "PoissonBivector",
    "SplitExtension",
    "check_action",
    "check_flat",
    "curvature_form",
    "foliation",
    "lie_algebra",
    "lie_algebra_bundle",
    "poisson_cotangent",
    "reconstruct_from_split",
    "semidirect_inclusion",
    "semidirect_product",
    "semidirect_projection",
    "sl2_algebra",
    "so3_algebra",
    "split_extension_of",
    "tangent_algebroid",
    "transformation_algebroid",
    "vector_bundle",
    "zero_algebroid",
]


class ActionError(ValueError):
    """An action failed its checks and no override was given."""

    def __init__(self, report: CheckReport):
        failed = [it.check for it in report.items if not it.passed]
        super().__init__(f"action check failed: {', '.join(failed)}")
        self.report = report


class ExtensionError(ValueError):
    """A split extension's sub-algebroid block does not match the sub-algebroid."""


class CurvatureError(ValueError):
    """Reconstruction requires a bracket-preserving splitting."""


# -- Lie algebras ---------------------------------------------------------


@dataclass(frozen=True)
class LieAlgebraPresentation:
    """Structure constants ``c^k_ij`` (rational, 0-based, i < j)."""

    basis_names: tuple[str, ...]
    constants: Mapping[tuple[int, int], tuple[Fraction, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "basis_names", tuple(self.basis_names))
        n = len(self.basis_names)
        clean = {}
        for (i, j), vec in sorted(self.constants.items()):
            if not 0 <= i < j < n or len(vec) != n:
                raise ValueError(f"bad structure constant entry {(i, j)}")
            vec = tuple(Fraction(v) for v in vec)
            if any(vec):
                clean[(i, j)] = vec
        object.__setattr__(self, "constants", clean)

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    def structure_on(self, chart: Chart) -> dict[tuple[int, int], tuple[Poly, ...]]:
        return {
            key: tuple(Poly.const(chart, c) for c in vec) for key, vec in self.constants.items()
        }

    def matrix_ad(self, i: int) -> list[list[Fraction]]:
        """Matrix of ``ad(xi_i)``: column j holds the coefficients of ``[xi_i, xi_j]``."""
        n = self.dim
        out = [[Fraction(0)] * n for _ in range(n)]
        for j in range(n):
            if i < j:
                vec = self.constants.get((i, j))
                sign = 1
            elif i > j:
                vec = self.constants.get((j, i))
                sign = -1
            else:
                vec = None
            if vec:
                for k in range(n):
                    out[k][j] = sign * vec[k]
        return out


def so3_algebra(names=("e1", "e2", "e3")) -> LieAlgebraPresentation:
    return LieAlgebraPresentation(
        names, {(0, 1): (0, 0, 1), (1, 2): (1, 0, 0), (0, 2): (0, -1, 0)}
    )


def sl2_algebra(names=("h", "e", "f")) -> LieAlgebraPresentation:
    # [h,e] = 2e, [h,f] = -2f, [e,f] = h
    return LieAlgebraPresentation(
        names, {(0, 1): (0, 2, 0), (0, 2): (0, 0, -2), (1, 2): (1, 0, 0)}
    )


def lie_algebra(algebra: LieAlgebraPresentation, name: str = "") -> Algebroid:
    """A finite-dimensional Lie algebra as an algebroid over a point."""
    point = Chart([])
    return Algebroid(
        point, algebra.basis_names, [[] for _ in range(algebra.dim)],
        algebra.structure_on(point), name,
    )


# -- basic algebroids -----------------------------------------------------


def tangent_algebroid(chart: Chart, name: str = "") -> Algebroid:
    """``T(M)`` with the coordinate frame ``d_x``: identity anchor, zero structure."""
    m = chart.dim
    anchor = [[1 if a == b else 0 for b in range(m)] for a in range(m)]
    return Algebroid(chart, [f"d_{c}" for c in chart.coords], anchor, {}, name)


def zero_algebroid(chart: Chart, name: str = "") -> Algebroid:
    return Algebroid(chart, [], [], {}, name)


def vector_bundle(chart: Chart, frame: Sequence[str], name: str = "") -> Algebroid:
    """A trivial vector bundle with zero anchor and zero bracket."""
    return Algebroid(chart, frame, [[0] * chart.dim for _ in frame], {}, name)


def lie_algebra_bundle(
    chart: Chart,
    frame: Sequence[str],
    structure: Mapping[tuple[int, int], Sequence],
    name: str = "",
) -> Algebroid:
    """A bundle of Lie algebras: zero anchor, fibrewise structure functions."""
    return Algebroid(chart, frame, [[0] * chart.dim for _ in frame], structure, name)


def foliation(
    fields: Sequence[VectorField],
    frame: Sequence[str],
    structure: Mapping[tuple[int, int], Sequence] | None = None,
    name: str = "",
) -> Algebroid:
    """The algebroid spanned by the given vector fields, bracket given on the frame."""
    chart = fields[0].chart
    return Algebroid(chart, frame, [f.components for f in fields], structure or {}, name)


@dataclass(frozen=True)
class InfinitesimalGroupAction:
    """A Lie algebra with one vector field per basis element on a chart."""

    algebra: LieAlgebraPresentation
    chart: Chart
    fields: tuple[VectorField, ...]

    def __post_init__(self):
        object.__setattr__(self, "fields", tuple(self.fields))
        if len(self.fields) != self.algebra.dim:
            raise ValueError("need one vector field per basis element")
        for f in self.fields:
            if f.chart != self.chart:
                raise ValueError("action fields must live on the action's chart")


def transformation_algebroid(
    action: InfinitesimalGroupAction, name: str = ""
) -> tuple[Algebroid, CheckReport]:
    """Trivial bundle ``g x M`` with anchor ``gamma`` and constant structure functions.

    The report's ``anchor_hom`` item says whether gamma is a homomorphism.
    """
    A = Algebroid(
        action.chart,
        action.algebra.basis_names,
        [f.components for f in action.fields],
        action.algebra.structure_on(action.chart),
        name or "transformation algebroid",
    )
    return A, check_anchor_homomorphism(A)


@dataclass(frozen=True)
class PoissonBivector:
    """Components ``P[a][b]`` for a < b (0-based); antisymmetric by construction."""

    chart: Chart
    components: Mapping[tuple[int, int], Poly]

    def __post_init__(self):
        clean = {}
        for (a, b), p in sorted(self.components.items()):
            if not 0 <= a < b < self.chart.dim:
                raise ValueError(f"bivector component {(a, b)} must have a < b")
            if not isinstance(p, Poly):
                p = Poly.parse(p, self.chart) if isinstance(p, str) else Poly.const(self.chart, p)
            if p.chart != self.chart:
                raise ValueError("bivector components must live on its chart")
            if not p.is_zero():
                clean[(a, b)] = p
        object.__setattr__(self, "components", clean)

    def component(self, a: int, b: int) -> Poly:
        if a < b:
            return self.components.get((a, b), Poly.zero(self.chart))
        if a > b:
            return -self.components.get((b, a), Poly.zero(self.chart))
        return Poly.zero(self.chart)


def poisson_cotangent(
    bivector: PoissonBivector, name: str = ""
) -> tuple[Algebroid, CheckReport]:
    """Cotangent algebroid of a bivector; the report runs both frame checks.

    Both checks pass exactly when the bivector is Poisson.
    """
    chart = bivector.chart
    m = chart.dim
    anchor = [[-bivector.component(a, b) for b in range(m)] for a in range(m)]
    structure = {}
    for (a, b), p in bivector.components.items():
        structure[(a, b)] = [-p.diff(x) for x in chart.coords]
    A = Algebroid(
        chart, [f"d{x}" for x in chart.coords], anchor, structure,
        name or "poisson cotangent algebroid",
    )
    return A, check_axioms(A, suite="axioms")


# -- actions ----------------------------------------------------------------


class AlgebroidAction:
    """An action of ``acting`` (over M) on ``acted`` (over N) along a projection q.

    ``nabla[i]`` is the derivation ``(nabla_i, R_i)`` assigned to the i-th
    frame element of ``acting``.
    """

    __slots__ = ("acting", "acted", "q", "nabla", "name")

    def __init__(
        self,
        acting: Algebroid,
        acted: Algebroid,
        q: ChartMap,
        nabla: Sequence[Derivation],
        name: str = "",
    ):
        if q.source != acted.base or q.target != acting.base:
            raise ValueError("q must map the acted base onto the acting base")
        if q.projection_coords() is None:
            raise ValueError("q must be a coordinate projection")
        nabla = tuple(nabla)
        if len(nabla) != acting.rank:
            raise ValueError(f"need {acting.rank} derivations, got {len(nabla)}")
        for d in nabla:
            if d.algebroid != acted:
                raise ValueError("action derivations must act on the acted algebroid")
        self.acting = acting
        self.acted = acted
        self.q = q
        self.nabla = nabla
        self.name = name

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebroidAction):
            return NotImplemented
        return (self.acting, self.acted, self.q, self.nabla) == (
            other.acting,
            other.acted,
            other.q,
            other.nabla,
        )

    def __hash__(self) -> int:
        return hash((self.q, self.nabla))

    def __repr__(self) -> str:
        return f"AlgebroidAction({self.acting!r} on {self.acted!r})"


def _first_failure(reports: Sequence[tuple[int, CheckReport]], check: str) -> CheckItem:
    for i, rep in reports:
        it = rep.item(check)
        if not it.passed:
            return CheckItem(check, False, {"nabla": [i + 1], **it.witness})
    return CheckItem(check, True)


def check_action(act: AlgebroidAction, subject: str | None = None) -> CheckReport:
    """Derivation axioms for every nabla_i, the family condition on the acted
    anchor, projectability of each R_i, and the homomorphism condition on
    frame pairs."""
    G, H, q = act.acting, act.acted, act.q
    subject = subject or act.name or "action"

    der_reports = [(i, check_derivation(d)) for i, d in enumerate(act.nabla)]
    items = [_first_failure(der_reports, "derivation_i"), _first_failure(der_reports, "derivation_iii")]

    zero_M = VectorField.zero(G.base)
    family = CheckItem("action_family", True)
    for k in range(H.rank):
        V = H.anchor_field(k)
        if not pushforward_check(V, zero_M, q):
            residual = VectorField(G.base, q.jacobian_apply(V))
            family = CheckItem(
                "action_family", False, {"index": [k + 1], "residual": field_witness(residual)}
            )
            break
    items.append(family)

    project = CheckItem("action_project", True)
    for i, d in enumerate(act.nabla):
        W = G.anchor_field(i)
        if not pushforward_check(d.field, W, q):
            residual = [
                lhs - q.pullback(w) for lhs, w in zip(q.jacobian_apply(d.field), W.components)
            ]
            project = CheckItem(
                "action_project",
                False,
                {"index": [i + 1], "residual": {n: str(p) for n, p in zip(G.base.coords, residual)}},
            )
            break
    items.append(project)

    hom = CheckItem("action_hom", True)
    for i in range(G.rank):
        for j in range(i + 1, G.rank):
            lhs = der_bracket(act.nabla[i], act.nabla[j])
            rhs = Derivation.zero(H)
            for k, c in enumerate(G.structure_vector(i, j)):
                if not c.is_zero():
                    rhs = rhs + act.nabla[k].scale(q.pullback(c))
            diff = lhs - rhs
            if not diff.is_zero():
                hom = CheckItem(
                    "action_hom",
                    False,
                    {
                        "pair": [i + 1, j + 1],
                        "matrix_residual": [[str(a) for a in row] for row in diff.matrix],
                        "field_residual": field_witness(diff.field),
                    },
                )
                break
        if not hom.passed:
            break
    items.append(hom)
    return CheckReport(subject, tuple(items))


def _product_frame(acting: Algebroid, acted: Algebroid) -> list[str]:
    g_names = list(acting.frame)
    if set(g_names) & set(acted.frame):
        g_names = [f"q_{n}" for n in g_names]
    return g_names + list(acted.frame)


def semidirect_product(
    act: AlgebroidAction, force: bool = False, name: str = ""
) -> Algebroid:
    """The semi-direct product over N with frame ``(q*e_1..q*e_r, f_1..f_s)``.

    The action is checked first and :class:`ActionError` raised on failure
    unless ``force`` is set, which builds the (then invalid) product anyway.
    """
    if not force:
        report = check_action(act)
        if not report.passed:
            raise ActionError(report)
    G, H, q = act.acting, act.acted, act.q
    r, s = G.rank, H.rank
    N = H.base
    zero = Poly.zero(N)
    anchor = [d.field.components for d in act.nabla] + [row for row in H.anchor]
    structure: dict[tuple[int, int], list[Poly]] = {}
    for (i, j), vec in G.structure.items():
        structure[(i, j)] = [q.pullback(c) for c in vec] + [zero] * s
    for i, d in enumerate(act.nabla):
        for k in range(s):
            structure[(i, r + k)] = [zero] * r + [d.matrix[l][k] for l in range(s)]
    for (k, l), vec in H.structure.items():
        structure[(r + k, r + l)] = [zero] * r + list(vec)
    label = name or f"{G.name or 'g'} x| {H.name or 'h'}"
    return Algebroid(N, _product_frame(G, H), anchor, structure, label)


def semidirect_inclusion(act: AlgebroidAction, product: Algebroid | None = None) -> AlgebroidMorphism:
    """``j(Y) = 0 + Y`` from the acted algebroid into the product, over the identity of N."""
    product = product or semidirect_product(act, force=True)
    r, s = act.acting.rank, act.acted.rank
    matrix = [[int(row == r + k) for k in range(s)] for row in range(r + s)]
    return AlgebroidMorphism(act.acted, product, ChartMap.identity(act.acted.base), matrix, "inclusion")


def semidirect_projection(act: AlgebroidAction, product: Algebroid | None = None) -> AlgebroidMorphism:
    """``q*X + Y -> X`` from the product onto the acting algebroid, over q."""
    product = product or semidirect_product(act, force=True)
    r, s = act.acting.rank, act.acted.rank
    matrix = [[int(col == row) for col in range(r + s)] for row in range(r)]
    return AlgebroidMorphism(product, act.acting, act.q, matrix, "projection")


# -- split extensions -------------------------------------------------------


@dataclass(frozen=True)
class SplitExtension:
    """``0 -> sub -> total -> q*acting -> 0`` in an adapted frame."""

    total: Algebroid
    sub: Algebroid
    acting: Algebroid
    q: ChartMap

    def __post_init__(self):
        T, H, G, q = self.total, self.sub, self.acting, self.q
        if q.source != T.base or q.target != G.base or H.base != T.base:
            raise ExtensionError("charts of the extension do not fit together")
        if q.projection_coords() is None:
            raise ExtensionError("q must be a coordinate projection")
        r, s = G.rank, H.rank
        if T.rank != r + s:
            raise ExtensionError(f"total rank {T.rank} != {r} + {s}")
        for k in range(s):
            if T.anchor[r + k] != H.anchor[k]:
                raise ExtensionError(f"anchor of sub frame element {k + 1} does not match")
        zero = Poly.zero(T.base)
        for k in range(s):
            for l in range(k + 1, s):
                expected = (zero,) * r + H.structure_vector(k, l)
                if T.structure_vector(r + k, r + l) != expected:
                    raise ExtensionError(
                        f"bracket of sub frame pair ({k + 1},{l + 1}) does not match"
                    )

    @property
    def split_rank(self) -> int:
        return self.acting.rank


@dataclass(frozen=True)
class Curvature:
    """Curvature ``kappa(e_i, e_j)`` for i < j and the connection read off the splitting."""

    kappa: Mapping[tuple[int, int], Section]
    connection: tuple[Derivation, ...]
    issues: tuple[str, ...] = ()

    @property
    def consistent(self) -> bool:
        return not self.issues

    def is_zero(self) -> bool:
        return all(k.is_zero() for k in self.kappa.values())


def curvature_form(ext: SplitExtension) -> Curvature:
    T, H, G, q = ext.total, ext.sub, ext.acting, ext.q
    r, s = G.rank, H.rank
    issues = []
    kappa = {}
    for i in range(r):
        for j in range(i + 1, r):
            vec = T.structure_vector(i, j)
            lifted = [q.pullback(c) for c in G.structure_vector(i, j)]
            if list(vec[:r]) != lifted:
                issues.append(f"projection does not preserve the bracket of pair ({i + 1},{j + 1})")
            kappa[(i, j)] = Section(H, vec[r:])
    connection = []
    for i in range(r):
        columns = []
        for k in range(s):
            vec = T.structure_vector(i, r + k)
            if any(not c.is_zero() for c in vec[:r]):
                issues.append(f"mixed bracket ({i + 1},{r + k + 1}) leaves the sub-algebroid")
            columns.append(Section(H, vec[r:]))
        connection.append(Derivation.from_columns(H, columns, T.anchor_field(i)))
    return Curvature(kappa, tuple(connection), tuple(issues))


def check_flat(ext: SplitExtension, subject: str | None = None) -> CheckReport:
    """``[kappa(e_i, e_j), f_k] = 0`` for all pairs and k, plus whether kappa vanishes."""
    H = ext.sub
    subject = subject or ext.total.name or "extension"
    curv = curvature_form(ext)
    frame = [H.frame_section(k) for k in range(H.rank)]
    flat = CheckItem("flatness", True)
    for (i, j), kap in curv.kappa.items():
        for k, f in enumerate(frame):
            res = bracket(kap, f)
            if not res.is_zero():
                flat = CheckItem(
                    "flatness",
                    False,
                    {"pair": [i + 1, j + 1], "index": [k + 1], "residual": section_witness(res)},
                )
                break
        if not flat.passed:
            break
    kz = CheckItem("kappa_zero", True)
    for (i, j), kap in curv.kappa.items():
        if not kap.is_zero():
            kz = CheckItem("kappa_zero", False, {"pair": [i + 1, j + 1], "kappa": section_witness(kap)})
            break
    return CheckReport(subject, (flat, kz))


def split_extension_of(act: AlgebroidAction, product: Algebroid | None = None) -> SplitExtension:
    """Present a semi-direct product as a split extension with the obvious splitting."""
    if product is None:
        product = semidirect_product(act)
    return SplitExtension(product, act.acted, act.acting, act.q)


def reconstruct_from_split(
    ext: SplitExtension, name: str = ""
) -> tuple[Algebroid, AlgebroidAction, CheckReport]:
    """Read the action off a bracket-preserving splitting and rebuild the product.

    Returns the rebuilt semi-direct product, the recovered action and a report
    with the action checks plus ``split_iso`` (identical anchor and structure
    functions to the total algebroid).  Raises :class:`CurvatureError` when
    the splitting does not preserve brackets.
    """
    curv = curvature_form(ext)
    if not curv.is_zero():
        raise CurvatureError("curvature is nonzero; the splitting does not preserve brackets")
    act = AlgebroidAction(ext.acting, ext.sub, ext.q, curv.connection)
    subject = name or ext.total.name or "extension"
    report = check_action(act, subject)
    product = semidirect_product(act, force=True, name=name or ext.total.name)
    product = Algebroid(product.base, ext.total.frame, product.anchor, product.structure, product.name)
    iso = CheckItem("split_iso", True)
    if not product.same_data(ext.total):
        witness = {"issues": list(curv.issues) or ["anchor or structure functions differ"]}
        iso = CheckItem("split_iso", False, witness)
    return product, act, CheckReport(subject, report.items + (iso,))
