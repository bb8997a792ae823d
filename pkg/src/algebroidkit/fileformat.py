"""JSON file formats for algebroids, morphisms, derivations, actions and extensions.

Polynomials are always strings in the polynomial grammar, never JSON numbers.
Frame and coordinate indices in files are 1-based.  Wherever an algebroid is
expected, a file may hold either an inline object or a path (relative to the
referring file) to an algebroid file.

Errors raise :class:`ParseError` carrying the key path and, when it can be
located, the line number in the source text.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from .algebroid import Algebroid
from .constructions import (
    AlgebroidAction,
    ExtensionError,
    InfinitesimalGroupAction,
    LieAlgebraPresentation,
    PoissonBivector,
    SplitExtension,
)
from .derivations import Derivation
from .exactpoly import Chart, ChartMap, Poly, PolyParseError, VectorField, parse_poly
from .morphisms import AlgebroidMorphism

__all__ = [
    "KINDS",
    "ParseError",
    "action_to_dict",
    "algebroid_to_dict",
    "bivector_to_dict",
    "derivation_to_dict",
    "dump_json",
    "extension_to_dict",
    "group_action_to_dict",
    "load",
    "morphism_to_dict",
    "parse_file",
    "write_json",
]

KINDS = ("algebroid", "morphism", "derivation", "action", "extension", "bivector", "group_action")


class ParseError(ValueError):
    def __init__(self, message: str, path: str = "", line: int | None = None, file: str = ""):
        where = []
        if file:
            where.append(file)
        if line is not None:
            where.append(f"line {line}")
        if path:
            where.append(f"at {path}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
        self.message = message
        self.path = path
        self.line = line
        self.file = file


class _Ctx:
    """Source text and location used to position error messages."""

    def __init__(self, text: str = "", file: str = "", base_dir: Path | None = None):
        self.text = text
        self.file = file
        self.base_dir = base_dir or Path(".")

    def locate(self, needle: str) -> int | None:
        if not self.text or not needle:
            return None
        at = self.text.find(needle)
        if at < 0:
            return None
        return self.text.count("\n", 0, at) + 1

    def error(self, message: str, keys: list, needle: str | None = None) -> ParseError:
        path = "".join(f"[{k}]" if isinstance(k, int) else f".{k}" for k in keys).lstrip(".")
        if needle is None and keys:
            last = next((k for k in reversed(keys) if isinstance(k, str)), None)
            needle = json.dumps(last) if last is not None else None
        return ParseError(message, path, self.locate(needle) if needle else None, self.file)


def _reject_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ValueError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _read(path: Path) -> tuple[Any, _Ctx]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", file=str(path)) from None
    ctx = _Ctx(text, str(path), path.parent)
    try:
        data = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise ParseError(f"syntax error: {exc.msg} (column {exc.colno})", line=exc.lineno, file=str(path)) from None
    except ValueError as exc:
        raise ParseError(str(exc), file=str(path)) from None
    return data, ctx


# -- field helpers ---------------------------------------------------------


def _obj(d, ctx: _Ctx, keys: list, required: tuple, optional: tuple = ()) -> dict:
    if not isinstance(d, dict):
        raise ctx.error("expected a JSON object", keys)
    for k in required:
        if k not in d:
            raise ctx.error(f"missing key {k!r}", keys)
    extra = set(d) - set(required) - set(optional) - {"name"}
    if extra:
        bad = sorted(extra)[0]
        raise ctx.error(f"unexpected key {bad!r}", keys + [bad])
    return d


def _list(v, ctx: _Ctx, keys: list, length: int | None = None) -> list:
    if not isinstance(v, list):
        raise ctx.error("expected a JSON array", keys)
    if length is not None and len(v) != length:
        raise ctx.error(f"expected {length} entries, got {len(v)}", keys)
    return v


def _poly(v, chart: Chart, ctx: _Ctx, keys: list) -> Poly:
    if not isinstance(v, str):
        raise ctx.error("polynomials must be JSON strings", keys)
    try:
        return parse_poly(v, chart)
    except PolyParseError as exc:
        raise ctx.error(f"polynomial grammar error: {exc}", keys, json.dumps(v)) from None


def _names(v, ctx: _Ctx, keys: list) -> list[str]:
    v = _list(v, ctx, keys)
    for i, n in enumerate(v):
        if not isinstance(n, str):
            raise ctx.error("expected a string name", keys + [i])
    return v


def _chart(v, ctx: _Ctx, keys: list) -> Chart:
    names = _names(v, ctx, keys)
    try:
        return Chart(names)
    except ValueError as exc:
        raise ctx.error(str(exc), keys) from None


def _pair(key: str, n: int, ctx: _Ctx, keys: list) -> tuple[int, int]:
    try:
        i, j = (int(p) for p in key.split(","))
    except ValueError:
        raise ctx.error(f"pair key {key!r} must look like \"i,j\"", keys + [key]) from None
    if not i < j:
        raise ctx.error(f"pair {key!r} must have i<j", keys + [key])
    if not (1 <= i and j <= n):
        raise ctx.error(f"pair {key!r} out of range 1..{n}", keys + [key])
    return i - 1, j - 1


def _fraction(v, ctx: _Ctx, keys: list) -> Fraction:
    if not isinstance(v, str):
        raise ctx.error("rational constants must be JSON strings", keys)
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError):
        raise ctx.error(f"invalid rational {v!r}", keys, json.dumps(v)) from None


def _pair_key(i: int, j: int) -> str:
    return f"{i + 1},{j + 1}"


# -- algebroids --------------------------------------------------------------


def _algebroid(d, ctx: _Ctx, keys: list, default_name: str = "") -> Algebroid:
    if isinstance(d, str):
        path = ctx.base_dir / d
        data, sub = _read(path)
        return _algebroid(data, sub, [], path.stem)
    _obj(d, ctx, keys, ("chart", "rank", "frame", "anchor"), ("structure",))
    chart = _chart(d["chart"], ctx, keys + ["chart"])
    rank = d["rank"]
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 0:
        raise ctx.error("rank must be a non-negative integer", keys + ["rank"])
    frame = _names(d["frame"], ctx, keys + ["frame"])
    if len(frame) != rank:
        raise ctx.error(f"frame must list {rank} names", keys + ["frame"])
    anchor_rows = _list(d["anchor"], ctx, keys + ["anchor"], rank)
    anchor = []
    for i, row in enumerate(anchor_rows):
        row = _list(row, ctx, keys + ["anchor", i], chart.dim)
        anchor.append([_poly(v, chart, ctx, keys + ["anchor", i, a]) for a, v in enumerate(row)])
    structure = {}
    raw = d.get("structure", {})
    if not isinstance(raw, dict):
        raise ctx.error("structure must be an object", keys + ["structure"])
    for key, vec in raw.items():
        i, j = _pair(key, rank, ctx, keys + ["structure"])
        vec = _list(vec, ctx, keys + ["structure", key], rank)
        structure[(i, j)] = [_poly(v, chart, ctx, keys + ["structure", key, k]) for k, v in enumerate(vec)]
    try:
        return Algebroid(chart, frame, anchor, structure, d.get("name", default_name))
    except ValueError as exc:
        raise ctx.error(str(exc), keys) from None


def algebroid_to_dict(A: Algebroid, with_name: bool = True) -> dict:
    d: dict[str, Any] = {}
    if with_name and A.name:
        d["name"] = A.name
    d["chart"] = list(A.base.coords)
    d["rank"] = A.rank
    d["frame"] = list(A.frame)
    d["anchor"] = [[str(p) for p in row] for row in A.anchor]
    d["structure"] = {
        _pair_key(i, j): [str(p) for p in vec] for (i, j), vec in sorted(A.structure.items())
    }
    return d


# -- derivations -------------------------------------------------------------


def _derivation_body(d, A: Algebroid, ctx: _Ctx, keys: list) -> Derivation:
    r, m = A.rank, A.base.dim
    rows = _list(d["matrix"], ctx, keys + ["matrix"], r)
    matrix = []
    for j, row in enumerate(rows):
        row = _list(row, ctx, keys + ["matrix", j], r)
        matrix.append([_poly(v, A.base, ctx, keys + ["matrix", j, i]) for i, v in enumerate(row)])
    comps = _list(d["field"], ctx, keys + ["field"], m)
    field = VectorField(A.base, [_poly(v, A.base, ctx, keys + ["field", a]) for a, v in enumerate(comps)])
    return Derivation(A, matrix, field)


def _derivation(d, ctx: _Ctx, keys: list) -> Derivation:
    _obj(d, ctx, keys, ("algebroid", "matrix", "field"))
    A = _algebroid(d["algebroid"], ctx, keys + ["algebroid"])
    return _derivation_body(d, A, ctx, keys)


def _derivation_core(D: Derivation) -> dict:
    return {
        "matrix": [[str(p) for p in row] for row in D.matrix],
        "field": D.field.to_strings(),
    }


def derivation_to_dict(D: Derivation) -> dict:
    return {"algebroid": algebroid_to_dict(D.algebroid), **_derivation_core(D)}


# -- morphisms ---------------------------------------------------------------


def _morphism(d, ctx: _Ctx, keys: list) -> AlgebroidMorphism:
    _obj(d, ctx, keys, ("source", "target", "phi", "matrix"))
    S = _algebroid(d["source"], ctx, keys + ["source"])
    T = _algebroid(d["target"], ctx, keys + ["target"])
    phi_raw = _list(d["phi"], ctx, keys + ["phi"], T.base.dim)
    phi = ChartMap(S.base, T.base, [_poly(v, S.base, ctx, keys + ["phi", a]) for a, v in enumerate(phi_raw)])
    rows = _list(d["matrix"], ctx, keys + ["matrix"], T.rank)
    matrix = []
    for j, row in enumerate(rows):
        row = _list(row, ctx, keys + ["matrix", j], S.rank)
        matrix.append([_poly(v, S.base, ctx, keys + ["matrix", j, i]) for i, v in enumerate(row)])
    return AlgebroidMorphism(S, T, phi, matrix, d.get("name", ""))


def morphism_to_dict(F: AlgebroidMorphism) -> dict:
    d: dict[str, Any] = {"name": F.name} if F.name else {}
    d.update(
        source=algebroid_to_dict(F.source),
        target=algebroid_to_dict(F.target),
        phi=[str(p) for p in F.base_map.formulas],
        matrix=[[str(p) for p in row] for row in F.matrix],
    )
    return d


# -- actions and extensions --------------------------------------------------


def _projection(v, source: Chart, target: Chart, ctx: _Ctx, keys: list) -> ChartMap:
    names = _names(v, ctx, keys)
    if tuple(names) != target.coords:
        raise ctx.error(
            f"q must list the acting chart's coordinates {list(target.coords)}", keys
        )
    missing = [n for n in names if n not in source.coords]
    if missing:
        raise ctx.error(f"q names {missing} are not coordinates of the acted chart", keys)
    return ChartMap.projection(source, names)


def _action(d, ctx: _Ctx, keys: list) -> AlgebroidAction:
    _obj(d, ctx, keys, ("acting", "acted", "q", "nabla"))
    G = _algebroid(d["acting"], ctx, keys + ["acting"])
    H = _algebroid(d["acted"], ctx, keys + ["acted"])
    q = _projection(d["q"], H.base, G.base, ctx, keys + ["q"])
    entries = _list(d["nabla"], ctx, keys + ["nabla"], G.rank)
    nabla = []
    for i, e in enumerate(entries):
        _obj(e, ctx, keys + ["nabla", i], ("matrix", "field"))
        nabla.append(_derivation_body(e, H, ctx, keys + ["nabla", i]))
    return AlgebroidAction(G, H, q, nabla, d.get("name", ""))


def action_to_dict(act: AlgebroidAction) -> dict:
    d: dict[str, Any] = {"name": act.name} if act.name else {}
    d.update(
        acting=algebroid_to_dict(act.acting),
        acted=algebroid_to_dict(act.acted),
        q=list(act.q.target.coords),
        nabla=[_derivation_core(D) for D in act.nabla],
    )
    return d


def _extension(d, ctx: _Ctx, keys: list) -> SplitExtension:
    _obj(d, ctx, keys, ("total", "sub", "acting", "q", "split_rank"))
    K = _algebroid(d["total"], ctx, keys + ["total"])
    H = _algebroid(d["sub"], ctx, keys + ["sub"])
    G = _algebroid(d["acting"], ctx, keys + ["acting"])
    q = _projection(d["q"], K.base, G.base, ctx, keys + ["q"])
    if d["split_rank"] != G.rank:
        raise ctx.error(f"split_rank must equal the acting rank {G.rank}", keys + ["split_rank"])
    try:
        return SplitExtension(K, H, G, q)
    except ExtensionError as exc:
        raise ctx.error(f"invariant violation: {exc}", keys) from None


def extension_to_dict(ext: SplitExtension) -> dict:
    return {
        "total": algebroid_to_dict(ext.total),
        "sub": algebroid_to_dict(ext.sub),
        "acting": algebroid_to_dict(ext.acting),
        "q": list(ext.q.target.coords),
        "split_rank": ext.split_rank,
    }


# -- bivectors and group actions ---------------------------------------------


def _bivector(d, ctx: _Ctx, keys: list) -> PoissonBivector:
    _obj(d, ctx, keys, ("chart", "bivector"))
    chart = _chart(d["chart"], ctx, keys + ["chart"])
    raw = d["bivector"]
    if not isinstance(raw, dict):
        raise ctx.error("bivector must be an object", keys + ["bivector"])
    comps = {}
    for key, v in raw.items():
        a, b = _pair(key, chart.dim, ctx, keys + ["bivector"])
        comps[(a, b)] = _poly(v, chart, ctx, keys + ["bivector", key])
    return PoissonBivector(chart, comps)


def bivector_to_dict(P: PoissonBivector) -> dict:
    return {
        "chart": list(P.chart.coords),
        "bivector": {_pair_key(a, b): str(p) for (a, b), p in sorted(P.components.items())},
    }


def _group_action(d, ctx: _Ctx, keys: list) -> InfinitesimalGroupAction:
    _obj(d, ctx, keys, ("chart", "basis", "fields"), ("constants",))
    chart = _chart(d["chart"], ctx, keys + ["chart"])
    basis = _names(d["basis"], ctx, keys + ["basis"])
    n = len(basis)
    consts = {}
    raw = d.get("constants", {})
    if not isinstance(raw, dict):
        raise ctx.error("constants must be an object", keys + ["constants"])
    for key, vec in raw.items():
        i, j = _pair(key, n, ctx, keys + ["constants"])
        vec = _list(vec, ctx, keys + ["constants", key], n)
        consts[(i, j)] = tuple(_fraction(v, ctx, keys + ["constants", key, k]) for k, v in enumerate(vec))
    fields_raw = _list(d["fields"], ctx, keys + ["fields"], n)
    fields = []
    for i, comps in enumerate(fields_raw):
        comps = _list(comps, ctx, keys + ["fields", i], chart.dim)
        fields.append(VectorField(chart, [_poly(v, chart, ctx, keys + ["fields", i, a]) for a, v in enumerate(comps)]))
    try:
        algebra = LieAlgebraPresentation(tuple(basis), consts)
    except ValueError as exc:
        raise ctx.error(str(exc), keys + ["constants"]) from None
    return InfinitesimalGroupAction(algebra, chart, tuple(fields))


def group_action_to_dict(a: InfinitesimalGroupAction) -> dict:
    return {
        "chart": list(a.chart.coords),
        "basis": list(a.algebra.basis_names),
        "constants": {
            _pair_key(i, j): [str(c) for c in vec] for (i, j), vec in sorted(a.algebra.constants.items())
        },
        "fields": [f.to_strings() for f in a.fields],
    }


_LOADERS: dict[str, Callable] = {
    "algebroid": _algebroid,
    "morphism": _morphism,
    "derivation": _derivation,
    "action": _action,
    "extension": _extension,
    "bivector": _bivector,
    "group_action": _group_action,
}


def load(kind: str, data, base_dir: Path | str = ".", text: str = "", file: str = ""):
    """Build a typed object from already-decoded JSON data."""
    if kind not in _LOADERS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    ctx = _Ctx(text, file, Path(base_dir))
    return _LOADERS[kind](data, ctx, [])


def parse_file(path, kind: str):
    """Read and fully validate a definition file of the given kind."""
    path = Path(path)
    if kind not in _LOADERS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    data, ctx = _read(path)
    try:
        if kind == "algebroid":
            return _algebroid(data, ctx, [], path.stem)
        return _LOADERS[kind](data, ctx, [])
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(f"invariant violation: {exc}", file=str(path)) from None


def dump_json(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def write_json(path, data) -> None:
    Path(path).write_text(dump_json(data), encoding="utf-8")
