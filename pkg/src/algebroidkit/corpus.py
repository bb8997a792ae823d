"""The bundled fixture corpus and its runner.

``corpus/manifest.json`` lists every fixture together with the command to
run on it and the expected overall verdict.  :func:`run_corpus` executes all
entries and compares verdicts against that table.
"""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any

from .algebroid import check_axioms
from .constructions import (
    check_action,
    check_flat,
    poisson_cotangent,
    reconstruct_from_split,
    semidirect_product,
    transformation_algebroid,
)
from .derivations import check_derivation
from .fileformat import parse_file
from .morphisms import check_morphism
from .report import CheckReport

__all__ = ["COMMANDS", "corpus_dir", "load_manifest", "run_corpus", "run_entry"]

RANDOM_TRIALS = 25
RANDOM_DEGREE = 2


def corpus_dir() -> Path:
    return Path(str(resources.files("algebroidkit") / "corpus"))


def load_manifest(directory: Path | None = None) -> list[dict[str, Any]]:
    directory = directory or corpus_dir()
    return json.loads((directory / "manifest.json").read_text(encoding="utf-8"))["entries"]


def _axioms(A, seed: int) -> CheckReport:
    return check_axioms(A, "all", RANDOM_TRIALS, RANDOM_DEGREE, seed)


def _check(path: Path, entry) -> CheckReport:
    return _axioms(parse_file(path, "algebroid"), entry.get("seed", 1))


def _check_morphism(path: Path, entry) -> CheckReport:
    return check_morphism(parse_file(path, "morphism"), entry["name"])


def _check_derivation(path: Path, entry) -> CheckReport:
    return check_derivation(parse_file(path, "derivation"), entry["name"])


def _check_action(path: Path, entry) -> CheckReport:
    return check_action(parse_file(path, "action"), entry["name"])


def _semidirect(path: Path, entry) -> CheckReport:
    act = parse_file(path, "action")
    product = semidirect_product(act, force=entry.get("force", False), name=entry["name"])
    return _axioms(product, entry.get("seed", 1))


def _transformation(path: Path, entry) -> CheckReport:
    A, _ = transformation_algebroid(parse_file(path, "group_action"), entry["name"])
    return _axioms(A, entry.get("seed", 1))


def _poisson(path: Path, entry) -> CheckReport:
    A, _ = poisson_cotangent(parse_file(path, "bivector"), entry["name"])
    return _axioms(A, entry.get("seed", 1))


def _curvature(path: Path, entry) -> CheckReport:
    return check_flat(parse_file(path, "extension"), entry["name"])


def _reconstruct(path: Path, entry) -> CheckReport:
    _, _, report = reconstruct_from_split(parse_file(path, "extension"), entry["name"])
    return report


COMMANDS = {
    "check": _check,
    "check-morphism": _check_morphism,
    "check-derivation": _check_derivation,
    "check-action": _check_action,
    "semidirect": _semidirect,
    "build-transformation": _transformation,
    "build-poisson": _poisson,
    "curvature": _curvature,
    "reconstruct": _reconstruct,
}


def run_entry(entry: dict[str, Any], directory: Path | None = None) -> CheckReport:
    directory = directory or corpus_dir()
    report = COMMANDS[entry["command"]](directory / entry["file"], entry)
    return CheckReport(entry["name"], report.items)


def run_corpus(directory: Path | None = None) -> tuple[dict[str, Any], bool]:
    """Run every manifest entry; the flag is True iff every verdict matches."""
    results = []
    all_match = True
    for entry in load_manifest(directory):
        report = run_entry(entry, directory)
        match = report.overall == entry["expect"]
        all_match &= match
        results.append(
            {
                "name": entry["name"],
                "command": entry["command"],
                "file": entry["file"],
                "expect": entry["expect"],
                "verdict": report.overall,
                "match": match,
                "report": report.to_dict(),
            }
        )
    summary = {
        "entries": len(results),
        "matched": sum(r["match"] for r in results),
        "overall": "PASS" if all_match else "FAIL",
    }
    return {"results": results, "summary": summary}, all_match


def render_corpus(data: dict[str, Any]) -> str:
    lines = []
    width = max((len(r["name"]) for r in data["results"]), default=10)
    for r in data["results"]:
        mark = "ok" if r["match"] else "MISMATCH"
        lines.append(
            f"{r['name']:<{width}}  {r['command']:<20}  expect {r['expect']}  got {r['verdict']}  {mark}"
        )
    s = data["summary"]
    lines.append(f"{s['matched']}/{s['entries']} verdicts match the golden table: {s['overall']}")
    return "\n".join(lines)
