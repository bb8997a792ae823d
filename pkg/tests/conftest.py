from __future__ import annotations

import random
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from algebroidkit.corpus import corpus_dir, load_manifest
from algebroidkit.exactpoly import Chart, Poly, VectorField
from algebroidkit.fileformat import parse_file

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

XYZ = Chart(["x", "y", "z"])


def polys(chart: Chart = XYZ, max_degree: int = 3, max_terms: int = 4):
    exps = st.tuples(*[st.integers(0, max_degree)] * chart.dim).filter(lambda e: sum(e) <= max_degree)
    coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda t: Poly(chart, t))


def fields(chart: Chart = XYZ, max_degree: int = 3):
    return st.lists(polys(chart, max_degree), min_size=chart.dim, max_size=chart.dim).map(
        lambda cs: VectorField(chart, cs)
    )


def corpus_path(name: str):
    return corpus_dir() / f"{name}.json"


def load(name: str, kind: str = "algebroid"):
    return parse_file(corpus_path(name), kind)


def entries(command: str, expect: str | None = None):
    return [e for e in load_manifest() if e["command"] == command and (expect is None or e["expect"] == expect)]


VALID_ALGEBROIDS = [e["name"] for e in entries("check", "PASS")]
BROKEN_ALGEBROIDS = [e["name"] for e in entries("check", "FAIL")]
VALID_ACTIONS = [e["file"][:-5] for e in entries("check-action", "PASS")]
PERTURBED_ACTIONS = [e["file"][:-5] for e in entries("check-action", "FAIL")]


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
