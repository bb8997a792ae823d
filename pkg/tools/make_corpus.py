"""Regenerate the bundled fixture corpus, its manifest and the golden run output.

    python3 tools/make_corpus.py

Fixture data is written out literally below.  Expected verdicts in the
manifest are set by hand; the golden file is the JSON output of
``algebroidkit corpus run --json`` and is only rewritten when every verdict
matches its expectation.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "src" / "algebroidkit" / "corpus"
sys.path.insert(0, str(ROOT / "src"))

from algebroidkit.exactpoly import Chart, Poly  # noqa: E402

entries: list[dict] = []


def write(name: str, data: dict) -> str:
    OUT.mkdir(parents=True, exist_ok=True)
    fname = f"{name}.json"
    (OUT / fname).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    return fname


def entry(name: str, command: str, fname: str, expect: str, **extra) -> None:
    entries.append({"name": name, "command": command, "file": fname, "expect": expect, **extra})


def algebroid(chart, frame, anchor, structure=None, name=None):
    d = {}
    if name:
        d["name"] = name
    d.update(chart=chart, rank=len(frame), frame=frame, anchor=anchor, structure=structure or {})
    return d


def zeros(n):
    return ["0"] * n


def identity(n):
    return [["1" if a == b else "0" for b in range(n)] for a in range(n)]


# -- algebroids ----------------------------------------------------------------

T1 = algebroid(["x"], ["d_x"], identity(1))
T2 = algebroid(["x", "y"], ["d_x", "d_y"], identity(2))
T3 = algebroid(["x", "y", "z"], ["d_x", "d_y", "d_z"], identity(3))
ZERO2 = algebroid(["x", "y"], [], [])
VB2 = algebroid(["x", "y"], ["u", "v"], [zeros(2), zeros(2)])
HEIS = algebroid(["x"], ["a", "b", "c"], [["0"], ["0"], ["0"]], {"1,2": ["0", "0", "x"]})
SO3_CONST = {"1,2": ["0", "0", "1"], "1,3": ["0", "-1", "0"], "2,3": ["1", "0", "0"]}
SO3_FIELDS = [["0", "-z", "y"], ["-z", "0", "x"], ["-y", "x", "0"]]
SO3T = algebroid(["x", "y", "z"], ["e1", "e2", "e3"], SO3_FIELDS, SO3_CONST)
SL2_CONST = {"1,2": ["0", "2", "0"], "1,3": ["0", "0", "-2"], "2,3": ["1", "0", "0"]}
SL2_FIELDS = [["-x", "y"], ["-y", "0"], ["0", "-x"]]
SL2T = algebroid(["x", "y"], ["h", "e", "f"], SL2_FIELDS, SL2_CONST)
SYMP = algebroid(["x", "y"], ["dx", "dy"], [["0", "-1"], ["1", "0"]])
COT_SO3 = algebroid(
    ["x1", "x2", "x3"],
    ["dx1", "dx2", "dx3"],
    [["0", "-x3", "x2"], ["x3", "0", "-x1"], ["-x2", "x1", "0"]],
    {"1,2": ["0", "0", "-1"], "1,3": ["0", "1", "0"], "2,3": ["-1", "0", "0"]},
)

algebroids = {
    "tangent_r1": (T1, "PASS"),
    "tangent_r2": (T2, "PASS"),
    "tangent_r3": (T3, "PASS"),
    "zero_r2": (ZERO2, "PASS"),
    "vector_bundle_r2": (VB2, "PASS"),
    "heisenberg_r1": (HEIS, "PASS"),
    "so3_transformation": (SO3T, "PASS"),
    "sl2_transformation": (SL2T, "PASS"),
    "cotangent_symplectic_r2": (SYMP, "PASS"),
    "cotangent_so3": (COT_SO3, "PASS"),
    # broken twins
    "broken_tangent_r2": ({**T2, "structure": {"1,2": ["1", "0"]}}, "FAIL"),
    "broken_heisenberg_r1": (
        {**HEIS, "structure": {"1,2": ["0", "0", "x"], "1,3": ["1", "0", "0"]}},
        "FAIL",
    ),
    "broken_so3": ({**SO3T, "structure": {**SO3_CONST, "1,2": ["0", "0", "-1"]}}, "FAIL"),
    "broken_sl2": ({**SL2T, "structure": {**SL2_CONST, "2,3": ["-1", "0", "0"]}}, "FAIL"),
    "broken_cotangent_symplectic_r2": ({**SYMP, "structure": {"1,2": ["1", "0"]}}, "FAIL"),
    # bracket with the opposite sign
    "broken_cotangent_so3": (
        {**COT_SO3, "structure": {"1,2": ["0", "0", "1"], "1,3": ["0", "-1", "0"], "2,3": ["1", "0", "0"]}},
        "FAIL",
    ),
}
for name, (data, expect) in algebroids.items():
    entry(name, "check", write(name, data), expect)

# -- group actions and bivectors ------------------------------------------------------

SO3_ACTION = {
    "chart": ["x", "y", "z"],
    "basis": ["e1", "e2", "e3"],
    "constants": {k: v for k, v in SO3_CONST.items()},
    "fields": SO3_FIELDS,
}
SL2_ACTION = {"chart": ["x", "y"], "basis": ["h", "e", "f"], "constants": SL2_CONST, "fields": SL2_FIELDS}
group_actions = {
    "so3_action": (SO3_ACTION, "PASS"),
    "sl2_action": (SL2_ACTION, "PASS"),
    "so3_action_doubled": (
        {**SO3_ACTION, "fields": SO3_FIELDS[:2] + [["-2*y", "2*x", "0"]]},
        "FAIL",
    ),
}
for name, (data, expect) in group_actions.items():
    entry(name, "build-transformation", write(name, data), expect)

# expectation = whether the Schouten bracket vanishes (checked independently in the tests)
bivectors = {
    "symplectic_r2": ({"chart": ["x", "y"], "bivector": {"1,2": "1"}}, "PASS"),
    "lie_poisson_so3": (
        {"chart": ["x1", "x2", "x3"], "bivector": {"1,2": "x3", "1,3": "-x2", "2,3": "x1"}},
        "PASS",
    ),
    "lie_poisson_sl2": (
        {"chart": ["h", "e", "f"], "bivector": {"1,2": "2*e", "1,3": "-2*f", "2,3": "h"}},
        "PASS",
    ),
    "planar_r2": ({"chart": ["x", "y"], "bivector": {"1,2": "x^2*y + 3"}}, "PASS"),
    "quadratic_r3": (
        {"chart": ["x", "y", "z"], "bivector": {"1,2": "x*y", "1,3": "2*x*z", "2,3": "-1/2*y*z"}},
        "PASS",
    ),
    "split_r4": (
        {"chart": ["x1", "x2", "x3", "x4"], "bivector": {"1,2": "1", "3,4": "x1"}},
        "FAIL",
    ),
    "twisted_r3": ({"chart": ["x", "y", "z"], "bivector": {"1,2": "1", "2,3": "y"}}, "FAIL"),
    "corank_one_r3": ({"chart": ["x", "y", "z"], "bivector": {"1,2": "1", "2,3": "x"}}, "PASS"),
    "rotational_r3": (
        {"chart": ["x", "y", "z"], "bivector": {"1,2": "z", "1,3": "x", "2,3": "y"}},
        "FAIL",
    ),
    "mixed_r4": (
        {"chart": ["x1", "x2", "x3", "x4"], "bivector": {"1,2": "x3", "2,3": "x1", "3,4": "1"}},
        "FAIL",
    ),
}
for name, (data, expect) in bivectors.items():
    entry(name, "build-poisson", write(name, data), expect)

# -- derivations -------------------------------------------------------------------

SO3_BUNDLE_R1 = algebroid(["x"], ["f1", "f2", "f3"], [["0"], ["0"], ["0"]], SO3_CONST)
derivations = {
    "derivation_partial_connection": (
        {"algebroid": VB2, "matrix": [["x", "1"], ["y^2", "0"]], "field": ["1", "x"]},
        "PASS",
    ),
    "derivation_heisenberg_dx": (
        {"algebroid": HEIS, "matrix": [zeros(3), zeros(3), zeros(3)], "field": ["1"]},
        "FAIL",
    ),
    "derivation_so3_bundle_dx": (
        {"algebroid": SO3_BUNDLE_R1, "matrix": [zeros(3), zeros(3), zeros(3)], "field": ["1"]},
        "PASS",
    ),
    "derivation_tangent_inner": ({"algebroid": T1, "matrix": [["-1"]], "field": ["x"]}, "PASS"),
    "derivation_so3_dx": (
        {"algebroid": SO3T, "matrix": [zeros(3), zeros(3), zeros(3)], "field": ["1", "0", "0"]},
        "FAIL",
    ),
}
for name, (data, expect) in derivations.items():
    entry(name, "check-derivation", write(name, data), expect)

# -- actions -------------------------------------------------------------------------

FOL_X = algebroid(["x"], ["X"], [["1"]])
FOL_Y = algebroid(["x", "y"], ["Y"], [["0", "1"]])
FOL_YZ = algebroid(["x", "y", "z"], ["Y", "Z"], [["0", "1", "0"], ["0", "0", "1"]])
FOL_Z = algebroid(["x", "y", "z"], ["Z"], [["0", "0", "1"]])
VB1 = algebroid(["x"], ["u"], [["0"]])
POINT_T = algebroid([], ["t"], [[]])
POINT_AB = algebroid([], ["a", "b"], [[], []])
SL2 = algebroid([], ["h", "e", "f"], [[], [], []], SL2_CONST)
SO3 = algebroid([], ["e1", "e2", "e3"], [[], [], []], SO3_CONST)
BUNDLE_AB = algebroid(["x"], ["a", "b"], [["0"], ["0"]], {"1,2": ["0", "x"]})
PROJ_G = algebroid(["x", "y"], ["a", "b", "c"], [["1", "0"], zeros(2), zeros(2)], {"2,3": ["0", "0", "y"]})
VB1_XY = algebroid(["x", "y"], ["u"], [zeros(2)])
VB2_XY = algebroid(["x", "y"], ["u", "v"], [zeros(2), zeros(2)])


def nab(matrix, field):
    return {"matrix": matrix, "field": field}


# inner derivation of the tangent algebroid of R^3 by each rotation field
def so3_inner(field):
    chart = Chart(["x", "y", "z"])
    comps = [Poly.parse(c, chart) for c in field]
    matrix = [[str(-comps[a].diff(b)) for b in chart.coords] for a in range(3)]
    return nab(matrix, field)


actions = {
    "action_foliation_on_foliation": {
        "acting": FOL_X, "acted": FOL_Y, "q": ["x"], "nabla": [nab([["0"]], ["1", "0"])],
    },
    "action_foliation_twisted": {
        "acting": FOL_X, "acted": FOL_YZ, "q": ["x"],
        "nabla": [nab([["0", "-1"], ["0", "0"]], ["1", "z", "0"])],
    },
    "action_tangent_on_foliation": {
        "acting": T2, "acted": FOL_Z, "q": ["x", "y"],
        "nabla": [nab([["-1"]], ["1", "0", "z"]), nab([["0"]], ["0", "1", "0"])],
    },
    "action_tangent_on_so3": {
        "acting": T1, "acted": SO3_BUNDLE_R1, "q": ["x"],
        # ad(e1) + x*ad(e2)
        "nabla": [nab([["0", "0", "x"], ["0", "0", "-1"], ["-x", "1", "0"]], ["1"])],
    },
    "action_flat_partial_connection": {
        "acting": FOL_X, "acted": VB1, "q": ["x"], "nabla": [nab([["x^2 + 1"]], ["1"])],
    },
    "action_lie_on_lie": {
        "acting": POINT_T, "acted": SL2, "q": [],
        "nabla": [nab([["0", "0", "0"], ["0", "2", "0"], ["0", "0", "-2"]], [])],
    },
    "action_so3_on_tangent_r3": {
        "acting": SO3, "acted": T3, "q": [], "nabla": [so3_inner(f) for f in SO3_FIELDS],
    },
    "action_abelian_flat_connection": {
        "acting": T2, "acted": VB2_XY, "q": ["x", "y"],
        "nabla": [nab([["y", "0"], ["0", "0"]], ["1", "0"]), nab([["x", "0"], ["0", "0"]], ["0", "1"])],
    },
    "action_bundle_trivial": {
        "acting": BUNDLE_AB, "acted": VB1, "q": ["x"],
        "nabla": [nab([["0"]], ["0"]), nab([["0"]], ["0"])],
    },
    "action_projectable": {
        "acting": PROJ_G, "acted": VB1_XY, "q": ["x", "y"],
        "nabla": [nab([["0"]], ["1", "0"]), nab([["0"]], zeros(2)), nab([["0"]], zeros(2))],
    },
}
perturbed = {
    # breaks derivation axiom (i): diag(1,0,0) is not a derivation of so(3)
    "perturbed_derivation": {
        **actions["action_tangent_on_so3"],
        "nabla": [nab([["1", "0", "0"], zeros(3), zeros(3)], ["1"])],
    },
    # breaks the family condition: the acted anchor d/dx is not killed by dq
    "perturbed_family": {
        **actions["action_bundle_trivial"],
        "acted": algebroid(["x"], ["u"], [["1"]]),
    },
    # breaks projectability: R(a) = d/dx + d/dy does not project to d/dx
    "perturbed_projectable": {
        **actions["action_projectable"],
        "nabla": [nab([["0"]], ["1", "1"]), nab([["0"]], zeros(2)), nab([["0"]], zeros(2))],
    },
    # breaks the homomorphism condition: non-commuting constant matrices
    "perturbed_homomorphism": {
        **actions["action_abelian_flat_connection"],
        "nabla": [nab([["0", "1"], ["0", "0"]], ["1", "0"]), nab([["0", "0"], ["1", "0"]], ["0", "1"])],
    },
}
for name, data in actions.items():
    fname = write(name, data)
    entry(name, "check-action", fname, "PASS")
    entry(f"{name}_product", "semidirect", fname, "PASS")
for name, data in perturbed.items():
    fname = write(name, data)
    entry(name, "check-action", fname, "FAIL")
    entry(f"{name}_product", "semidirect", fname, "FAIL", force=True)

# -- morphisms -------------------------------------------------------------------------

SUB = algebroid(["x", "y"], ["s"], [["1", "x"]])
T1_T = algebroid(["t"], ["d_t"], [["1"]])
PRODUCT_FOL = algebroid(
    ["x", "y"], ["X", "Y"], [["1", "0"], ["0", "1"]],
)
morphisms = {
    "morphism_anchor_so3": (
        {"source": SO3T, "target": T3, "phi": ["x", "y", "z"],
         "matrix": [[SO3_FIELDS[i][a] for i in range(3)] for a in range(3)]},
        "PASS",
    ),
    "morphism_identity_heisenberg": (
        {"source": HEIS, "target": HEIS, "phi": ["x"], "matrix": identity(3)},
        "PASS",
    ),
    "morphism_subalgebroid": (
        {"source": SUB, "target": T2, "phi": ["x", "y"], "matrix": [["1"], ["x"]]},
        "PASS",
    ),
    "morphism_curve_tangent": (
        {"source": T1_T, "target": T2, "phi": ["t", "t^2"], "matrix": [["1"], ["2*t"]]},
        "PASS",
    ),
    "morphism_so3_automorphism": (
        {"source": SO3, "target": SO3, "phi": [], "matrix": [["0", "0", "1"], ["1", "0", "0"], ["0", "1", "0"]]},
        "PASS",
    ),
    "morphism_so3_sign_corrupt": (
        {"source": SO3, "target": SO3, "phi": [], "matrix": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "-1"]]},
        "FAIL",
    ),
    "morphism_inclusion_into_product": (
        {"source": FOL_Y, "target": PRODUCT_FOL, "phi": ["x", "y"], "matrix": [["0"], ["1"]]},
        "PASS",
    ),
    "morphism_product_projection": (
        {"source": PRODUCT_FOL, "target": FOL_X, "phi": ["x"], "matrix": [["1", "0"]]},
        "PASS",
    ),
}
for name, (data, expect) in morphisms.items():
    entry(name, "check-morphism", write(name, data), expect)

# -- extensions ------------------------------------------------------------------------

HEIS_EXT = {
    "total": algebroid([], ["k1", "k2", "f"], [[], [], []], {"1,2": ["0", "0", "1"]}),
    "sub": algebroid([], ["f"], [[]]),
    "acting": POINT_AB,
    "q": [],
    "split_rank": 2,
}
SO3_TWIST = {
    "total": algebroid(
        [], ["k1", "k2", "f1", "f2", "f3"], [[]] * 5,
        {"1,2": ["0", "0", "1", "0", "0"], "3,4": zeros(4) + ["1"],
         "3,5": ["0", "0", "0", "-1", "0"], "4,5": ["0", "0", "1", "0", "0"]},
    ),
    "sub": SO3,
    "acting": POINT_AB,
    "q": [],
    "split_rank": 2,
}


def atiyah(mixed):
    structure = {
        "2,3": ["0", "0", "0", "1"], "2,4": ["0", "0", "-1", "0"], "3,4": ["0", "1", "0", "0"],
    }
    for k in range(3):
        structure[f"1,{k + 2}"] = ["0"] + [mixed[j][k] for j in range(3)]
    return {
        "total": algebroid(["x"], ["d_x", "f1", "f2", "f3"], [["1"], ["0"], ["0"], ["0"]], structure),
        "sub": SO3_BUNDLE_R1,
        "acting": T1,
        "q": ["x"],
        "split_rank": 1,
    }


FOL_PRODUCT_EXT = {
    "total": PRODUCT_FOL,
    "sub": FOL_Y,
    "acting": FOL_X,
    "q": ["x"],
    "split_rank": 1,
}
extensions = {
    "extension_foliation_product": (FOL_PRODUCT_EXT, ["curvature", "reconstruct"], "PASS"),
    "extension_heisenberg": (HEIS_EXT, ["curvature"], "FAIL"),
    "extension_so3_twisted": (SO3_TWIST, ["curvature"], "FAIL"),
    # mixed brackets x*ad(e3): a derivation of so(3) at every point
    "extension_atiyah": (atiyah([["0", "-x", "0"], ["x", "0", "0"], ["0", "0", "0"]]), ["reconstruct"], "PASS"),
    "extension_atiyah_bad": (atiyah([["1", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]]), ["reconstruct"], "FAIL"),
}
for name, (data, commands, expect) in extensions.items():
    fname = write(name, data)
    for cmd in commands:
        entry(name if len(commands) == 1 else f"{name}_{cmd}", cmd, fname, expect)


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "manifest.json").write_text(json.dumps({"entries": entries}, indent=2) + "\n", encoding="utf-8")
    from algebroidkit.corpus import render_corpus, run_corpus

    data, ok = run_corpus(OUT)
    print(render_corpus(data))
    if not ok:
        print("verdicts do not match expectations; golden file not written", file=sys.stderr)
        return 1
    (OUT / "golden.json").write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    return 0


if __name__ == "__main__":
    sys.exit(main())
