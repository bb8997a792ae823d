"""Cotangent algebroids of bivector fields.

A bivector gives an anchor and a bracket on 1-forms; the result is a Lie
algebroid exactly when the bivector is Poisson.  Run with
``python3 demos/poisson.py``.
"""
from algebroidkit import Chart, PoissonBivector, check_axioms, poisson_cotangent

cases = {
    "constant symplectic plane": (["x", "y"], {(0, 1): "1"}),
    "dual of so(3)": (["x1", "x2", "x3"], {(0, 1): "x3", (0, 2): "-x2", (1, 2): "x1"}),
    "log-canonical quadratic": (["x", "y", "z"], {(0, 1): "x*y", (0, 2): "2*x*z", (1, 2): "-1/2*y*z"}),
    "symplectic plus a twisted pair": (["x1", "x2", "x3", "x4"], {(0, 1): "1", (2, 3): "x1"}),
}

for title, (coords, components) in cases.items():
    chart = Chart(coords)
    A, report = poisson_cotangent(PoissonBivector(chart, components), title)
    print(f"== {title}")
    print("frame:", ", ".join(A.frame))
    for (i, j), vec in sorted(A.structure.items()):
        terms = " + ".join(f"({c})*{A.frame[k]}" for k, c in enumerate(vec) if not c.is_zero())
        print(f"  [{A.frame[i]}, {A.frame[j]}] = {terms}")
    print(check_axioms(A, seed=3).render())
    print()
