"""Actions, semi-direct products and split extensions.

A line acts on a bundle of so(3) Lie algebras over that line by a
position-dependent infinitesimal rotation.  The product is a Lie algebroid,
its split extension has zero curvature and reconstruction gives the product
back.  A Heisenberg-type twist shows the opposite case.  Run with
``python3 demos/semidirect.py``.
"""
from algebroidkit import (
    AlgebroidAction,
    Chart,
    Derivation,
    VectorField,
    check_action,
    check_axioms,
    check_flat,
    curvature_form,
    lie_algebra_bundle,
    reconstruct_from_split,
    semidirect_product,
    split_extension_of,
    tangent_algebroid,
)
from algebroidkit.constructions import SplitExtension, so3_algebra
from algebroidkit.exactpoly import ChartMap

line = Chart(["x"])
so3 = so3_algebra()
bundle = lie_algebra_bundle(line, so3.basis_names, so3.structure_on(line), "so(3) bundle")

# d/dx acting on sections through ad(e1) + x ad(e2)
matrix = [["0", "0", "x"], ["0", "0", "-1"], ["-x", "1", "0"]]
nabla = Derivation(bundle, matrix, VectorField.parse(["1"], line))
act = AlgebroidAction(tangent_algebroid(line), bundle, ChartMap.identity(line), [nabla])
print(check_action(act, "rotating connection").render())
print()

product = semidirect_product(act, name="T(R) x| so(3)")
print(check_axioms(product, seed=5).render())
print()

ext = split_extension_of(act, product)
print("curvature vanishes:", curvature_form(ext).is_zero())
rebuilt, _, report = reconstruct_from_split(ext)
print("reconstruction equals the product:", rebuilt.same_data(product))
print()

# Two commuting generators whose lifts bracket into a central direction.
point = Chart([])
abelian = lie_algebra_bundle(point, ["a", "b"], {}, "abelian plane")
centre = lie_algebra_bundle(point, ["f"], {}, "centre")
heisenberg = lie_algebra_bundle(point, ["k1", "k2", "f"], {(0, 1): ["0", "0", "1"]}, "heisenberg")
twisted = SplitExtension(heisenberg, centre, abelian, ChartMap.identity(point))
print("kappa(1,2) =", curvature_form(twisted).kappa[(0, 1)])
print(check_flat(twisted, "heisenberg extension").render())
