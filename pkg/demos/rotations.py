"""Infinitesimal rotations of R^3 as a Lie algebroid.

Run with ``python3 demos/rotations.py``.
"""
from algebroidkit import (
    Chart,
    InfinitesimalGroupAction,
    VectorField,
    anchor_generic_rank,
    check_axioms,
    transformation_algebroid,
)
from algebroidkit.constructions import so3_algebra

space = Chart(["x", "y", "z"])

# Rotation fields about the three axes.  With the constants [e1,e2] = e3 and
# its cyclic shifts, the rotation about the y axis has to be x d_z - z d_x.
rotations = [
    VectorField.parse(["0", "-z", "y"], space),
    VectorField.parse(["-z", "0", "x"], space),
    VectorField.parse(["-y", "x", "0"], space),
]
action = InfinitesimalGroupAction(so3_algebra(), space, rotations)
A, homomorphism = transformation_algebroid(action, "so(3) on R^3")
print(homomorphism.render())
print()

# The full suite adds the frame Jacobi identity and 25 random section triples.
print(check_axioms(A, seed=1).render())
print()

# Orbits are spheres, so the anchor has rank 2 away from the origin.
print("generic rank of the anchor:", anchor_generic_rank(A))
print()

# Doubling one field breaks the homomorphism; the report names the pair and
# the leftover vector field.
doubled = InfinitesimalGroupAction(so3_algebra(), space, rotations[:2] + [2 * rotations[2]])
_, report = transformation_algebroid(doubled, "doubled rotation")
print(report.render())
