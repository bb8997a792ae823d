"""Exact computations with Lie algebroids over polynomial charts."""
from .algebroid import (
    Algebroid,
    Section,
    anchor_generic_rank,
    anchor_of,
    bracket,
    check_anchor_homomorphism,
    check_axioms,
    check_jacobi_frame,
    check_jacobi_random,
)
from .constructions import (
    AlgebroidAction,
    InfinitesimalGroupAction,
    LieAlgebraPresentation,
    PoissonBivector,
    SplitExtension,
    check_action,
    check_flat,
    curvature_form,
    foliation,
    lie_algebra,
    lie_algebra_bundle,
    poisson_cotangent,
    reconstruct_from_split,
    semidirect_inclusion,
    semidirect_product,
    semidirect_projection,
    split_extension_of,
    tangent_algebroid,
    transformation_algebroid,
    vector_bundle,
    zero_algebroid,
)
from .derivations import Derivation, check_derivation, der_bracket, derivation_apply, inner_derivation
from .exactpoly import Chart, ChartMap, Poly, VectorField, parse_poly
from .morphisms import AlgebroidMorphism, check_morphism, phi_decompose
from .report import CheckItem, CheckReport

__version__ = "0.1.0"
