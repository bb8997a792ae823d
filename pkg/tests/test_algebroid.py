from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from algebroidkit import (
    Algebroid,
    Poly,
    VectorField,
    anchor_generic_rank,
    anchor_of,
    bracket,
    check_anchor_homomorphism,
    check_axioms,
    check_jacobi_frame,
    check_jacobi_random,
    tangent_algebroid,
    zero_algebroid,
)
from algebroidkit.algebroid import AlgebroidMismatchError, random_section
from algebroidkit.exactpoly import Chart

from conftest import BROKEN_ALGEBROIDS, VALID_ALGEBROIDS, load
import oracles

X = Chart(["x"])
XY = Chart(["x", "y"])


def so3():
    return load("so3_transformation")


def with_structure(A, pair, vector):
    structure = dict(A.structure)
    structure[pair] = tuple(Poly.parse(v, A.base) for v in vector)
    return Algebroid(A.base, A.frame, A.anchor, structure)


def oracle_frame_jacobi(A):
    """Nonzero cyclic sums over frame triples, recomputed with sympy."""
    O = oracles.AlgebroidOracle(A)
    r = A.rank
    e = [[int(k == i) for k in range(r)] for i in range(r)]
    out = {}
    for i, j, k in itertools.combinations(range(r), 3):
        total = [0] * r
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            total = [sp.expand(u + v) for u, v in zip(total, O.bracket(e[a], O.bracket(e[b], e[c])))]
        if any(total):
            out[(i, j, k)] = total
    return out


# -- construction invariants --------------------------------------------------------------


def test_structure_requires_ordered_pairs():
    T = tangent_algebroid(XY)
    with pytest.raises(ValueError):
        Algebroid(XY, T.frame, T.anchor, {(1, 0): ("0", "1")})


def test_zero_structure_vectors_are_dropped():
    T = tangent_algebroid(XY)
    A = Algebroid(XY, T.frame, T.anchor, {(0, 1): ("0", "0")})
    assert A.structure == {}
    assert A == T


def test_shape_validation():
    with pytest.raises(ValueError):
        Algebroid(XY, ["a"], [["1"]])
    with pytest.raises(ValueError):
        Algebroid(XY, ["a", "a"], [["1", "0"], ["0", "1"]])


def test_antisymmetry_is_structural():
    A = so3()
    assert A.structure_vector(1, 0) == tuple(-c for c in A.structure_vector(0, 1))
    assert all(c.is_zero() for c in A.structure_vector(2, 2))


# -- anchor and bracket --------------------------------------------------------------------


def test_anchor_of_examples():
    T = tangent_algebroid(X)
    assert anchor_of(T.zero_section()).is_zero()
    assert anchor_of(T.section("x")) == VectorField.parse(["x"], X)
    A = so3()
    assert anchor_of(A.frame_section(0)) == VectorField.parse(["0", "-z", "y"], A.base)


def test_bracket_tangent_line():
    T = tangent_algebroid(X)
    # x*(x^2)' - x^2*(x)' = x^2
    assert bracket(T.section("x"), T.section("x^2")) == T.section("x^2")


def test_bracket_of_constant_sections_is_structure_constants():
    A = so3()
    for i, j in itertools.permutations(range(3), 2):
        assert bracket(A.frame_section(i), A.frame_section(j)).coeffs == A.structure_vector(i, j)


def test_bracket_rejects_foreign_sections():
    with pytest.raises(AlgebroidMismatchError):
        bracket(tangent_algebroid(X).section("1"), tangent_algebroid(XY).section("1", "0"))


@pytest.mark.parametrize("name", VALID_ALGEBROIDS + BROKEN_ALGEBROIDS)
def test_bracket_matches_oracle(name):
    A = load(name)
    O = oracles.AlgebroidOracle(A)
    rng = random.Random(name)
    for _ in range(3):
        s, t = random_section(A, rng, 2), random_section(A, rng, 2)
        expected = O.bracket(oracles.section_exprs(s), oracles.section_exprs(t))
        assert oracles.section_exprs(bracket(s, t)) == expected


@pytest.mark.parametrize("name", VALID_ALGEBROIDS + BROKEN_ALGEBROIDS)
def test_bracket_antisymmetric_and_leibniz(name):
    A = load(name)
    rng = random.Random(name)
    for _ in range(3):
        s, t = random_section(A, rng, 2), random_section(A, rng, 2)
        f = random_section(tangent_algebroid(A.base), rng, 2).coeffs[0] if A.base.dim else Poly.const(A.base, 3)
        assert (bracket(s, t) + bracket(t, s)).is_zero()
        assert bracket(s, s).is_zero()
        assert bracket(s, f * t) == f * bracket(s, t) + anchor_of(s)(f) * t


@pytest.mark.parametrize("name", VALID_ALGEBROIDS)
def test_anchor_preserves_brackets_on_valid_fixtures(name):
    A = load(name)
    rng = random.Random(name)
    for _ in range(3):
        s, t = random_section(A, rng, 2), random_section(A, rng, 2)
        assert anchor_of(bracket(s, t)) == anchor_of(s).bracket(anchor_of(t))


# -- axiom checks ----------------------------------------------------------------------------


def test_zero_algebroids_pass():
    for A in (zero_algebroid(XY), Algebroid(XY, [], []), load("vector_bundle_r2")):
        assert check_axioms(A).passed


def test_so3_anchor_homomorphism():
    assert check_anchor_homomorphism(so3()).passed


def test_so3_flipped_constant_residual():
    # [g1, g2] - (-1)*g3 = 2*(x d_y - y d_x), from the rotation-field oracle
    A = with_structure(so3(), (0, 1), ["0", "0", "-1"])
    item = check_anchor_homomorphism(A).item("anchor_hom")
    assert not item.passed
    assert item.witness["pair"] == [1, 2]
    assert item.witness["residual"] == {"x": "-2*y", "y": "2*x", "z": "0"}
    g = [oracles.field_exprs(A.anchor_field(i)) for i in range(3)]
    expected = [sp.expand(u + v) for u, v in zip(oracles.field_bracket(g[0], g[1], A.base.coords), g[2])]
    assert expected == [oracles.expr("-2*y", A.base.coords), oracles.expr("2*x", A.base.coords), 0]


def test_heisenberg_frame_jacobi():
    A = load("heisenberg_r1")
    assert not oracle_frame_jacobi(A)
    assert check_jacobi_frame(A).passed


@pytest.mark.parametrize("perturbation, fails", [("1 + x", False), ("1 + y", True)])
def test_perturbed_so3_frame_jacobi(perturbation, fails):
    A = with_structure(so3(), (1, 2), [perturbation, "0", "0"])
    expected = oracle_frame_jacobi(A)
    report = check_jacobi_frame(A)
    assert bool(expected) == fails == (not report.passed)
    if fails:
        item = report.item("jacobi_frame")
        assert item.witness["triple"] == [1, 2, 3]
        assert [oracles.expr(v, A.base.coords) for v in item.witness["residual"].values()] == expected[(0, 1, 2)]


def test_rank_two_frame_jacobi_is_vacuous():
    assert check_jacobi_frame(load("broken_tangent_r2")).passed


def test_jacobi_random_witness_reproduces():
    A = load("broken_heisenberg_r1")
    item = check_jacobi_random(A, n=25, max_degree=2, seed=7).item("jacobi_random")
    assert not item.passed
    s, t, u = (A.section(*w.values()) for w in item.witness["sections"].values())
    O = oracles.AlgebroidOracle(A)
    S, T, U = (oracles.section_exprs(v) for v in (s, t, u))
    total = [0] * A.rank
    for a, b, c in ((S, T, U), (T, U, S), (U, S, T)):
        total = [sp.expand(p + q) for p, q in zip(total, O.bracket(a, O.bracket(b, c)))]
    assert total == [oracles.expr(v, A.base.coords) for v in item.witness["residual"].values()]


def test_jacobi_random_is_deterministic():
    A = load("broken_so3")
    assert check_jacobi_random(A, 5, 2, 3).to_json() == check_jacobi_random(A, 5, 2, 3).to_json()


@pytest.mark.parametrize("name", ["tangent_r2", "so3_transformation"])
@pytest.mark.parametrize("seed", [0, 1, 99])
def test_jacobi_random_passes(name, seed):
    assert check_jacobi_random(load(name), 25, 2, seed).passed


@given(st.integers(0, 10**6))
def test_frame_checks_imply_random_jacobi(seed):
    A = load("sl2_transformation")
    assert check_jacobi_random(A, 3, 2, seed).passed


def test_random_coefficients_come_from_the_fixed_set():
    A = tangent_algebroid(Chart(["x", "y", "z"]))
    rng = random.Random(5)
    allowed = {Fraction(c) for c in ("-2", "-1", "-1/2", "1/2", "1", "2")}
    for _ in range(50):
        for c in random_section(A, rng, 2).coeffs:
            assert len(c.terms) <= 3 and c.degree <= 2
            assert set(c.terms.values()) <= allowed


def test_suites():
    A = load("tangent_r2")
    assert [i.check for i in check_axioms(A, "axioms").items] == ["anchor_hom", "jacobi_frame"]
    assert [i.check for i in check_axioms(A, "jacobi").items] == ["jacobi_frame", "jacobi_random"]
    assert len(check_axioms(A, "all").items) == 3
    with pytest.raises(ValueError):
        check_axioms(A, "bogus")


# -- generic rank ------------------------------------------------------------------------------


def test_generic_rank_examples():
    assert anchor_generic_rank(zero_algebroid(XY)) == 0
    assert anchor_generic_rank(load("vector_bundle_r2")) == 0
    assert anchor_generic_rank(tangent_algebroid(XY)) == 2
    A = so3()
    M = sp.Matrix([oracles.field_exprs(A.anchor_field(i)) for i in range(3)])
    assert sp.expand(M.det()) == 0 and sp.expand(M[:2, 1:].det()) != 0
    assert anchor_generic_rank(A) == 2


@pytest.mark.parametrize("name", VALID_ALGEBROIDS)
def test_generic_rank_matches_sympy(name):
    A = load(name)
    if A.rank == 0 or A.base.dim == 0:
        assert anchor_generic_rank(A) == 0
        return
    M = sp.Matrix([oracles.field_exprs(A.anchor_field(i)) for i in range(A.rank)])
    assert anchor_generic_rank(A) == M.rank(simplify=True)


def test_full_rank_anchor_kernel_is_trivial_at_random_points():
    # span(d_x + x d_y, d_y) over (x, y): full generic rank
    A = Algebroid(XY, ["a", "b"], [["1", "x"], ["0", "1"]])
    assert anchor_generic_rank(A) == 2
    rng = random.Random(3)
    for _ in range(10):
        point = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(2)]
        rows = [[c.evaluate(point) for c in row] for row in A.anchor]
        assert sp.Matrix(rows).rank() == 2
