"""Derivations (D, V) of an algebroid and the Lie algebra they form.

A derivation is stored as a frame matrix plus a base vector field:
``D(e_i) = sum_j d[j][i] e_j`` (column i is the image of e_i) and ``V`` on the
base.  D is extended to all sections by ``D(f s) = f D(s) + V(f) s``, so that
axiom is built in.  :func:`check_derivation` verifies the other two on the
frame: compatibility with the bracket, and ``rho(D e_i) = [V, rho(e_i)]``.
"""
from __future__ import annotations

import random
from typing import Sequence

from .algebroid import (
    Algebroid,
    AlgebroidMismatchError,
    Section,
    anchor_of,
    bracket,
    field_witness,
    random_poly,
    random_section,
    section_witness,
)
from .exactpoly import Poly, VectorField
from .report import CheckItem, CheckReport

__all__ = [
    "Derivation",
    "check_derivation",
    "der_bracket",
    "derivation_apply",
    "inner_derivation",
]


class Derivation:
    __slots__ = ("algebroid", "matrix", "field")

    def __init__(self, algebroid: Algebroid, matrix: Sequence[Sequence], field: VectorField):
        r = algebroid.rank
        if len(matrix) != r or any(len(row) != r for row in matrix):
            raise ValueError(f"derivation matrix must be {r}x{r}")
        if field.chart != algebroid.base:
            raise ValueError("derivation field must live on the algebroid's base")
        self.algebroid = algebroid
        self.matrix = tuple(tuple(algebroid.poly(v) for v in row) for row in matrix)
        self.field = field

    @classmethod
    def zero(cls, algebroid: Algebroid) -> "Derivation":
        z = Poly.zero(algebroid.base)
        r = algebroid.rank
        return cls(algebroid, [[z] * r for _ in range(r)], VectorField.zero(algebroid.base))

    @classmethod
    def from_columns(cls, algebroid: Algebroid, columns: Sequence[Section], field: VectorField):
        r = algebroid.rank
        return cls(algebroid, [[columns[i].coeffs[j] for i in range(r)] for j in range(r)], field)

    def column(self, i: int) -> Section:
        """``D(e_i)``."""
        return Section(self.algebroid, [row[i] for row in self.matrix])

    def __call__(self, s: Section) -> Section:
        return derivation_apply(self, s)

    def _same(self, other: "Derivation") -> None:
        if other.algebroid is not self.algebroid and other.algebroid != self.algebroid:
            raise AlgebroidMismatchError("derivations of different algebroids")

    def __add__(self, other: "Derivation") -> "Derivation":
        self._same(other)
        return Derivation(
            self.algebroid,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.matrix, other.matrix)],
            self.field + other.field,
        )

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self + other.scale(Poly.const(self.algebroid.base, -1))

    def scale(self, g: Poly) -> "Derivation":
        """``(g D, g V)`` for a function g on the base."""
        return Derivation(
            self.algebroid,
            [[g * a for a in row] for row in self.matrix],
            g * self.field,
        )

    def is_zero(self) -> bool:
        return self.field.is_zero() and all(a.is_zero() for row in self.matrix for a in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return (
            self.algebroid == other.algebroid
            and self.matrix == other.matrix
            and self.field == other.field
        )

    def __hash__(self) -> int:
        return hash((self.matrix, self.field))

    def __repr__(self) -> str:
        return (
            f"Derivation(matrix={[[str(a) for a in row] for row in self.matrix]}, "
            f"field={self.field.to_strings()})"
        )


def derivation_apply(d: Derivation, s: Section) -> Section:
    """Coefficient j of the result is ``sum_i f_i d[j][i] + V(f_j)``."""
    if s.algebroid is not d.algebroid and s.algebroid != d.algebroid:
        raise AlgebroidMismatchError("section and derivation belong to different algebroids")
    out = []
    for j, row in enumerate(d.matrix):
        acc = d.field(s.coeffs[j])
        for f, a in zip(s.coeffs, row):
            if not f.is_zero() and not a.is_zero():
                acc = acc + f * a
        out.append(acc)
    return Section(d.algebroid, out)


def inner_derivation(s: Section) -> Derivation:
    """``ad(s) = [s, -]`` covering the vector field ``rho(s)``."""
    A = s.algebroid
    cols = [bracket(s, A.frame_section(i)) for i in range(A.rank)]
    return Derivation.from_columns(A, cols, anchor_of(s))


def der_bracket(d1: Derivation, d2: Derivation) -> Derivation:
    """``(D1 D2 - D2 D1, [V1, V2])`` in frame-matrix form."""
    d1._same(d2)
    A = d1.algebroid
    cols = [d1(d2.column(i)) - d2(d1.column(i)) for i in range(A.rank)]
    return Derivation.from_columns(A, cols, d1.field.bracket(d2.field))


def _leibniz_self_test(d: Derivation, samples: int, seed: int) -> None:
    # D(f s) = f D(s) + V(f) s is representational; a failure here is a bug.
    A = d.algebroid
    if not A.rank:
        return
    rng = random.Random(seed)
    for _ in range(samples):
        f = random_poly(A.base, rng, 2)
        s = random_section(A, rng, 2)
        lhs = d(f * s)
        rhs = f * d(s) + d.field(f) * s
        if lhs != rhs:
            raise AssertionError("Leibniz extension of a derivation is inconsistent")


def check_derivation(d: Derivation, subject: str | None = None, seed: int = 0) -> CheckReport:
    """Verify bracket compatibility on frame pairs and ``rho(D e_i) = [V, rho(e_i)]``."""
    A = d.algebroid
    subject = subject or f"derivation of {A.name or 'algebroid'}"
    _leibniz_self_test(d, 5, seed)

    frame = [A.frame_section(i) for i in range(A.rank)]
    images = [d.column(i) for i in range(A.rank)]
    item_i = CheckItem("derivation_i", True)
    for i in range(A.rank):
        for j in range(i + 1, A.rank):
            residual = (
                d(bracket(frame[i], frame[j]))
                - bracket(images[i], frame[j])
                - bracket(frame[i], images[j])
            )
            if not residual.is_zero():
                item_i = CheckItem(
                    "derivation_i",
                    False,
                    {"pair": [i + 1, j + 1], "residual": section_witness(residual)},
                )
                break
        if not item_i.passed:
            break

    item_iii = CheckItem("derivation_iii", True)
    for i in range(A.rank):
        residual = anchor_of(images[i]) - d.field.bracket(A.anchor_field(i))
        if not residual.is_zero():
            item_iii = CheckItem(
                "derivation_iii",
                False,
                {"index": [i + 1], "residual": field_witness(residual)},
            )
            break
    return CheckReport(subject, (item_i, item_iii))
