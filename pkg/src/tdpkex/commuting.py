"""Commuting matrix families built from a shared similarity basis.

Conjugating diagonal matrices by one fixed invertible basis C yields a family
of pairwise-commuting invertible matrices: (C^-1 D1 C)(C^-1 D2 C) equals
C^-1 D1 D2 C regardless of the diagonals.  This is the fast construction the
key-agreement layer uses for its commutative subgroups.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .field_matrix import (
    DiagonalSpec,
    Matrix,
    conjugate,
    mat_mul,
    _check_same_params,
)


def commuting_from_basis(basis: Matrix, spec: DiagonalSpec) -> Matrix:
    """basis^-1 diag(spec) basis; invertible, eigenvalues are exactly spec."""
    if basis.params != spec.params:
        raise ValueError("basis and spec parameters differ")
    return conjugate(Matrix.diagonal(spec), basis)


def verify_commuting_pair(a: Matrix, b: Matrix) -> bool:
    """True iff a*b == b*a."""
    _check_same_params(a, b)
    return mat_mul(a, b) == mat_mul(b, a)


@dataclass(frozen=True)
class CommutingFamily:
    """A similarity basis plus the members derived from it so far."""

    basis: Matrix
    members: tuple[tuple[DiagonalSpec, Matrix], ...] = field(default_factory=tuple)

    @classmethod
    def from_specs(cls, basis: Matrix, specs: list[DiagonalSpec]) -> "CommutingFamily":
        members = tuple((s, commuting_from_basis(basis, s)) for s in specs)
        return cls(basis, members)

    def matrices(self) -> list[Matrix]:
        return [m for _, m in self.members]

    def pairwise_commuting(self) -> bool:
        ms = self.matrices()
        return all(
            verify_commuting_pair(ms[i], ms[j])
            for i in range(len(ms))
            for j in range(i + 1, len(ms))
        )
