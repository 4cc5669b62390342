import pytest

from tdpkex import (
    CommutingFamily,
    DiagonalSpec,
    FieldParams,
    Matrix,
    SingularMatrixError,
    SplitMix64,
    commutator,
    commuting_from_basis,
    mat_det,
    mat_mul,
    random_diagonal,
    random_nonsingular,
    verify_commuting_pair,
)

P5 = FieldParams(p=5, d=2)
P251 = FieldParams()


def test_identity_basis_gives_plain_diagonal():
    spec = DiagonalSpec(P5, (2, 3))
    assert commuting_from_basis(Matrix.identity(P5), spec) == Matrix.from_rows(
        P5, [[2, 0], [0, 3]]
    )


def test_hand_example():
    basis = Matrix.from_rows(P5, [[1, 1], [0, 1]])
    assert commuting_from_basis(basis, DiagonalSpec(P5, (2, 3))) == Matrix.from_rows(
        P5, [[2, 4], [0, 3]]
    )


def test_determinant_is_product_of_eigenvalues():
    rs = SplitMix64(1)
    for _ in range(100):
        basis, _ = random_nonsingular(rs, P251)
        spec = random_diagonal(rs, P251)
        m = commuting_from_basis(basis, spec)
        expected = 1
        for v in spec.eigenvalues:
            expected = expected * v % 251
        assert mat_det(m) == expected


def test_singular_basis_rejected():
    with pytest.raises(SingularMatrixError):
        commuting_from_basis(Matrix.from_rows(P5, [[1, 1], [1, 1]]), DiagonalSpec(P5, (2, 3)))


def test_known_commuting_pair_products():
    basis = Matrix.from_rows(P5, [[1, 1], [0, 1]])
    a = commuting_from_basis(basis, DiagonalSpec(P5, (2, 3)))
    b = commuting_from_basis(basis, DiagonalSpec(P5, (4, 1)))
    assert a == Matrix.from_rows(P5, [[2, 4], [0, 3]])
    assert b == Matrix.from_rows(P5, [[4, 3], [0, 1]])
    # both orderings multiply to the same scalar matrix
    assert mat_mul(a, b) == Matrix.from_rows(P5, [[3, 0], [0, 3]])
    assert mat_mul(b, a) == Matrix.from_rows(P5, [[3, 0], [0, 3]])
    assert verify_commuting_pair(a, b)


def test_shared_basis_members_always_commute():
    rs = SplitMix64(2)
    for _ in range(1000):
        basis, _ = random_nonsingular(rs, P251)
        m1 = commuting_from_basis(basis, random_diagonal(rs, P251))
        m2 = commuting_from_basis(basis, random_diagonal(rs, P251))
        assert commutator(m1, m2).is_identity()


def test_independent_random_matrices_do_not_commute():
    rs = SplitMix64(3)
    for _ in range(100):
        a, _ = random_nonsingular(rs, P251)
        b, _ = random_nonsingular(rs, P251)
        assert not verify_commuting_pair(a, b)


def test_all_ones_spec_gives_identity():
    rs = SplitMix64(4)
    basis, _ = random_nonsingular(rs, P251)
    assert commuting_from_basis(basis, DiagonalSpec(P251, (1,) * 8)).is_identity()


def test_family_is_pairwise_commuting():
    rs = SplitMix64(5)
    basis, _ = random_nonsingular(rs, P251)
    specs = [random_diagonal(rs, P251) for _ in range(4)]
    family = CommutingFamily.from_specs(basis, specs)
    assert family.pairwise_commuting()
    assert all(mat_det(m) != 0 for m in family.matrices())
