import numpy as np
import pytest

from tdpkex import (
    AlicePrivate,
    FieldParams,
    Matrix,
    ParamsMismatchError,
    PublicSetup,
    Role,
    SingularMatrixError,
    SplitMix64,
    alice_keygen,
    alice_shared,
    alice_token,
    bob_keygen,
    bob_shared,
    bob_token,
    gen_setup,
    mat_det,
    mat_inverse,
    mat_mul,
    random_nonsingular,
    run_session,
    validate_session,
)

from conftest import identity_privates

P251 = FieldParams()
P5 = FieldParams(p=5, d=2)


def _np_inv(arr, p):
    # independent Gauss-Jordan for oracle recomputation
    d = arr.shape[0]
    m = np.concatenate([arr % p, np.eye(d, dtype=np.int64)], axis=1)
    for c in range(d):
        piv = c + int(np.nonzero(m[c:, c])[0][0])
        if piv != c:
            m[[c, piv]] = m[[piv, c]]
        m[c] = m[c] * pow(int(m[c, c]), -1, p) % p
        for r in range(d):
            if r != c and m[r, c]:
                m[r] = (m[r] - m[r, c] * m[c]) % p
    return m[:, d:]


# ---------------------------------------------------------------------------
# setup
# ---------------------------------------------------------------------------

def test_setup_bases_nonsingular_and_deterministic():
    s1 = gen_setup(SplitMix64(10), P251)
    s2 = gen_setup(SplitMix64(10), P251)
    for name in ("P", "Q", "R", "S"):
        assert mat_det(getattr(s1, name)) != 0
        assert getattr(s1, name) == getattr(s2, name)


def test_setup_distinct_seeds_differ():
    for seed in range(100):
        a = gen_setup(SplitMix64(seed), P5)
        b = gen_setup(SplitMix64(seed + 1000), P5)
        assert a.P != b.P


def test_setup_rejects_p2():
    with pytest.raises(ValueError):
        gen_setup(SplitMix64(0), FieldParams(p=2, d=2))


def test_setup_rejects_singular_basis():
    singular = Matrix.from_rows(P5, [[1, 1], [1, 1]])
    ident = Matrix.identity(P5)
    with pytest.raises(SingularMatrixError):
        PublicSetup(P5, singular, ident, ident, ident)


# ---------------------------------------------------------------------------
# keygen
# ---------------------------------------------------------------------------

def test_alice_keygen_derivations_recomputed_independently():
    rs = SplitMix64(11)
    setup = gen_setup(rs, P251)
    priv = alice_keygen(rs, setup)
    for derived, basis, spec in (
        (priv.a2, setup.P, priv.d_a2),
        (priv.a3, setup.Q, priv.d_a3),
        (priv.x1, setup.R, priv.d_x1),
        (priv.x2, setup.S, priv.d_x2),
    ):
        binv = _np_inv(basis.a, 251)
        expected = (binv @ np.diag(np.array(spec.eigenvalues, dtype=np.int64)) % 251) @ basis.a % 251
        assert derived.a.tolist() == expected.tolist()
    for m in (priv.a1, priv.a2, priv.a3, priv.x1, priv.x2):
        assert mat_det(m) != 0


def test_bob_keygen_derivations_recomputed_independently():
    rs = SplitMix64(12)
    setup = gen_setup(rs, P251)
    priv = bob_keygen(rs, setup)
    for derived, basis, spec in (
        (priv.b1, setup.R, priv.d_b1),
        (priv.b2, setup.S, priv.d_b2),
        (priv.y1, setup.P, priv.d_y1),
        (priv.y2, setup.Q, priv.d_y2),
    ):
        binv = _np_inv(basis.a, 251)
        expected = (binv @ np.diag(np.array(spec.eigenvalues, dtype=np.int64)) % 251) @ basis.a % 251
        assert derived.a.tolist() == expected.tolist()


def test_private_constructor_rejects_inconsistent_material():
    rs = SplitMix64(13)
    setup = gen_setup(rs, P251)
    priv = alice_keygen(rs, setup)
    wrong = Matrix.identity(P251)
    with pytest.raises(ValueError):
        AlicePrivate(
            setup, priv.d_a2, priv.d_a3, priv.d_x1, priv.d_x2,
            priv.a1, wrong, priv.a3, priv.x1, priv.x2,
        )


def test_cross_family_commutation_by_construction():
    from tdpkex import commutator, commuting_from_basis, random_diagonal

    rs = SplitMix64(14)
    setup = gen_setup(rs, P251)
    alice = alice_keygen(rs, setup)
    # any P-family member commutes with a2, any R-family member with x1
    probe_p = commuting_from_basis(setup.P, random_diagonal(rs, P251))
    probe_r = commuting_from_basis(setup.R, random_diagonal(rs, P251))
    assert commutator(alice.a2, probe_p).is_identity()
    assert commutator(alice.x1, probe_r).is_identity()


# ---------------------------------------------------------------------------
# tokens
# ---------------------------------------------------------------------------

def test_alice_token_formula_oracle():
    rs = SplitMix64(15)
    setup = gen_setup(rs, P5)
    priv = alice_keygen(rs, setup)
    token = alice_token(priv)
    p = 5
    x1i = _np_inv(priv.x1.a, p)
    x2i = _np_inv(priv.x2.a, p)
    assert token.role is Role.ALICE
    assert token.t1.a.tolist() == (priv.a1.a @ priv.x1.a % p).tolist()
    assert token.t2.a.tolist() == ((x1i @ priv.a2.a % p) @ priv.x2.a % p).tolist()
    assert token.t3.a.tolist() == (x2i @ priv.a3.a % p).tolist()


def test_bob_token_formula_oracle():
    rs = SplitMix64(16)
    setup = gen_setup(rs, P5)
    priv = bob_keygen(rs, setup)
    token = bob_token(priv)
    p = 5
    y1i = _np_inv(priv.y1.a, p)
    y2i = _np_inv(priv.y2.a, p)
    assert token.role is Role.BOB
    assert token.t1.a.tolist() == (priv.b1.a @ priv.y1.a % p).tolist()
    assert token.t2.a.tolist() == ((y1i @ priv.b2.a % p) @ priv.y2.a % p).tolist()
    assert token.t3.a.tolist() == (y2i @ priv.b3.a % p).tolist()


def test_token_reconstructs_free_factor_given_x1():
    rs = SplitMix64(17)
    setup = gen_setup(rs, P251)
    priv = alice_keygen(rs, setup)
    token = alice_token(priv)
    assert mat_mul(token.t1, mat_inverse(priv.x1)) == priv.a1


def test_token_deterministic():
    rs = SplitMix64(18)
    setup = gen_setup(rs, P251)
    priv = alice_keygen(rs, setup)
    assert alice_token(priv) == alice_token(priv)


def test_identity_private_gives_identity_token():
    setup = gen_setup(SplitMix64(19), P251)
    alice, bob = identity_privates(setup)
    for t in (alice_token(alice), bob_token(bob)):
        assert t.t1.is_identity() and t.t2.is_identity() and t.t3.is_identity()


# ---------------------------------------------------------------------------
# shared key
# ---------------------------------------------------------------------------

def test_agreement_over_many_seeds():
    for seed in range(30):
        result = run_session(SplitMix64(seed), P251)
        assert result.agreed


def test_shared_key_equals_interleaved_product():
    result = run_session(SplitMix64(20), P251)
    k = result.alice.a1
    for f in (result.bob.b1, result.alice.a2, result.bob.b2, result.alice.a3, result.bob.b3):
        k = mat_mul(k, f)
    assert result.alice_key.k == k
    assert result.bob_key.k == k


def test_identity_parties_share_identity_key():
    setup = gen_setup(SplitMix64(21), P251)
    alice, bob = identity_privates(setup)
    ka = alice_shared(alice, bob_token(bob))
    kb = bob_shared(bob, alice_token(alice))
    assert ka.k.is_identity() and kb.k.is_identity()


def test_shared_rejects_wrong_role_token():
    result = run_session(SplitMix64(22), P5)
    with pytest.raises(ValueError):
        alice_shared(result.alice, result.alice_pub)
    with pytest.raises(ValueError):
        bob_shared(result.bob, result.bob_pub)


def test_shared_rejects_params_mismatch():
    result_a = run_session(SplitMix64(23), P5)
    result_b = run_session(SplitMix64(23), FieldParams(p=7, d=2))
    with pytest.raises(ParamsMismatchError):
        alice_shared(result_a.alice, result_b.bob_pub)


def test_tokens_do_not_equal_private_factors():
    # sanity: the published triple is not trivially the private material
    for seed in range(20):
        result = run_session(SplitMix64(seed), P251)
        assert result.alice_pub.t1 != result.alice.a1
        assert result.alice_pub.t2 != result.alice.a2


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def test_validation_passes_on_healthy_sessions():
    for seed in range(25):
        result = run_session(SplitMix64(seed), P251)
        report = validate_session(result.setup, result.alice, result.bob)
        assert report.all_required_pass
        assert not report.weak
        assert report.ok
        assert set(report.required) == {"[a2,y1]", "[a3,y2]", "[b1,x1]", "[b2,x2]"}
        assert set(report.pitfalls) == {
            "[x1,y1]", "[x2,y1]", "[x2,y2]", "[a2,b1]",
            "[a3,b2]", "[a3,b1]", "[x2,b1]", "[a3,y1]",
        }


def test_validation_flags_shared_basis_setup():
    rs = SplitMix64(24)
    base, _ = random_nonsingular(rs, P251)
    degenerate = PublicSetup(P251, base, base, base, base)
    alice = alice_keygen(rs, degenerate)
    bob = bob_keygen(rs, degenerate)
    report = validate_session(degenerate, alice, bob)
    assert report.all_required_pass
    assert report.weak
    for name in ("[x1,y1]", "[x2,y1]", "[x2,y2]"):
        assert not report.pitfalls[name].passed
        assert report.pitfalls[name].commutator.is_identity()


def test_validation_identity_parties_flags_everything():
    setup = gen_setup(SplitMix64(25), P251)
    alice, bob = identity_privates(setup)
    report = validate_session(setup, alice, bob)
    assert report.all_required_pass
    assert all(not r.passed for r in report.pitfalls.values())


def test_validation_rejects_foreign_setup():
    r1 = run_session(SplitMix64(26), P5)
    r2 = run_session(SplitMix64(27), P5)
    with pytest.raises(ParamsMismatchError):
        validate_session(r2.setup, r1.alice, r1.bob)


def test_session_counters():
    result = run_session(SplitMix64(28), P251)
    assert result.singular_redraws >= 0
    assert result.regenerations == 0
