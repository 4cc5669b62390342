"""Two-party key agreement via triple decomposition over GL(d, F_p).

The public setup is four independent random invertible bases P, Q, R, S.
Each basis carries one commuting family (conjugated diagonals); the families
are assigned so that exactly the cross-party pairs that must commute do:

    Alice                      Bob              shared basis
    a2 (families of P)   <->   y1               P
    a3 (families of Q)   <->   y2               Q
    x1 (families of R)   <->   b1               R
    x2 (families of S)   <->   b2               S

a1 and b3 are free draws from the whole group.  Alice publishes
(u, v, w) = (a1 x1, x1^-1 a2 x2, x2^-1 a3); Bob publishes
(p, q, r) = (b1 y1, y1^-1 b2 y2, y2^-1 b3).  Both sides then collapse the
other's token with their own commuting factors to the same product
a1 b1 a2 b2 a3 b3, which is the session key.

All protocol objects are immutable; sessions on distinct random sources may
run concurrently.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .commuting import commuting_from_basis
from .errors import ParamsMismatchError, SingularMatrixError
from .field_matrix import (
    DiagonalSpec,
    FieldParams,
    Matrix,
    commutator,
    mat_det,
    mat_inverse,
    mat_mul,
    random_diagonal,
    random_nonsingular,
)


class Role(enum.Enum):
    ALICE = "alice"
    BOB = "bob"


def _require_protocol_params(params: FieldParams) -> None:
    if params.p < 3:
        raise ValueError("key agreement needs p > 2 (nonzero eigenvalue choices)")


def _product(*ms: Matrix) -> Matrix:
    out = ms[0]
    for m in ms[1:]:
        out = mat_mul(out, m)
    return out


@dataclass(frozen=True)
class PublicSetup:
    """The four public eigenvector bases; all invertible, all same params."""

    params: FieldParams
    P: Matrix
    Q: Matrix
    R: Matrix
    S: Matrix

    def __post_init__(self):
        for name in ("P", "Q", "R", "S"):
            m = getattr(self, name)
            if m.params != self.params:
                raise ParamsMismatchError(f"basis {name} has foreign parameters")
            if mat_det(m) == 0:
                raise SingularMatrixError(f"basis {name} is singular")


@dataclass(frozen=True)
class AlicePrivate:
    """Alice's secret material: four eigenvalue lists, one free matrix, derived factors."""

    setup: PublicSetup
    d_a2: DiagonalSpec
    d_a3: DiagonalSpec
    d_x1: DiagonalSpec
    d_x2: DiagonalSpec
    a1: Matrix
    a2: Matrix
    a3: Matrix
    x1: Matrix
    x2: Matrix

    def __post_init__(self):
        s = self.setup
        checks = (
            (self.a2, s.P, self.d_a2),
            (self.a3, s.Q, self.d_a3),
            (self.x1, s.R, self.d_x1),
            (self.x2, s.S, self.d_x2),
        )
        for derived, basis, spec in checks:
            # derived == basis^-1 diag basis, tested inversion-free
            if mat_mul(basis, derived) != mat_mul(Matrix.diagonal(spec), basis):
                raise ValueError("derived matrix does not match its basis and eigenvalues")
        if mat_det(self.a1) == 0:
            raise SingularMatrixError("a1 is singular")


@dataclass(frozen=True)
class BobPrivate:
    """Bob's secret material; mirror image of Alice's with bases swapped."""

    setup: PublicSetup
    d_b1: DiagonalSpec
    d_b2: DiagonalSpec
    d_y1: DiagonalSpec
    d_y2: DiagonalSpec
    b1: Matrix
    b2: Matrix
    b3: Matrix
    y1: Matrix
    y2: Matrix

    def __post_init__(self):
        s = self.setup
        checks = (
            (self.b1, s.R, self.d_b1),
            (self.b2, s.S, self.d_b2),
            (self.y1, s.P, self.d_y1),
            (self.y2, s.Q, self.d_y2),
        )
        for derived, basis, spec in checks:
            if mat_mul(basis, derived) != mat_mul(Matrix.diagonal(spec), basis):
                raise ValueError("derived matrix does not match its basis and eigenvalues")
        if mat_det(self.b3) == 0:
            raise SingularMatrixError("b3 is singular")


@dataclass(frozen=True)
class PublicToken:
    """The published triple: (u, v, w) from Alice or (p, q, r) from Bob."""

    role: Role
    t1: Matrix
    t2: Matrix
    t3: Matrix

    @property
    def params(self) -> FieldParams:
        return self.t1.params

    def __post_init__(self):
        if not (self.t1.params == self.t2.params == self.t3.params):
            raise ParamsMismatchError("token matrices have mixed parameters")


@dataclass(frozen=True)
class SessionKey:
    """The agreed key matrix; invertible because all six factors are."""

    k: Matrix

    def __post_init__(self):
        if mat_det(self.k) == 0:
            raise SingularMatrixError("session key is singular")


def gen_setup(rs, params: FieldParams) -> PublicSetup:
    """Draw the four public bases P, Q, R, S independently from GL(d, F_p)."""
    setup, _ = _gen_setup_counted(rs, params)
    return setup


def _gen_setup_counted(rs, params: FieldParams) -> tuple[PublicSetup, int]:
    _require_protocol_params(params)
    redraws = 0
    bases = []
    for _ in range(4):
        m, rej = random_nonsingular(rs, params)
        redraws += rej
        bases.append(m)
    return PublicSetup(params, *bases), redraws


def alice_keygen(rs, setup: PublicSetup) -> AlicePrivate:
    """Draw Alice's eigenvalue lists and free factor, derive a2, a3, x1, x2."""
    priv, _, _ = _alice_keygen_counted(rs, setup)
    return priv


def _alice_keygen_counted(rs, setup: PublicSetup) -> tuple[AlicePrivate, int, int]:
    params = setup.params
    regenerations = 0
    redraws = 0
    while True:
        d_a2 = random_diagonal(rs, params)
        d_a3 = random_diagonal(rs, params)
        d_x1 = random_diagonal(rs, params)
        d_x2 = random_diagonal(rs, params)
        x1 = commuting_from_basis(setup.R, d_x1)
        x2 = commuting_from_basis(setup.S, d_x2)
        if mat_det(mat_mul(x1, x2)) == 0:  # cannot happen; mirrors the regenerate-on-singular policy
            regenerations += 1
            continue
        a1, rej = random_nonsingular(rs, params)
        redraws += rej
        a2 = commuting_from_basis(setup.P, d_a2)
        a3 = commuting_from_basis(setup.Q, d_a3)
        if mat_det(_product(a1, a2, a3)) == 0:
            regenerations += 1
            continue
        priv = AlicePrivate(setup, d_a2, d_a3, d_x1, d_x2, a1, a2, a3, x1, x2)
        return priv, redraws, regenerations


def bob_keygen(rs, setup: PublicSetup) -> BobPrivate:
    """Draw Bob's eigenvalue lists and free factor, derive b1, b2, y1, y2."""
    priv, _, _ = _bob_keygen_counted(rs, setup)
    return priv


def _bob_keygen_counted(rs, setup: PublicSetup) -> tuple[BobPrivate, int, int]:
    params = setup.params
    regenerations = 0
    redraws = 0
    while True:
        d_b1 = random_diagonal(rs, params)
        d_b2 = random_diagonal(rs, params)
        d_y1 = random_diagonal(rs, params)
        d_y2 = random_diagonal(rs, params)
        y1 = commuting_from_basis(setup.P, d_y1)
        y2 = commuting_from_basis(setup.Q, d_y2)
        if mat_det(mat_mul(y1, y2)) == 0:
            regenerations += 1
            continue
        b1 = commuting_from_basis(setup.R, d_b1)
        b2 = commuting_from_basis(setup.S, d_b2)
        b3, rej = random_nonsingular(rs, params)
        redraws += rej
        if mat_det(_product(b1, b2, b3)) == 0:
            regenerations += 1
            continue
        priv = BobPrivate(setup, d_b1, d_b2, d_y1, d_y2, b1, b2, b3, y1, y2)
        return priv, redraws, regenerations


def alice_token(priv: AlicePrivate) -> PublicToken:
    """u = a1 x1, v = x1^-1 a2 x2, w = x2^-1 a3."""
    u = mat_mul(priv.a1, priv.x1)
    v = _product(mat_inverse(priv.x1), priv.a2, priv.x2)
    w = mat_mul(mat_inverse(priv.x2), priv.a3)
    return PublicToken(Role.ALICE, u, v, w)


def bob_token(priv: BobPrivate) -> PublicToken:
    """p = b1 y1, q = y1^-1 b2 y2, r = y2^-1 b3."""
    p = mat_mul(priv.b1, priv.y1)
    q = _product(mat_inverse(priv.y1), priv.b2, priv.y2)
    r = mat_mul(mat_inverse(priv.y2), priv.b3)
    return PublicToken(Role.BOB, p, q, r)


def alice_shared(priv: AlicePrivate, token: PublicToken) -> SessionKey:
    """K = a1 p a2 q a3 r, which telescopes to a1 b1 a2 b2 a3 b3."""
    if token.role is not Role.BOB:
        raise ValueError("alice_shared needs the peer (Bob) token")
    if token.params != priv.setup.params:
        raise ParamsMismatchError("token parameters differ from private key")
    k = _product(priv.a1, token.t1, priv.a2, token.t2, priv.a3, token.t3)
    return SessionKey(k)


def bob_shared(priv: BobPrivate, token: PublicToken) -> SessionKey:
    """K = u b1 v b2 w b3, which telescopes to a1 b1 a2 b2 a3 b3."""
    if token.role is not Role.ALICE:
        raise ValueError("bob_shared needs the peer (Alice) token")
    if token.params != priv.setup.params:
        raise ParamsMismatchError("token parameters differ from private key")
    k = _product(token.t1, priv.b1, token.t2, priv.b2, token.t3, priv.b3)
    return SessionKey(k)


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    commutator: Matrix


@dataclass(frozen=True)
class ValidationReport:
    """Result of the session health checks.

    ``required`` lists the cross-party commutation conditions the key
    agreement depends on (must all hold).  ``pitfalls`` lists commutators
    that must NOT be the identity; if any of them is, the private material is
    degenerate enough that the session key leaks from public data, so the
    session is flagged weak.  Advisory only: callers decide whether to abort.
    """

    required: dict[str, CheckResult]
    pitfalls: dict[str, CheckResult]

    @property
    def all_required_pass(self) -> bool:
        return all(r.passed for r in self.required.values())

    @property
    def weak(self) -> bool:
        return any(not r.passed for r in self.pitfalls.values())

    @property
    def ok(self) -> bool:
        return self.all_required_pass and not self.weak


def validate_session(setup: PublicSetup, alice: AlicePrivate, bob: BobPrivate) -> ValidationReport:
    """Check required commutation conditions and degenerate-commutation pitfalls."""
    if alice.setup != setup or bob.setup != setup:
        raise ParamsMismatchError("private keys built on a different setup")
    required_pairs = {
        "[a2,y1]": (alice.a2, bob.y1),
        "[a3,y2]": (alice.a3, bob.y2),
        "[b1,x1]": (bob.b1, alice.x1),
        "[b2,x2]": (bob.b2, alice.x2),
    }
    pitfall_pairs = {
        "[x1,y1]": (alice.x1, bob.y1),
        "[x2,y1]": (alice.x2, bob.y1),
        "[x2,y2]": (alice.x2, bob.y2),
        "[a2,b1]": (alice.a2, bob.b1),
        "[a3,b2]": (alice.a3, bob.b2),
        "[a3,b1]": (alice.a3, bob.b1),
        "[x2,b1]": (alice.x2, bob.b1),
        "[a3,y1]": (alice.a3, bob.y1),
    }
    required = {}
    for name, (a, b) in required_pairs.items():
        c = commutator(a, b)
        required[name] = CheckResult(passed=c.is_identity(), commutator=c)
    pitfalls = {}
    for name, (a, b) in pitfall_pairs.items():
        c = commutator(a, b)
        pitfalls[name] = CheckResult(passed=not c.is_identity(), commutator=c)
    return ValidationReport(required=required, pitfalls=pitfalls)


@dataclass(frozen=True)
class SessionResult:
    """One full seeded exchange, with the redraw counters the statistics use."""

    setup: PublicSetup
    alice: AlicePrivate
    bob: BobPrivate
    alice_pub: PublicToken
    bob_pub: PublicToken
    alice_key: SessionKey
    bob_key: SessionKey
    singular_redraws: int
    regenerations: int

    @property
    def agreed(self) -> bool:
        return self.alice_key.k == self.bob_key.k


def run_session(rs, params: FieldParams) -> SessionResult:
    """Run setup, both keygens, token exchange and both key derivations."""
    setup, redraws = _gen_setup_counted(rs, params)
    alice, r_a, g_a = _alice_keygen_counted(rs, setup)
    bob, r_b, g_b = _bob_keygen_counted(rs, setup)
    tok_a = alice_token(alice)
    tok_b = bob_token(bob)
    k_a = alice_shared(alice, tok_b)
    k_b = bob_shared(bob, tok_a)
    return SessionResult(
        setup=setup,
        alice=alice,
        bob=bob,
        alice_pub=tok_a,
        bob_pub=tok_b,
        alice_key=k_a,
        bob_key=k_b,
        singular_redraws=redraws + r_a + r_b,
        regenerations=g_a + g_b,
    )
