import sys
from pathlib import Path

import pytest

from tdpkex import (
    AlicePrivate,
    BobPrivate,
    DiagonalSpec,
    FieldParams,
    Matrix,
)

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def p251():
    return FieldParams()


@pytest.fixture
def p5d2():
    return FieldParams(p=5, d=2)


def identity_privates(setup):
    """Degenerate all-identity key pair on a given setup (valid but weak)."""
    params = setup.params
    ones = DiagonalSpec(params, (1,) * params.d)
    ident = Matrix.identity(params)
    alice = AlicePrivate(setup, ones, ones, ones, ones, ident, ident, ident, ident, ident)
    bob = BobPrivate(setup, ones, ones, ones, ones, ident, ident, ident, ident, ident)
    return alice, bob
