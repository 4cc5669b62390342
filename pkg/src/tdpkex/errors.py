"""Exception types shared across the package."""


class SingularMatrixError(ValueError):
    """A matrix that must be invertible has determinant zero."""


class ParamsMismatchError(ValueError):
    """Two objects built over different (prime, dimension) parameters were combined."""


class BlockTooLongError(ValueError):
    """A byte block exceeds the per-matrix payload capacity."""


class ValueOutOfRangeError(ValueError):
    """A matrix does not decode to a padded byte block (corruption or wrong key)."""


class NotUnitOrderError(ValueError):
    """The matrix order does not divide p^d - 1, so the cyclic-subgroup order search does not apply."""


class TooFewSamplesError(ValueError):
    """Not enough samples for a meaningful frequency test."""


class SearchSpaceTooLargeError(ValueError):
    """Exhaustive-search parameters exceed the enforced toy-scale bound."""


class PseudoKeyNotFoundError(RuntimeError):
    """Exhaustive search finished without an accepted candidate (should not happen for genuine sessions)."""


class FactorizationError(ValueError):
    """Trial division exhausted its budget before fully factoring the input."""


class FileFormatError(ValueError):
    """A key/ciphertext file violates the binary format (magic, record type, counts, or entry range)."""
