"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: validation/parse problems -> 2,
"nothing to decompose" outcomes -> 3, numerical failures -> 4.
"""


class LsdecompError(Exception):
    """Base class for all package errors."""


class ValidationError(LsdecompError):
    """An object violates its structural invariants."""


class NotHermitian(ValidationError):
    pass


class NotPSD(ValidationError):
    pass


class BadIndex(ValidationError):
    pass


class WrongDims(ValidationError):
    pass


class BadParams(ValidationError):
    pass


class ParseError(ValidationError):
    pass


class DimMismatch(ValidationError):
    pass


class DecompositionError(LsdecompError):
    """Base class for failures while building a decomposition."""


class NotEntangled(DecompositionError):
    """The state is separable; there is nothing to split off."""


class NoApplicableCase(DecompositionError):
    """No analytic branch covers the given parameters."""


class UnsupportedShape(DecompositionError):
    """Parameters fall outside the shape a branch was derived for."""


class ConstraintViolated(DecompositionError):
    """A validity inequality on the requested entangled part fails."""


class NumericalError(LsdecompError):
    """Base class for numerical failures (exit code 4)."""


class NoConvergence(NumericalError):
    """Iterative root finding did not reach the residual target."""


class InvalidDecomposition(NumericalError):
    """A constructed triple fails reconstruction or positivity checks."""


class MixedEntangledPart(DecompositionError):
    """Average concurrence is undefined for a mixed entangled part."""


class EmptyGrid(ValidationError):
    """A boundary sampler produced no admissible candidates."""
