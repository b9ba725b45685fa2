"""Exception types shared across the package.

The CLI maps each class to a fixed exit code, so library code raises these
rather than bare ``ValueError``.
"""


class SetCoordError(Exception):
    """Base class for all package errors."""


class InputError(SetCoordError, ValueError):
    """Malformed input: bad shapes, unknown labels, field mismatch."""


class InfeasibleError(SetCoordError):
    """The instance admits no coordination scheme at all."""


class UncoordinatableError(InfeasibleError):
    """Linear instance with K1 V not inside Im(K3) + Im(K4) (or the BC/MAC analogue)."""


class ResourceError(SetCoordError):
    """A configured size or enumeration cap would be exceeded."""


class PreconditionError(SetCoordError):
    """A check was requested on an instance outside its hypotheses."""
