"""Exception hierarchy shared by every module of the package."""


class FhsError(Exception):
    """Base class for all errors raised by fhsets."""


class InvalidInputError(FhsError, ValueError):
    """An argument violates the documented precondition of an operation."""


class UnsupportedParametersError(FhsError, ValueError):
    """Parameters are well formed but outside what a construction supports."""


class NotApplicableError(FhsError, ValueError):
    """The requested quantity is undefined for the given parameters."""


class FixtureError(FhsError):
    """An imported base design is missing or fails its re-verification."""


class SchemaError(FhsError, ValueError):
    """A design file does not conform to the JSON schema."""


class ConstructionError(FhsError, RuntimeError):
    """A construction produced an output that fails its own verifier.

    This always indicates a bug, never bad user input.
    """
