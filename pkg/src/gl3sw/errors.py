"""Exception types shared across the package."""


class Gl3swError(Exception):
    """Base class for all package errors."""


class DepthError(Gl3swError):
    """A weight or presentation is not deep enough for the requested operation."""


class LatticeError(Gl3swError):
    """A weight difference fails a lattice membership requirement."""


class CompatibilityError(Gl3swError):
    """Central characters / coordinate systems of two objects do not match."""


class ConsistencyError(Gl3swError):
    """An internal invariant (e.g. theta-injectivity of a walk closure) failed."""


class ClassificationError(Gl3swError):
    """A weight set does not match any of the six template cases."""


class SingularMatrixError(Gl3swError):
    """Matrix over the Laurent field is not invertible."""


class NotIwahoriAdapted(Gl3swError):
    """Matrix is not upper triangular with unit diagonal modulo v."""


class RelationViolation(Gl3swError):
    """A coefficient assignment does not satisfy the chart's defining ideal."""


class MissingVariable(Gl3swError):
    """A required coefficient name is absent from an assignment."""


class UnknownRow(Gl3swError):
    """Chart row identifier is not one of the tabulated ones."""


class UnlistedComponent(Gl3swError):
    """Component label is not listed for the given chart row."""


class VerificationFailure(Gl3swError):
    """A mechanical ideal verification did not hold; carries the offending data."""


class SchemaError(Gl3swError):
    """A CLI job document failed schema validation."""
