"""Exception hierarchy used across the package."""


class ConelatError(Exception):
    """Base class for all errors raised by conelat."""


class DimensionError(ConelatError, ValueError):
    """Operands have incompatible shapes."""


class ConeError(ConelatError, ValueError):
    """A cone description is malformed or violates a cone axiom.

    Attributes
    ----------
    witness : numpy.ndarray or None
        A nonzero direction ``d`` with both ``d`` and ``-d`` in the cone when
        the failure is a lineality (non-pointedness) failure.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnsupportedRepresentationError(ConelatError):
    """The operation needs a cone representation that is not available."""


class ConvergenceError(ConelatError, RuntimeError):
    """An iterative kernel hit its iteration cap or failed its exit checks."""


class ProjectionError(ConelatError):
    """A computed projection failed the nearest-point characterization."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals or {}


class ContextError(ConelatError, ValueError):
    """An ordered-pair context is invalid for the requested operation."""


class CertificationError(ConelatError):
    """A certificate that must hold was refuted.

    Carries whatever evidence was produced (certificate object, residuals,
    witness vector) so callers can inspect and re-verify it.
    """

    def __init__(self, message, certificate=None, residuals=None, witness=None):
        super().__init__(message)
        self.certificate = certificate
        self.residuals = residuals or {}
        self.witness = witness


class NotInSetError(ConelatError, ValueError):
    """A point handed to a certificate routine is not in the envelope set."""
