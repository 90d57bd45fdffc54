"""Exception hierarchy shared by all modules."""


class BetheFFError(Exception):
    """Base class for library errors."""


class PoleError(BetheFFError, ZeroDivisionError):
    """A kernel was evaluated inside the coincidence tolerance of a pole."""


class CoincidenceError(BetheFFError, ZeroDivisionError):
    """Two rapidities that must differ coincide within tolerance."""


class NoConvergence(BetheFFError):
    """An iterative solver stopped before reaching its tolerance."""

    def __init__(self, message, residual=float("nan"), iterations=0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class RootCollision(NoConvergence):
    """Two Bethe roots merged during Newton iteration."""


class OffShellError(BetheFFError):
    """A rapidity set required to satisfy the Bethe equations does not."""


class SiteRangeError(BetheFFError, IndexError):
    """Chain site index outside 1..M."""


class ResourceError(BetheFFError):
    """Requested dense construction exceeds the memory guard."""


class ConventionError(BetheFFError):
    """The pseudovacuum is not an eigenvector of the diagonal blocks."""
