"""Scalar products and form factors of quantum integrable models."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    CoincidenceError,
    ConventionError,
    NoConvergence,
    OffShellError,
    PoleError,
    ResourceError,
    RootCollision,
    SiteRangeError,
)
from .models import FormFactorResult, ModelSpec, RapiditySet  # noqa: F401
from .bethe import BetheState  # noqa: F401
