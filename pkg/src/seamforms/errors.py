"""Exception hierarchy.

Every failure raised on purpose by this package derives from SeamFormError,
so callers can catch one type at the CLI boundary and map it to an exit code.
"""


class SeamFormError(Exception):
    """Base class for all seamforms errors."""


class CurveError(SeamFormError):
    """Invalid curve parameters or an unsupported query for a curve kind."""


class GluingError(SeamFormError):
    """Seam correspondence cannot be built: perimeter mismatch, inadmissible
    curvature pairing, bad offset, or too few samples."""


class MeshingError(SeamFormError):
    """Triangulation of a glued boundary failed or violated an invariant."""


class MetricError(SeamFormError):
    """A cone metric is structurally or numerically invalid."""


class SolverError(SeamFormError):
    """Reconstruction did not converge.  Carries the iteration trace so the
    caller can inspect what happened."""

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = history or []


class CertificationError(SeamFormError):
    """A reconstructed body failed the convexity certificate."""


class SceneError(SeamFormError):
    """A scene file is malformed or references unknown entities."""
