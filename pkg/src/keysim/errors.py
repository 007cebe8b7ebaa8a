"""Exception types shared across the package."""


class KeysimError(Exception):
    """Base class for all keysim errors."""


class InvalidParameter(KeysimError):
    """An argument value is outside its documented domain."""


class BehindCamera(KeysimError):
    """A point projects to non-positive depth."""


class DegenerateProjection(KeysimError):
    """Projected geometry collapsed below usable size."""


class DegenerateConfiguration(KeysimError):
    """Point configuration too close to collinear for estimation."""


class PointAtInfinity(KeysimError):
    """Homogeneous coordinate underflowed during perspective division."""


class WarpFailure(KeysimError):
    """An image warp could not be evaluated over the requested grid."""


class InvalidConfig(KeysimError):
    """A configuration file or dict failed validation.

    `field` names the offending entry so CLI diagnostics can point at it.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class IoFailure(KeysimError):
    """Filesystem read or write failed."""


class EmptyDataset(KeysimError):
    """A training routine received no samples."""


class InsufficientSamples(KeysimError):
    """Split quotas cannot be satisfied from the available samples."""


class ShapeMismatch(KeysimError):
    """Array shapes disagree with the operation contract."""


class NonFiniteInput(KeysimError):
    """NaN or Inf encountered where finite values are required."""


class MissingCheckpoint(KeysimError):
    """A referenced model checkpoint does not exist."""


class DivergenceDetected(KeysimError):
    """A training loss became non-finite."""
