"""Exception types shared across the package."""


class RescalingError(Exception):
    """Base class for all algorithmic failures in this package."""


class DegenerateDirection(RescalingError):
    """A dilation direction has norm below the numerical floor."""


class InvalidDilation(RescalingError):
    """Dilation constant must be strictly greater than 1."""


class CurvatureViolation(RescalingError):
    """The curvature scalar s'y is not strictly positive, so the BFGS
    update is undefined."""


class NonDescentDirection(RescalingError):
    """The trial step satisfies s'g >= 0, so the factored update's
    square root is undefined."""


class DegenerateCurvature(RescalingError):
    """The Cholesky-style scalar beta = h'(h - p) is below the floor."""


class DegenerateGradient(RescalingError):
    """A (sub)gradient required to be nonzero has norm below the floor."""


class ZeroDirection(RescalingError):
    """A norm-dependent oracle was queried with an unnormalizable
    direction."""


class OracleDisagreement(RescalingError):
    """Two independent routes to a reference optimum disagree beyond
    tolerance."""
