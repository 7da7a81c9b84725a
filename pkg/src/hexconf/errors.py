"""Exception types shared across the package."""


class HexconfError(Exception):
    """Base class for all package-specific errors."""


class InvalidArgumentError(HexconfError, ValueError):
    """An argument is outside the documented domain."""


class InvalidTriangleError(HexconfError, ValueError):
    """Edge lengths violate a strict triangle inequality or are degenerate."""


class NotAcuteError(HexconfError, ValueError):
    """A triangle angle exceeds the required acuteness bound."""


class InvalidEdgeError(HexconfError, ValueError):
    """The requested vertex pair is not an (interior) edge of the patch."""


class InvalidFactorError(HexconfError, ValueError):
    """A conformal factor produces an invalid face; message names the face."""


class NotFlatError(HexconfError, ValueError):
    """Curvature precondition |K| <= tol fails at a required vertex."""


class NotLinearError(HexconfError, ValueError):
    """The conformal factor is not linear where linearity is required."""


class DegenerateError(HexconfError, ValueError):
    """Consecutive layout points coincide; no similarity can be extracted."""


class IncompleteDataError(HexconfError, KeyError):
    """A vertex function is missing a required vertex."""


class DomainTooSmallError(HexconfError, ValueError):
    """The finite domain cannot hold the ball the search requires."""

    def __init__(self, message, required_radius):
        super().__init__(message)
        self.required_radius = required_radius


class NotFoundError(HexconfError, LookupError):
    """The constructive search found no admissible candidate."""


class SolverStuckError(HexconfError, RuntimeError):
    """Newton backtracking cannot produce a valid decreasing step."""


class DataError(HexconfError, ValueError):
    """A file does not match the documented JSON schema."""
