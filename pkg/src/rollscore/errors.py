"""Exception types raised by rollscore."""


class RollscoreError(Exception):
    """Base class for all library errors."""


class DegenerateHull(RollscoreError, ValueError):
    """Convex hull of the generating circles has (near) zero volume."""

    def __init__(self, message, genome=None):
        super().__init__(message)
        self.genome = genome


class NonClosedMesh(RollscoreError, ValueError):
    pass


class DegenerateTriangle(RollscoreError, ValueError):
    pass


class MismatchedLengths(RollscoreError, ValueError):
    pass


class NonPositiveRadius(RollscoreError, ValueError):
    pass


class IntegrationDiverged(RollscoreError, RuntimeError):
    pass


class MissingCurvature(RollscoreError, ValueError):
    pass


class InsufficientPoints(RollscoreError, ValueError):
    pass
