"""Exception types shared across the package."""


class PointOnHypersurfaceError(ValueError):
    """The evaluated form vanishes at the point, so no Weil multiplier exists."""


class CoordinateChangeRequiredError(ValueError):
    """A leading coefficient is zero; apply a coordinate change first."""


class PositionError(ValueError):
    """A family failed a (sub)general-position precondition."""


class SearchExhaustedError(RuntimeError):
    """The bounded combination search ended without an accepted candidate."""


class ConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


class ConfigError(ValueError):
    """Invalid campaign configuration; carries a field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")
