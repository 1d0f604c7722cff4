"""Exception hierarchy shared by all modules."""


class HullspanError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(HullspanError, ValueError):
    """Non-finite coordinates, coincident points, mismatched lengths."""


class DegenerateError(HullspanError, ValueError):
    """Input is valid but lies in a degenerate configuration."""


class DegenerateTriangleError(DegenerateError):
    pass


class DegeneratePlaneError(DegenerateError):
    pass


class DegenerateCycleError(DegenerateError):
    pass


class DimensionError(HullspanError, ValueError):
    """Too few points, or points spanning fewer than three dimensions."""


class DomainError(HullspanError, ValueError):
    """Argument outside the domain of a closed-form function."""


class GeneralPositionError(HullspanError, ValueError):
    """A section plane passes (within tolerance) through a third vertex."""


class InvalidChainError(HullspanError, ValueError):
    """A face or triangle sequence is not edge-connected."""


class UnreachableError(HullspanError):
    """No path joins the requested pair of graph vertices."""


class ConstructionError(HullspanError, ValueError):
    """Parameters of a fixture construction are infeasible."""


class GenerationError(HullspanError):
    """A randomized generator gave up after its retry budget."""

    def __init__(self, message: str, seed: int | None = None):
        super().__init__(message if seed is None else f"{message} (seed={seed})")
        self.seed = seed
