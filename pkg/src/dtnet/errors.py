"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Shapes or sizes of inputs are inconsistent with the operation."""


class NumericError(ArithmeticError):
    """Non-finite values were supplied or produced mid-computation."""


class DegenerateLayerError(RuntimeError):
    """Every transform node of a candidate layer was pruned away."""


class DataFormatError(ValueError):
    """A dataset file is malformed; the message names the offending location."""


class ModelFormatError(ValueError):
    """A model container is unreadable, corrupted, or of an unknown version."""
