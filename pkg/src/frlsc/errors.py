"""Exception types shared across the package."""


class StructuralError(ValueError):
    """Incompatible grids, channel counts, or vector lengths."""


class NumericError(RuntimeError):
    """A numerical routine failed to meet its convergence contract."""


class DataError(ValueError):
    """A dataset file could not be parsed or violates the schema."""
