"""Exception types shared across the package."""


class DegenerateInputError(ValueError):
    """Input points coincide or are otherwise unusable (zero vectors, etc.)."""


class DegenerateGeometryError(ValueError):
    """Normal matrix is singular or too ill-conditioned to invert."""


class InsufficientMeasurementsError(ValueError):
    """Fewer measurements than unknowns."""


class InvalidOperatingPointError(ValueError):
    """Tracked-satellite count or update rate outside the modeled range."""
