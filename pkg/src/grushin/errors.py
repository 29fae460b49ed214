"""Exception types shared across the package."""


class GrushinError(Exception):
    """Base class for all library errors."""


class DomainError(GrushinError):
    """An argument is outside the mathematical domain of the operation."""


class ContractViolation(GrushinError):
    """Inconsistent inputs, e.g. a multi-index and point of different dimension."""


class TruncationError(GrushinError):
    """A spectrally active level exceeds the configured cap.

    Carries the offending level and |xi| so callers can enlarge the grid.
    """

    def __init__(self, level, xi_mag, k_max):
        self.level = level
        self.xi_mag = xi_mag
        self.k_max = k_max
        super().__init__(
            f"active level k={level} at |xi|={xi_mag:.6g} exceeds K_max={k_max}"
        )


class AliasingError(GrushinError):
    """The torus or box is too small for the requested computation."""


class WindowingError(GrushinError):
    """A sampled profile does not decay at its window edges."""


class DegenerateInputError(GrushinError):
    """A nonzero input is required (e.g. ratio with zero denominator)."""


class ConfigError(GrushinError):
    """Invalid experiment configuration; carries the offending field name."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
