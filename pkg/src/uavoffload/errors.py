"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid or inconsistent configuration values."""


class NoRootError(RuntimeError):
    """A bracketed root search found no sign change in its interval."""


class HoverLimitError(RuntimeError):
    """Requested altitude needs more hovering power than the airframe supplies."""


class NoCandidateError(RuntimeError):
    """Every neighbor cell is already at its association capacity."""


class InfeasibleError(RuntimeError):
    """Excess users remain but no neighbor has capacity to absorb them."""
