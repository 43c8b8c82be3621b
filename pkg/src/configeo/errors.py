"""Shared exception types for the workbench."""


class ConfigeoError(Exception):
    """Base class for workbench-specific errors."""


class CapacityError(ConfigeoError):
    """A generation or enumeration request exceeds the configured budget."""


class CoincidentPointsError(ConfigeoError):
    """Two points closer than the coincidence tolerance were encountered."""


class InfeasibleError(ConfigeoError):
    """A run produced no usable data (e.g. zero accepted Monte Carlo samples)."""
