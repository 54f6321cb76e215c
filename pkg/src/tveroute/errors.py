"""Exception types raised by the planner."""


class ConfigurationError(ValueError):
    """Invalid scenario, grid, or search configuration."""


class DomainError(ValueError):
    """A flow query fell outside the spatial extent of a gridded field."""
