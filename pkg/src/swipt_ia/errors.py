"""Exception types raised by the simulation layers."""


class ConfigurationError(ValueError):
    """Network or experiment configuration is out of its documented domain."""


class FeasibilityError(ValueError):
    """Requested antenna/user geometry cannot support alignment."""


class DimensionError(ValueError):
    """An array argument does not match the configured network shape."""


class SelectionError(ValueError):
    """Receiver selection asked for an impossible split of the user set."""


class NoSignalError(ValueError):
    """All channel gains vanish, so the requested allocation is undefined."""


class DegenerateWeightsError(ValueError):
    """Rate and power requirements are both zero for some user."""


class NumericError(ArithmeticError):
    """A numeric routine left its guaranteed operating envelope."""
