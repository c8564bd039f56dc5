"""Exception types shared across the simulator."""


class SimulationError(Exception):
    """Base class for simulator errors."""


class ConfigError(SimulationError):
    """Invalid configuration (bad field values, incompatible combinations)."""


class GenerationError(SimulationError):
    """Environment generation could not satisfy its constraints."""
