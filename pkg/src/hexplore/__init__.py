"""Deterministic multi-drone frontier exploration simulator."""

from .comms import CommsConfig
from .coordination import CostParams, Strategy
from .engine import RunMetrics, SimConfig, Simulation, aggregate, run
from .grid import GridKind, GridMap, generate_environment
from .kernels import USING_COMPILED

__all__ = [
    "CommsConfig",
    "CostParams",
    "Strategy",
    "RunMetrics",
    "SimConfig",
    "Simulation",
    "aggregate",
    "run",
    "GridKind",
    "GridMap",
    "generate_environment",
    "USING_COMPILED",
]
