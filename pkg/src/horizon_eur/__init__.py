"""Entropic uncertainty bounds with a quantum memory near a Schwarzschild horizon."""

from .bounds import BoundReport, evaluate, full_report
from .horizon import HorizonParams, dilation_angle, state_bell_like, state_w_traced, transform_memory
from .linalg import DensityMatrix, StateVector

__all__ = [
    "BoundReport",
    "DensityMatrix",
    "HorizonParams",
    "StateVector",
    "dilation_angle",
    "evaluate",
    "full_report",
    "state_bell_like",
    "state_w_traced",
    "transform_memory",
]
