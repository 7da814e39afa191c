"""Dirac modes seen by a static observer near a Schwarzschild horizon.

A free-falling (Hartle-Hawking) mode maps onto the product of the two
Boulware modes: region I, held by the static observer, and region IV,
which is causally disconnected and traced out. Geometric units
(G = c = hbar = k_B = 1) throughout.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import DomainError, PreconditionError, UnsupportedPairStateError
from .linalg import (
    NORM_TOL,
    DensityMatrix,
    State,
    StateVector,
    apply_isometry,
    level_weight,
    partial_trace,
)

# Rindler approximation is trusted only this close to the horizon
RINDLER_MAX_R0 = 1.05


class RindlerRangeWarning(UserWarning):
    pass


class DiracLevel(IntEnum):
    """Occupation basis of one Dirac frequency mode; the order fixes matrix indices."""

    VACUUM = 0
    UP = 1
    DOWN = 2
    PAIR = 3


MODE_DIM = len(DiracLevel)


@dataclass(frozen=True)
class HorizonParams:
    """Dimensionless inputs of the near-horizon map.

    ``omega_ratio`` is the mode frequency in units of the Hawking temperature,
    ``r_ratio`` the observer's radius in units of the horizon radius 2M.
    """

    omega_ratio: float
    r_ratio: float
    mass: float | None = None
    frequency: float | None = None
    radius: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.omega_ratio) and self.omega_ratio > 0):
            raise DomainError(f"Omega must be > 0, got {self.omega_ratio}")
        if not (self.r_ratio >= 1):
            raise DomainError(f"R0 must be >= 1, got {self.r_ratio}")
        physical = (self.mass, self.frequency, self.radius)
        if any(x is not None for x in physical):
            if any(x is None for x in physical):
                raise PreconditionError("mass, frequency and radius must be given together")
            omega, r0 = _ratios(self.mass, self.frequency, self.radius)
            if abs(omega - self.omega_ratio) > 1e-12 * max(1.0, omega) or abs(r0 - self.r_ratio) > 1e-12:
                raise PreconditionError("physical inputs disagree with the stored ratios")
        if self.r_ratio > RINDLER_MAX_R0:
            warnings.warn(
                f"R0 = {self.r_ratio} > {RINDLER_MAX_R0}: outside the near-horizon approximation",
                RindlerRangeWarning,
                stacklevel=3,
            )

    @classmethod
    def from_physical(cls, mass: float, frequency: float, radius: float) -> "HorizonParams":
        """Build from black-hole mass M, mode frequency and observer radius r0."""
        omega, r0 = _ratios(mass, frequency, radius)
        return cls(omega, r0, mass, frequency, radius)

    @property
    def hawking_temperature(self) -> float | None:
        return None if self.mass is None else 1.0 / (8 * math.pi * self.mass)


def _ratios(mass: float, frequency: float, radius: float) -> tuple[float, float]:
    if mass <= 0 or frequency <= 0 or radius <= 0:
        raise DomainError("mass, frequency and radius must be positive")
    return 8 * math.pi * frequency * mass, radius / (2 * mass)


def dilation_angle(params: HorizonParams) -> float:
    """q with tan q = exp(-(Omega/2) sqrt(1 - 1/R0)); pi/4 on the horizon, -> 0 far from it."""
    return math.atan(math.exp(-0.5 * params.omega_ratio * math.sqrt(1.0 - 1.0 / params.r_ratio)))


@dataclass(frozen=True, eq=False)
class BogoliubovMap:
    """16x4 map from one Hartle-Hawking mode to region I (x) region IV.

    The pair-level column is left zero and ``supported`` lists the input
    levels on which the map is an isometry.
    """

    q: float
    matrix: np.ndarray
    supported: tuple[int, ...] = (DiracLevel.VACUUM, DiracLevel.UP, DiracLevel.DOWN)


def _idx(region_i: DiracLevel, region_iv: DiracLevel) -> int:
    return int(region_i) * MODE_DIM + int(region_iv)


def mode_isometry(q: float) -> BogoliubovMap:
    if not -1e-15 <= q <= math.pi / 4 + 1e-12:
        raise DomainError(f"dilation angle must lie in [0, pi/4], got {q}")
    c, s = math.cos(q), math.sin(q)
    L = DiracLevel
    v = np.zeros((MODE_DIM * MODE_DIM, MODE_DIM), dtype=complex)

    v[_idx(L.VACUUM, L.VACUUM), L.VACUUM] = c * c
    v[_idx(L.UP, L.DOWN), L.VACUUM] = s * c
    v[_idx(L.DOWN, L.UP), L.VACUUM] = s * c
    v[_idx(L.PAIR, L.PAIR), L.VACUUM] = s * s

    v[_idx(L.UP, L.VACUUM), L.UP] = c
    v[_idx(L.PAIR, L.UP), L.UP] = s

    v[_idx(L.DOWN, L.VACUUM), L.DOWN] = c
    v[_idx(L.PAIR, L.DOWN), L.DOWN] = -s

    v.setflags(write=False)
    return BogoliubovMap(q, v)


def transform_memory_at_angle(state: State, target: int, q: float) -> DensityMatrix:
    """Replace factor ``target`` by its region-I Boulware mode at dilation angle ``q``."""
    dims = state.factor_dims
    if not 0 <= target < len(dims) or dims[target] != MODE_DIM:
        raise PreconditionError(f"factor {target} of {dims} is not a four-level Dirac mode")
    pair = level_weight(state, target, [DiracLevel.PAIR])
    if pair > NORM_TOL:
        raise UnsupportedPairStateError(
            f"unsupported pair-state input: factor {target} has weight {pair:.3e} on |p>"
        )
    bmap = mode_isometry(q)
    out = apply_isometry(state, bmap.matrix, target, out_dims=(MODE_DIM, MODE_DIM),
                         domain=bmap.supported)
    # region IV sits right after region I
    keep = [k for k in range(len(out.factor_dims)) if k != target + 1]
    return partial_trace(out, keep)


def transform_memory(state: State, target: int, params: HorizonParams) -> DensityMatrix:
    return transform_memory_at_angle(state, target, dilation_angle(params))


def state_bell_like() -> StateVector:
    """(|0>|0> + |up>|down>) / sqrt(2)."""
    dims = (MODE_DIM, MODE_DIM)
    amps = np.zeros(MODE_DIM * MODE_DIM, dtype=complex)
    amps[_idx(DiracLevel.VACUUM, DiracLevel.VACUUM)] = 1
    amps[_idx(DiracLevel.UP, DiracLevel.DOWN)] = 1
    return StateVector.normalized(amps, dims)


def state_w() -> StateVector:
    """Three-mode W state (|0 0 up> + |0 up 0> + |up 0 0>) / sqrt(3)."""
    dims = (MODE_DIM,) * 3
    amps = np.zeros(MODE_DIM ** 3, dtype=complex)
    for levels in [(0, 0, 1), (0, 1, 0), (1, 0, 0)]:
        amps[np.ravel_multi_index(levels, dims)] = 1
    return StateVector.normalized(amps, dims)


def state_w_traced() -> DensityMatrix:
    """W state with the third party traced out."""
    return partial_trace(state_w(), [0, 1])


EXAMPLE_STATES = {
    "bell": lambda: state_bell_like().density(),
    "w": state_w_traced,
}


def example_state(label: str) -> DensityMatrix:
    try:
        return EXAMPLE_STATES[label]()
    except KeyError:
        raise PreconditionError(f"unknown state {label!r}; expected one of {sorted(EXAMPLE_STATES)}") from None
