"""Spring wall-clamp: radial compliance and traction of the three modules.

Each module is pushed outward by ``n_springs`` preloaded linear springs and
slides radially between two hard stops.  Compression is measured inward from
the module's nominal contact radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import FitError, ObstacleTooLargeError, ValidationError

GRAVITY = 9.81
# compressions within this distance of a stop count as at the stop (rounding)
STOP_TOL = 1e-12


@dataclass(frozen=True)
class ClampSpec:
    stiffness: float                # N/m per spring
    preload: float                  # m
    travel_min: float               # m
    travel_max: float               # m
    friction: float                 # track/wall friction coefficient
    nominal_radius: float           # m, contact radius at zero compression
    n_springs: int = 4

    def __post_init__(self):
        for name in ("stiffness", "preload", "travel_min", "travel_max",
                     "friction", "nominal_radius"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValidationError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if self.stiffness <= 0:
            raise ValidationError(f"stiffness must be > 0, got {self.stiffness!r}")
        if self.preload < 0:
            raise ValidationError(f"preload must be >= 0, got {self.preload!r}")
        if not 0 <= self.travel_min < self.travel_max:
            raise ValidationError("need 0 <= travel_min < travel_max")
        if self.friction <= 0:
            raise ValidationError(f"friction must be > 0, got {self.friction!r}")
        if self.nominal_radius <= self.travel_max:
            raise ValidationError("nominal_radius must exceed travel_max")
        if int(self.n_springs) != self.n_springs or self.n_springs < 1:
            raise ValidationError(f"n_springs must be a positive integer, got {self.n_springs!r}")
        object.__setattr__(self, "n_springs", int(self.n_springs))

    @property
    def reachable_radii(self) -> tuple[float, float]:
        return self.nominal_radius - self.travel_max, self.nominal_radius - self.travel_min


@dataclass(frozen=True)
class ClampState:
    compression: np.ndarray
    normal_force: np.ndarray

    @property
    def total_force(self) -> float:
        return float(np.sum(self.normal_force))


@dataclass(frozen=True)
class TractionResult:
    passed: bool
    capacity: float
    margin: float


def normal_force(spec: ClampSpec, compression):
    """Spring force on one module; compression is clipped at the stops."""
    c = np.clip(compression, spec.travel_min, spec.travel_max)
    return spec.n_springs * spec.stiffness * (spec.preload + c)


def _state(spec: ClampSpec, compression: np.ndarray) -> ClampState:
    compression = np.asarray(compression, dtype=float)
    return ClampState(compression, normal_force(spec, compression))


def compression_for_pipe(spec: ClampSpec, pipe_radius: float) -> ClampState:
    compression = spec.nominal_radius - pipe_radius
    if compression > spec.travel_max + STOP_TOL:
        raise FitError(
            f"pipe radius {pipe_radius!r} is below the reachable band: compression "
            f"{compression:.6g} m exceeds the travel_max stop ({spec.travel_max!r} m)"
        )
    if compression < spec.travel_min - STOP_TOL:
        raise FitError(
            f"pipe radius {pipe_radius!r} is above the reachable band: compression "
            f"{compression:.6g} m is short of the travel_min stop ({spec.travel_min!r} m)"
        )
    compression = min(max(compression, spec.travel_min), spec.travel_max)
    return _state(spec, np.full(3, compression))


def asymmetric_compression(
    spec: ClampSpec, pipe_radius: float, obstructions: Sequence[float]
) -> ClampState:
    """Modules pushed inward independently by per-module radial obstructions."""
    obstructions = np.asarray(obstructions, dtype=float)
    if obstructions.shape != (3,) or np.any(obstructions < 0):
        raise ValidationError("obstructions must be three non-negative heights")
    base = compression_for_pipe(spec, pipe_radius).compression
    compression = base + obstructions
    over = np.flatnonzero(compression > spec.travel_max + STOP_TOL)
    if over.size:
        i = int(over[0])
        raise ObstacleTooLargeError(
            f"module {i + 1} needs {compression[i]:.6g} m of compression, "
            f"beyond travel_max ({spec.travel_max!r} m)"
        )
    return _state(spec, np.minimum(compression, spec.travel_max))


def traction_check(state: ClampState, spec: ClampSpec, required_force: float) -> TractionResult:
    if required_force < 0:
        raise ValidationError("required_force must be >= 0")
    capacity = spec.friction * state.total_force
    return TractionResult(capacity >= required_force, capacity, capacity - required_force)
