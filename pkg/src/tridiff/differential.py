"""Closed-form kinematics and torque split of the three-output differential.

Every output of the mechanism sees the same input-to-output ratio
``G = g1 * g2``.  Under equal loads all three outputs turn at ``G * omega_in``
and each carries a third of the (ratio-scaled) input torque.  Under unequal
loads the outputs keep a fixed speed sum ``3 * G * omega_in`` while the torque
split stays equal, exactly like a conventional open differential.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import IndeterminateError, InfeasibleError, ValidationError

SUM_RTOL = 1e-12


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class DifferentialSpec:
    """Gear ratios of the mechanism.

    g1 is the input shaft to ring-gear stage ratio, g2 the ring-gear stage to
    output ratio.  Both are speed ratios (driven / driver).
    """

    g1: float = 1.0
    g2: float = 1.0

    def __post_init__(self):
        for name in ("g1", "g2"):
            value = _finite(name, getattr(self, name))
            if value <= 0:
                raise ValidationError(f"{name} must be > 0, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def ratio(self) -> float:
        return self.g1 * self.g2


@dataclass(frozen=True)
class InputDrive:
    omega_in: float
    tau_in: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "omega_in", _finite("omega_in", self.omega_in))
        object.__setattr__(self, "tau_in", _finite("tau_in", self.tau_in))


@dataclass(frozen=True)
class Free:
    """Unconstrained output; free outputs share load equally among themselves."""


@dataclass(frozen=True)
class SpeedFixed:
    omega: float

    def __post_init__(self):
        object.__setattr__(self, "omega", _finite("omega", self.omega))


@dataclass(frozen=True)
class ViscousLoad:
    """Load torque proportional to output speed, ``tau = c * omega``."""

    c: float

    def __post_init__(self):
        c = _finite("c", self.c)
        if c <= 0:
            raise ValidationError(f"viscous coefficient must be > 0, got {c!r}")
        object.__setattr__(self, "c", c)


OutputConstraint = Union[Free, SpeedFixed, ViscousLoad]


@dataclass(frozen=True)
class DifferentialSolution:
    omega_out: np.ndarray
    tau_out: np.ndarray

    def __post_init__(self):
        for name in ("omega_out", "tau_out"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != (3,):
                raise ValidationError(f"{name} must hold three values")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def effective_ratio(spec: DifferentialSpec) -> float:
    return spec.ratio


def equal_load_outputs(spec: DifferentialSpec, drive: InputDrive) -> DifferentialSolution:
    G = spec.ratio
    omega = G * drive.omega_in
    tau = drive.tau_in / (3.0 * G)
    return DifferentialSolution(np.full(3, omega), np.full(3, tau))


def classify_constraints(constraints: Sequence[OutputConstraint]) -> str:
    """Return ``"free"``, ``"fixed"`` or ``"viscous"`` for a determinate set.

    Raises IndeterminateError for mixes the load model cannot close.
    """
    if len(constraints) != 3:
        raise ValidationError(f"expected 3 output constraints, got {len(constraints)}")
    kinds = set()
    for c in constraints:
        if isinstance(c, Free):
            kinds.add("free")
        elif isinstance(c, SpeedFixed):
            kinds.add("fixed")
        elif isinstance(c, ViscousLoad):
            kinds.add("viscous")
        else:
            raise ValidationError(f"unknown output constraint {c!r}")
    if kinds == {"free"}:
        return "free"
    if "viscous" in kinds:
        if kinds != {"viscous"}:
            raise IndeterminateError(
                "viscous loads must be applied to all three outputs; "
                "mixing them with free or speed-fixed outputs is not supported"
            )
        return "viscous"
    return "fixed"


def solve_with_constraints(
    spec: DifferentialSpec,
    drive: InputDrive,
    constraints: Sequence[OutputConstraint],
) -> DifferentialSolution:
    kind = classify_constraints(constraints)
    G = spec.ratio
    total = 3.0 * G * drive.omega_in
    tau = np.full(3, drive.tau_in / (3.0 * G))

    if kind == "free":
        return equal_load_outputs(spec, drive)

    if kind == "viscous":
        # equal torques => c_i * omega_i identical => omega_i proportional to 1/c_i
        inv = np.array([1.0 / c.c for c in constraints])
        return DifferentialSolution(total * inv / inv.sum(), tau)

    fixed = [i for i, c in enumerate(constraints) if isinstance(c, SpeedFixed)]
    free = [i for i, c in enumerate(constraints) if isinstance(c, Free)]
    omega = np.empty(3)
    for i in fixed:
        omega[i] = constraints[i].omega
    residual = total - sum(omega[i] for i in fixed)
    if not free:
        if abs(residual) > SUM_RTOL * max(1.0, abs(total), *(abs(omega[i]) for i in fixed)):
            raise InfeasibleError(
                f"fixed output speeds sum to {total - residual!r} but the input "
                f"requires {total!r} (= 3 * G * omega_in)"
            )
        return DifferentialSolution(omega, tau)
    share = residual / len(free)
    for i in free:
        omega[i] = share
    return DifferentialSolution(omega, tau)


def sum_residual(spec: DifferentialSpec, drive: InputDrive, solution: DifferentialSolution) -> float:
    """``sum(omega_out) - 3 G omega_in``; zero for every valid solution."""
    return float(np.sum(solution.omega_out) - 3.0 * spec.ratio * drive.omega_in)


def power_balance_residual(
    spec: DifferentialSpec, drive: InputDrive, solution: DifferentialSolution
) -> float:
    """Input power minus delivered output power, in W.

    Zero for equal-load solutions. For constrained solutions with an arbitrary
    ``tau_in`` the residual is the power the constraint absorbs or supplies.
    """
    delivered = float(np.dot(solution.tau_out, solution.omega_out))
    return drive.tau_in * drive.omega_in - delivered
