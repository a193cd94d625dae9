"""Track speed allocation and distance/time bookkeeping through a pipe network.

The robot speed is the differential's equal-load output speed times the
track sprocket radius, and it stays the same in every segment.  In a bend the
no-slip wall contact fixes each track's arc, ``R_i * beta``, and the
differential settles at the operating point that feeds exactly those arcs;
the track speeds then scale with contact radius and still average to the
robot speed, because the three radii always sum to ``3 R_b``.

A ``"fixed"`` drive, used for comparison, feeds every track at the robot
speed regardless of geometry.  The difference between the arc a track must
cover and the length its drive feeds is the slip/drag distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .clamp import ClampSpec
from .differential import DifferentialSpec, InputDrive, equal_load_outputs
from .errors import PlanMismatchError, ValidationError
from .geometry import Bend, PipeNetwork, Segment, Straight, contact_radii, normalize_angle

DRIVE_MODES = ("differential", "fixed")


@dataclass(frozen=True)
class RobotConfig:
    diff: DifferentialSpec = field(default_factory=DifferentialSpec)
    track_wheel_radius: float = 0.03
    clamp: Optional[ClampSpec] = None
    mass: Optional[float] = None

    def __post_init__(self):
        r = float(self.track_wheel_radius)
        if not (math.isfinite(r) and r > 0):
            raise ValidationError(f"track_wheel_radius must be > 0, got {self.track_wheel_radius!r}")
        object.__setattr__(self, "track_wheel_radius", r)
        if self.mass is not None and not self.mass > 0:
            raise ValidationError(f"mass must be > 0, got {self.mass!r}")

    def robot_speed(self, omega_in: float) -> float:
        omega = equal_load_outputs(self.diff, InputDrive(omega_in)).omega_out[0]
        return float(omega) * self.track_wheel_radius


@dataclass(frozen=True)
class TraversalPlan:
    omega_in: float
    orientations: tuple[float, ...] = ()
    plan_id: str = "plan"

    def __post_init__(self):
        if not (math.isfinite(self.omega_in) and self.omega_in > 0):
            raise ValidationError(f"omega_in must be > 0, got {self.omega_in!r}")
        object.__setattr__(self, "omega_in", float(self.omega_in))
        object.__setattr__(self, "orientations",
                           tuple(normalize_angle(p) for p in self.orientations))


@dataclass(frozen=True)
class SegmentReport:
    index: int
    kind: str
    orientation: Optional[float]
    contact_radii: Optional[np.ndarray]
    track_speeds: np.ndarray
    track_distances: np.ndarray
    required_distances: np.ndarray
    robot_speed: float
    robot_distance: float
    time: float
    start_time: float
    start_position: float
    slip: np.ndarray


@dataclass(frozen=True)
class TraversalReport:
    plan_id: str
    drive: str
    segments: tuple[SegmentReport, ...]
    track_distances: np.ndarray
    robot_distance: float
    total_time: float
    slip: np.ndarray

    @property
    def max_slip(self) -> float:
        return float(np.max(self.slip))


def allocate_bend_speeds(v_avg: float, radii: Sequence[float], bend_radius: float) -> np.ndarray:
    if not v_avg > 0:
        raise ValidationError(f"v_avg must be > 0, got {v_avg!r}")
    if not bend_radius > 0:
        raise ValidationError(f"bend radius must be > 0, got {bend_radius!r}")
    return v_avg * np.asarray(radii, dtype=float) / bend_radius


def _check_drive(drive: str) -> None:
    if drive not in DRIVE_MODES:
        raise ValidationError(f"drive must be one of {DRIVE_MODES}, got {drive!r}")


def _orientation_iter(network: PipeNetwork, plan: TraversalPlan):
    n_bends = len(network.bends)
    if len(plan.orientations) != n_bends:
        raise PlanMismatchError(
            f"plan {plan.plan_id!r} gives {len(plan.orientations)} orientations "
            f"for {n_bends} bends"
        )
    return iter(plan.orientations)


def _segment(index: int, seg: Segment, pipe_radius: float, phi: Optional[float],
             v: float, drive: str, t0: float, x0: float) -> SegmentReport:
    if isinstance(seg, Straight):
        time = seg.length / v
        required = np.full(3, seg.length)
        return SegmentReport(
            index, "straight", None, None, np.full(3, v), required.copy(), required,
            v, seg.length, time, t0, x0, np.zeros(3),
        )

    radii = contact_radii(seg.radius, pipe_radius, phi)
    required = radii * seg.angle
    robot_distance = seg.centerline_length
    time = robot_distance / v
    if drive == "differential":
        speeds = allocate_bend_speeds(v, radii, seg.radius)
        # wall contact closes the differential on the geometric arcs
        driven = required.copy()
    else:
        speeds = np.full(3, v)
        driven = np.full(3, robot_distance)
    slip = np.abs(required - driven)
    return SegmentReport(
        index, "bend", phi, radii, speeds, driven, required,
        v, robot_distance, time, t0, x0, slip,
    )


def simulate_traversal(
    network: PipeNetwork,
    robot: RobotConfig,
    plan: TraversalPlan,
    drive: str = "differential",
) -> TraversalReport:
    _check_drive(drive)
    phis = _orientation_iter(network, plan)
    v = robot.robot_speed(plan.omega_in)
    reports = []
    t = x = 0.0
    for i, seg in enumerate(network.segments):
        phi = next(phis) if isinstance(seg, Bend) else None
        rep = _segment(i, seg, network.pipe.radius, phi, v, drive, t, x)
        reports.append(rep)
        t += rep.time
        x += rep.robot_distance

    return TraversalReport(
        plan_id=plan.plan_id,
        drive=drive,
        segments=tuple(reports),
        track_distances=np.sum([r.track_distances for r in reports], axis=0),
        robot_distance=float(sum(r.robot_distance for r in reports)),
        total_time=float(sum(r.time for r in reports)),
        slip=np.sum([r.slip for r in reports], axis=0),
    )


def slip_drag_metric(
    network: PipeNetwork,
    robot: RobotConfig,
    plan: TraversalPlan,
    drive: str = "differential",
) -> np.ndarray:
    """Per-track slip/drag distance accumulated over the network, in m."""
    return simulate_traversal(network, robot, plan, drive).slip


def fastest_tracks(speeds: Sequence[float], rtol: float = 1e-12) -> frozenset[int]:
    """Indices tied for the highest value, within ``rtol``."""
    speeds = np.asarray(speeds, dtype=float)
    top = np.max(speeds)
    return frozenset(int(i) for i in np.flatnonzero(speeds >= top - rtol * abs(top)))
