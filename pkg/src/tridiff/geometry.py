"""Pipe networks made of straights and constant-radius bends.

Tracks sit 120 degrees apart around the pipe wall.  In a bend of centerline
radius ``R_b`` the contact point of track ``i`` lies at distance
``R_b + r cos(phi_i)`` from the bend axis, where ``phi_i = phi + 2 pi (i-1)/3``
and ``phi`` is the robot's roll angle measured from the outward (extrados)
direction in the bend plane.  ``phi = 0`` puts track 1 on the extrados.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import GeometryError, ValidationError

TRACK_OFFSETS = np.array([0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0])


def normalize_angle(phi: float) -> float:
    """Wrap a roll angle into ``[0, 2 pi)``."""
    wrapped = math.fmod(float(phi), 2.0 * math.pi)
    if wrapped < 0.0:
        wrapped += 2.0 * math.pi
    # fmod of a value just below 0 can round up to exactly 2 pi
    return 0.0 if wrapped >= 2.0 * math.pi else wrapped


@dataclass(frozen=True)
class PipeSpec:
    radius: float

    def __post_init__(self):
        r = float(self.radius)
        if not (math.isfinite(r) and r > 0):
            raise ValidationError(f"pipe radius must be > 0, got {self.radius!r}")
        object.__setattr__(self, "radius", r)


@dataclass(frozen=True)
class Straight:
    length: float

    def __post_init__(self):
        L = float(self.length)
        if not (math.isfinite(L) and L > 0):
            raise ValidationError(f"straight length must be > 0, got {self.length!r}")
        object.__setattr__(self, "length", L)


@dataclass(frozen=True)
class Bend:
    radius: float
    angle: float

    def __post_init__(self):
        R, beta = float(self.radius), float(self.angle)
        if not (math.isfinite(R) and R > 0):
            raise ValidationError(f"bend radius must be > 0, got {self.radius!r}")
        if not (0.0 < beta <= math.pi):
            raise ValidationError(f"bend angle must lie in (0, pi], got {self.angle!r}")
        object.__setattr__(self, "radius", R)
        object.__setattr__(self, "angle", beta)

    @property
    def centerline_length(self) -> float:
        return self.radius * self.angle


Segment = Union[Straight, Bend]


def check_segment(segment: Segment, pipe: PipeSpec) -> None:
    if isinstance(segment, Bend) and not segment.radius > pipe.radius:
        raise GeometryError(
            f"bend radius {segment.radius!r} must exceed pipe radius {pipe.radius!r}"
        )
    if not isinstance(segment, (Straight, Bend)):
        raise ValidationError(f"unknown segment {segment!r}")


@dataclass(frozen=True)
class PipeNetwork:
    pipe: PipeSpec
    segments: tuple[Segment, ...]

    def __post_init__(self):
        segments = tuple(self.segments)
        if not segments:
            raise ValidationError("a pipe network needs at least one segment")
        for seg in segments:
            check_segment(seg, self.pipe)
        object.__setattr__(self, "segments", segments)

    @property
    def bends(self) -> list[Bend]:
        return [s for s in self.segments if isinstance(s, Bend)]

    @property
    def centerline_length(self) -> float:
        return sum(s.length if isinstance(s, Straight) else s.centerline_length
                   for s in self.segments)


def contact_radii(bend_radius: float, pipe_radius: float, phi: float) -> np.ndarray:
    """Distance of each track's wall contact from the bend axis."""
    if not pipe_radius >= 0:
        raise GeometryError(f"pipe radius must be >= 0, got {pipe_radius!r}")
    if not bend_radius > pipe_radius:
        raise GeometryError(
            f"bend radius {bend_radius!r} must exceed pipe radius {pipe_radius!r}"
        )
    return bend_radius + pipe_radius * np.cos(phi + TRACK_OFFSETS)


def segment_track_lengths(segment: Segment, pipe: PipeSpec, phi: float = 0.0) -> np.ndarray:
    """Path length of each track through one segment."""
    check_segment(segment, pipe)
    if isinstance(segment, Straight):
        return np.full(3, segment.length)
    return contact_radii(segment.radius, pipe.radius, phi) * segment.angle


def network_track_lengths(network: PipeNetwork, orientations: Sequence[float]) -> np.ndarray:
    """Per-track path length summed over a network, one roll angle per bend."""
    orientations = list(orientations)
    if len(orientations) != len(network.bends):
        raise ValidationError(
            f"need one orientation per bend ({len(network.bends)}), got {len(orientations)}"
        )
    total = np.zeros(3)
    it = iter(orientations)
    for seg in network.segments:
        phi = next(it) if isinstance(seg, Bend) else 0.0
        total += segment_track_lengths(seg, network.pipe, phi)
    return total
