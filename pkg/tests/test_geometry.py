import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tridiff.errors import GeometryError, ValidationError
from tridiff.geometry import (
    Bend,
    PipeNetwork,
    PipeSpec,
    Straight,
    contact_radii,
    network_track_lengths,
    normalize_angle,
    segment_track_lengths,
)

angles = st.floats(-20.0, 20.0)


def torus_path_length(bend_radius, pipe_radius, beta, phi, n=20000):
    """Chord-sum length of a wall line through a torus bend (bend axis = z)."""
    theta = np.linspace(0.0, beta, n + 1)
    er = np.stack([np.cos(theta), np.sin(theta), np.zeros_like(theta)], axis=1)
    ez = np.array([0.0, 0.0, 1.0])
    pts = bend_radius * er + pipe_radius * (math.cos(phi) * er + math.sin(phi) * ez)
    return float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))


def test_contact_radii_examples():
    np.testing.assert_allclose(contact_radii(0.5, 1e-15, 1.234), [0.5] * 3, atol=1e-12)
    np.testing.assert_allclose(contact_radii(0.5, 0.1, 0.0), [0.6, 0.45, 0.45], atol=1e-12)
    np.testing.assert_allclose(contact_radii(0.5, 0.1, math.pi), [0.4, 0.55, 0.55], atol=1e-12)


def test_contact_radii_rejects_thin_bend():
    with pytest.raises(GeometryError):
        contact_radii(0.1, 0.1, 0.0)


def test_segment_lengths_examples():
    pipe = PipeSpec(0.1)
    for phi in (0.0, 1.0, 4.0):
        assert segment_track_lengths(Straight(2.0), pipe, phi).tolist() == [2.0] * 3
    got = segment_track_lengths(Bend(0.5, math.pi / 2), pipe, 0.0)
    np.testing.assert_allclose(got, [0.6 * math.pi / 2, 0.45 * math.pi / 2, 0.45 * math.pi / 2])
    np.testing.assert_allclose(got, [0.9425, 0.7069, 0.7069], atol=5e-5)


@pytest.mark.parametrize("phi", [0.0, 0.3, 1.2, 2.5, 4.0, 5.9])
def test_arc_lengths_match_torus_chords(phi):
    bend, pipe = Bend(0.5, 1.3), PipeSpec(0.12)
    got = segment_track_lengths(bend, pipe, phi)
    for i in range(3):
        ref = torus_path_length(0.5, 0.12, 1.3, phi + 2 * math.pi * i / 3)
        assert abs(got[i] - ref) <= 1e-8 * ref


def test_segment_validation():
    with pytest.raises(ValidationError):
        Straight(0.0)
    with pytest.raises(ValidationError):
        Bend(0.5, 0.0)
    with pytest.raises(ValidationError):
        Bend(0.5, math.pi + 1e-9)
    Bend(0.5, math.pi)
    with pytest.raises(GeometryError):
        PipeNetwork(PipeSpec(0.2), [Bend(0.2, 1.0)])
    with pytest.raises(ValidationError):
        PipeNetwork(PipeSpec(0.2), [])


def test_network_lengths_need_one_phi_per_bend():
    net = PipeNetwork(PipeSpec(0.1), [Straight(1.0), Bend(0.4, 1.0), Bend(0.6, 0.5)])
    with pytest.raises(ValidationError):
        network_track_lengths(net, [0.0])
    got = network_track_lengths(net, [0.0, math.pi])
    np.testing.assert_allclose(got[0], 1.0 + 0.5 * 1.0 + 0.5 * 0.5)


@given(angles)
def test_normalize_angle_range(phi):
    a = normalize_angle(phi)
    assert 0.0 <= a < 2 * math.pi
    assert math.isclose(math.cos(a), math.cos(phi), abs_tol=1e-12)
    assert math.isclose(math.sin(a), math.sin(phi), abs_tol=1e-12)


@given(st.floats(0.01, 5.0), st.floats(0.001, 0.999), angles)
def test_radii_sum_and_bounds(R, frac, phi):
    r = frac * R
    radii = contact_radii(R, r, phi)
    assert abs(radii.sum() - 3 * R) <= 1e-12 * max(1.0, R)
    assert np.all(radii > R - r - 1e-15) and np.all(radii <= R + r + 1e-15)


@given(st.floats(0.01, 5.0), st.floats(0.001, 0.999), angles)
def test_rotation_by_third_turn_permutes(R, frac, phi):
    r = frac * R
    a = contact_radii(R, r, phi)
    b = contact_radii(R, r, phi + 2 * math.pi / 3)
    np.testing.assert_allclose(b, np.roll(a, -1), atol=1e-12 * max(1.0, R))


@given(st.floats(0.01, 5.0), st.floats(0.001, 0.999), angles, st.floats(0.01, math.pi))
def test_lengths_periodic_and_centered(R, frac, phi, beta):
    pipe, bend = PipeSpec(frac * R), Bend(R, beta)
    a = segment_track_lengths(bend, pipe, phi)
    b = segment_track_lengths(bend, pipe, phi + 2 * math.pi)
    np.testing.assert_allclose(a, b, atol=1e-12 * max(1.0, R))
    assert abs(np.sum(a - R * beta)) <= 1e-12 * max(1.0, R)


def test_extremes_at_inner_and_outer():
    radii = contact_radii(0.5, 0.1, 0.0)
    assert radii[0] == pytest.approx(0.6)       # track 1 on extrados
    radii = contact_radii(0.5, 0.1, math.pi)
    assert radii[0] == pytest.approx(0.4)       # track 1 on intrados
