import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tridiff.differential import DifferentialSpec
from tridiff.errors import PlanMismatchError, ValidationError
from tridiff.geometry import Bend, PipeNetwork, PipeSpec, Straight, network_track_lengths
from tridiff.traversal import (
    RobotConfig,
    TraversalPlan,
    allocate_bend_speeds,
    fastest_tracks,
    simulate_traversal,
    slip_drag_metric,
)

HALF_PI = math.pi / 2


def robot(speed_ratio=1.0, wheel=0.03):
    return RobotConfig(DifferentialSpec(speed_ratio, 1.0), wheel)


def test_allocate_examples():
    np.testing.assert_allclose(allocate_bend_speeds(0.3, [0.6, 0.45, 0.45], 0.5),
                               [0.36, 0.27, 0.27], rtol=1e-14)
    np.testing.assert_allclose(allocate_bend_speeds(0.3, [0.5] * 3, 0.5), [0.3] * 3)
    with pytest.raises(ValidationError):
        allocate_bend_speeds(0.0, [0.5] * 3, 0.5)


def test_single_straight():
    net = PipeNetwork(PipeSpec(0.1), [Straight(1.0)])
    rep = simulate_traversal(net, robot(), TraversalPlan(10.0))
    seg = rep.segments[0]
    assert seg.robot_speed == pytest.approx(0.3)
    assert seg.track_speeds[0] == seg.track_speeds[1] == seg.track_speeds[2]
    assert rep.total_time == pytest.approx(1.0 / 0.3)
    assert rep.track_distances.tolist() == [1.0, 1.0, 1.0]


def test_single_bend():
    net = PipeNetwork(PipeSpec(0.1), [Bend(0.5, HALF_PI)])
    # v_avg = 0.25 m/s from omega_in=10, G=1, wheel radius 0.025
    rep = simulate_traversal(net, robot(wheel=0.025), TraversalPlan(10.0, (0.0,)))
    assert rep.total_time == pytest.approx(math.pi, rel=1e-14)
    np.testing.assert_allclose(rep.track_distances, [0.6 * HALF_PI, 0.45 * HALF_PI, 0.45 * HALF_PI])
    np.testing.assert_allclose(rep.track_distances, [0.9425, 0.7069, 0.7069], atol=5e-5)
    assert np.mean(rep.segments[0].track_speeds) == pytest.approx(0.25, rel=1e-14)


def test_plan_mismatch():
    net = PipeNetwork(PipeSpec(0.1), [Bend(0.5, 1.0), Straight(1.0)])
    with pytest.raises(PlanMismatchError):
        simulate_traversal(net, robot(), TraversalPlan(10.0, ()))
    with pytest.raises(ValidationError):
        TraversalPlan(0.0)
    with pytest.raises(ValidationError):
        simulate_traversal(net, robot(), TraversalPlan(10.0, (0.0,)), drive="tank")


def test_slip_examples():
    net = PipeNetwork(PipeSpec(0.1), [Bend(0.5, HALF_PI)])
    plan = TraversalPlan(10.0, (0.0,))
    assert slip_drag_metric(net, robot(), plan).tolist() == [0.0, 0.0, 0.0]
    fixed = slip_drag_metric(net, robot(), plan, drive="fixed")
    np.testing.assert_allclose(fixed, [0.1 * HALF_PI, 0.05 * HALF_PI, 0.05 * HALF_PI], atol=1e-12)
    np.testing.assert_allclose(fixed, [0.1571, 0.0785, 0.0785], atol=5e-5)


def test_fixed_slip_at_thirty_degrees():
    r, beta, phi = 0.1, HALF_PI, math.pi / 6
    cosines = [math.cos(phi), math.cos(phi + 2 * math.pi / 3), math.cos(phi + 4 * math.pi / 3)]
    expected = [r * beta * abs(c) for c in cosines]
    # |cos 30| + |cos 150| + |cos 270| = 2 cos 30
    assert sum(expected) == pytest.approx(2 * r * beta * math.cos(phi), rel=1e-12)
    net = PipeNetwork(PipeSpec(r), [Bend(0.5, beta)])
    got = slip_drag_metric(net, robot(), TraversalPlan(10.0, (phi,)), drive="fixed")
    np.testing.assert_allclose(got, expected, atol=1e-12)
    assert got.sum() == pytest.approx(0.272069, abs=1e-6)


def test_segment_bookkeeping():
    net = PipeNetwork(PipeSpec(0.08), [Straight(0.7), Bend(0.3, 2.0), Straight(0.2), Bend(0.9, 0.4)])
    rep = simulate_traversal(net, robot(1.7, 0.02), TraversalPlan(12.0, (0.4, 3.3)))
    t = x = 0.0
    for seg in rep.segments:
        assert seg.start_time == t and seg.start_position == x
        np.testing.assert_allclose(seg.track_distances, seg.track_speeds * seg.time, rtol=1e-12)
        t += seg.time
        x += seg.robot_distance
        assert seg.robot_speed == rep.segments[0].robot_speed
    assert rep.total_time == pytest.approx(t, rel=1e-15)
    assert rep.robot_distance == pytest.approx(net.centerline_length, rel=1e-15)


def test_fastest_tracks_ties():
    assert fastest_tracks([1.0, 2.0, 2.0]) == {1, 2}
    assert fastest_tracks([3.0, 2.0, 2.0]) == {0}


def _random_network(rng):
    r = float(rng.uniform(0.02, 0.3))
    segs = []
    for _ in range(int(rng.integers(1, 11))):
        if rng.random() < 0.5:
            segs.append(Straight(float(rng.uniform(0.05, 5.0))))
        else:
            segs.append(Bend(float(r * rng.uniform(1.05, 10.0)), float(rng.uniform(0.05, math.pi))))
    net = PipeNetwork(PipeSpec(r), segs)
    phis = tuple(float(p) for p in rng.uniform(0, 2 * math.pi, len(net.bends)))
    return net, phis


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_distances_equal_geometry_module(seed):
    rng = np.random.default_rng(seed)
    net, phis = _random_network(rng)
    rep = simulate_traversal(net, robot(float(rng.uniform(0.3, 3.0))), TraversalPlan(8.0, phis))
    np.testing.assert_allclose(rep.track_distances, network_track_lengths(net, phis), rtol=1e-12)
    assert not np.any(rep.slip)
    assert rep.robot_distance == pytest.approx(net.centerline_length, rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_fixed_drive_slips_in_every_bend(seed):
    net, phis = _random_network(np.random.default_rng(seed))
    rep = simulate_traversal(net, robot(), TraversalPlan(8.0, phis), drive="fixed")
    for seg in rep.segments:
        if seg.kind == "bend":
            assert seg.slip.sum() > 0
        else:
            assert not np.any(seg.slip)


@given(st.floats(0, 2 * math.pi), st.floats(0.01, 3.0))
def test_mean_track_speed_is_robot_speed(phi, ratio):
    net = PipeNetwork(PipeSpec(0.1), [Bend(0.35, 1.0)])
    rep = simulate_traversal(net, robot(ratio), TraversalPlan(10.0, (phi,)))
    seg = rep.segments[0]
    assert np.mean(seg.track_speeds) == pytest.approx(seg.robot_speed, rel=1e-12)
    assert max(fastest_tracks(seg.track_speeds)) in fastest_tracks(seg.contact_radii)
