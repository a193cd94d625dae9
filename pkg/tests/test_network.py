import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tridiff.differential import DifferentialSpec, Free, SpeedFixed, ViscousLoad
from tridiff.errors import IndeterminateError, InfeasibleError
from tridiff.network import (
    GearNetwork,
    GearPair,
    assemble_system,
    build_canonical_network,
    compare_to_closed_form,
    cyclic_shaft_map,
    is_cyclically_symmetric,
    junction_residuals,
    random_determinate_case,
    run_equivalence_suite,
    solve_network,
)


def test_canonical_structure():
    net = build_canonical_network(DifferentialSpec(1, 1))
    assert len(net.shafts) == 14
    assert len(net.junctions) == 6
    assert len(net.gear_pairs) == 4
    assert len(net.outputs) == 3
    assert sum(j.carrier_drives for j in net.junctions) == 3
    # every side shaft is shared by one input-stage and one output-stage junction
    for side in range(2, 8):
        users = [j for j in net.junctions if side in (j.side_a, j.side_b)]
        assert sorted(j.carrier_drives for j in users) == [False, True]
    assert is_cyclically_symmetric(net)


def test_ratios_stored_on_stage_pairs():
    net = build_canonical_network(DifferentialSpec(2, 3))
    first, *rest = net.gear_pairs
    assert (first.driver, first.ratio) == (net.input, 2.0)
    assert [p.ratio for p in rest] == [3.0, 3.0, 3.0]
    assert [p.driven for p in rest] == list(net.outputs)


def test_cyclic_map_rotates_outputs():
    net = build_canonical_network(DifferentialSpec(1.2, 0.8))
    m = cyclic_shaft_map(net)
    o = net.outputs
    assert [m[o[0]], m[o[1]], m[o[2]]] == [o[1], o[2], o[0]]
    assert m[net.input] == net.input


def test_broken_symmetry_is_detected():
    net = build_canonical_network(DifferentialSpec())
    pairs = net.gear_pairs[:3] + (GearPair(net.gear_pairs[3].driver, net.gear_pairs[3].driven, 2.0),)
    lopsided = GearNetwork(net.shafts, net.junctions, pairs, net.input, net.outputs, net.gauges)
    assert not is_cyclically_symmetric(lopsided)


def test_free_outputs_symmetric():
    net = build_canonical_network(DifferentialSpec())
    sol = solve_network(net, 10.0, [Free()] * 3)
    np.testing.assert_allclose(sol.output_speeds(net), [10, 10, 10], atol=1e-12)


def test_one_fixed_two_free():
    net = build_canonical_network(DifferentialSpec())
    out = solve_network(net, 10.0, [SpeedFixed(8.0), Free(), Free()]).output_speeds(net)
    np.testing.assert_allclose(out, [8.0, 11.0, 11.0], atol=1e-12)
    assert abs(out.sum() - 30.0) < 1e-12
    assert abs(out[1] - out[2]) < 1e-12


def test_viscous_reciprocal_ratios():
    net = build_canonical_network(DifferentialSpec(2, 0.5))
    sol = solve_network(net, 7.0, [ViscousLoad(1.0)] * 3)
    np.testing.assert_allclose(sol.output_speeds(net), [7, 7, 7], atol=1e-12)
    # load sets the torque: each output carries c * omega, input carries 3 G times that
    np.testing.assert_allclose(sol.output_torques, [7, 7, 7], atol=1e-12)
    assert abs(sol.tau_in - 21.0) < 1e-11


def test_torque_path():
    spec = DifferentialSpec(1.5, 2.0)
    net = build_canonical_network(spec)
    sol = solve_network(net, 3.0, [SpeedFixed(10.0), Free(), Free()], tau_in=9.0)
    # tau_out = tau_in / (3 G) = 1; side shafts carry tau_out * g2 / 2 = 1
    np.testing.assert_allclose(sol.output_torques, [1, 1, 1], atol=1e-12)
    for side in range(2, 8):
        assert abs(sol.shaft_torques[side] - 1.0) < 1e-12
    assert abs(sol.shaft_torques[1] - 6.0) < 1e-12  # ring = tau_in / g1


def test_ungauged_network_names_circulation_mode():
    net = build_canonical_network(DifferentialSpec()).without_gauges()
    with pytest.raises(IndeterminateError) as exc:
        solve_network(net, 10.0, [Free()] * 3)
    msg = str(exc.value)
    for k in (1, 2, 3):
        assert f"omega[side {k}a]" in msg and f"omega[side {k}b]" in msg


def test_inconsistent_fixed_speeds():
    net = build_canonical_network(DifferentialSpec())
    with pytest.raises(InfeasibleError):
        solve_network(net, 10.0, [SpeedFixed(8.0)] * 3)
    out = solve_network(net, 10.0, [SpeedFixed(8.0), SpeedFixed(12.0), SpeedFixed(10.0)])
    np.testing.assert_allclose(out.output_speeds(net), [8, 12, 10], atol=1e-12)


def test_system_dump_lists_every_row():
    net = build_canonical_network(DifferentialSpec())
    system = assemble_system(net, 10.0, [Free()] * 3, tau_in=1.0)
    text = system.format()
    assert text.count("\n") == 2 + len(system.columns) + len(system.rows)
    assert "gauge 0" in text and "torque balance ring" in text


@pytest.mark.parametrize("seed", range(5))
def test_equivalence_suite(seed):
    assert max(run_equivalence_suite(200, seed)) < 1e-9


def test_equivalence_named_cases():
    assert compare_to_closed_form(DifferentialSpec(), 10.0, [Free()] * 3) < 1e-9
    assert compare_to_closed_form(DifferentialSpec(1.3, 2.2), -4.0,
                                  [SpeedFixed(3.0), SpeedFixed(-1.0), Free()]) < 1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_junction_identities(seed):
    spec, w, t, cons = random_determinate_case(np.random.default_rng(seed))
    net = build_canonical_network(spec)
    sol = solve_network(net, w, cons, t)
    speed, torque = junction_residuals(net, sol)
    assert speed <= 1e-10 * max(1.0, abs(3 * spec.ratio * w))
    assert torque <= 1e-10 * max(1.0, abs(sol.tau_in))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_permutation_equivariance(seed):
    spec, w, t, cons = random_determinate_case(np.random.default_rng(seed))
    net = build_canonical_network(spec)
    base = solve_network(net, w, cons, t)
    rotated = solve_network(net, w, cons[-1:] + cons[:-1], t)
    m = cyclic_shaft_map(net)
    scale = max(1.0, abs(3 * spec.ratio * w), *(abs(c.omega) for c in cons if isinstance(c, SpeedFixed)))
    for shaft, image in m.items():
        assert abs(base.shaft_speeds[shaft] - rotated.shaft_speeds[image]) <= 1e-10 * scale
