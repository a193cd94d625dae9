"""Constraint-network model of the three-output differential.

The mechanism is assembled from six ordinary two-output bevel differentials
and solved as one dense linear system over shaft speeds and element torques.
Nothing here uses the closed forms in :mod:`tridiff.differential`; the
network is the independent check on them.

Canonical topology (shaft ids in build order)::

    0          input (worm shaft)
    1          ring: worm wheel, shared carrier of the three input-stage junctions
    2..7       side shafts; input-stage junction k owns sides 2+2k and 3+2k
    8..10      carriers of the output-stage junctions
    11..13     outputs

Output-stage junction k couples side 3+2k with side 2+2(k+1 mod 3), i.e. the
two side gears facing each other between neighbouring input-stage junctions.

The six side shafts form a closed even cycle of averaging relations, which
leaves one zero-work mode (alternating +d/-d around the cycle) that kinematics
cannot fix.  Identical side gears have identical inertia, so the physically
selected state is the minimum-kinetic-energy one, which has no component along
that mode.  The canonical network carries this as a gauge row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import networkx as nx
import numpy as np
from networkx.algorithms import isomorphism

from .differential import (
    DifferentialSpec,
    InputDrive,
    OutputConstraint,
    Free,
    SpeedFixed,
    ViscousLoad,
    classify_constraints,
    solve_with_constraints,
)
from .errors import IndeterminateError, InfeasibleError, ValidationError

# Singular values below this fraction of the largest mark a rank deficiency.
COND_LIMIT = 1e12
RESIDUAL_RTOL = 1e-9


@dataclass(frozen=True)
class BevelDifferentialJunction:
    """Two-output bevel differential: sides average to the carrier.

    ``carrier_drives`` records the direction of power flow, carrier to sides
    for the input stage and sides to carrier for the output stage.  It only
    affects the sign convention of torques, not the kinematics.
    """

    carrier: int
    side_a: int
    side_b: int
    carrier_drives: bool = True


@dataclass(frozen=True)
class GearPair:
    """Fixed-ratio mesh; ``omega_driven = ratio * omega_driver``."""

    driver: int
    driven: int
    ratio: float


@dataclass(frozen=True)
class GearNetwork:
    shafts: tuple[str, ...]
    junctions: tuple[BevelDifferentialJunction, ...]
    gear_pairs: tuple[GearPair, ...]
    input: int
    outputs: tuple[int, int, int]
    # each gauge is a homogeneous linear speed condition: sum(coef * omega[shaft]) = 0
    gauges: tuple[tuple[tuple[int, float], ...], ...] = ()

    def __post_init__(self):
        n = len(self.shafts)
        ids = [self.input, *self.outputs]
        for j in self.junctions:
            ids += [j.carrier, j.side_a, j.side_b]
        for p in self.gear_pairs:
            ids += [p.driver, p.driven]
            if not p.ratio > 0:
                raise ValidationError(f"gear ratio must be > 0, got {p.ratio!r}")
        for g in self.gauges:
            ids += [s for s, _ in g]
        bad = [s for s in ids if not 0 <= s < n]
        if bad:
            raise ValidationError(f"shaft ids out of range: {sorted(set(bad))}")
        if len(self.outputs) != 3:
            raise ValidationError("a network needs exactly three outputs")

    def without_gauges(self) -> "GearNetwork":
        return GearNetwork(self.shafts, self.junctions, self.gear_pairs,
                           self.input, self.outputs, ())


@dataclass(frozen=True)
class NetworkSolution:
    shaft_speeds: Mapping[int, float]
    shaft_torques: Mapping[int, float]
    # (carrier, side_a, side_b) port torques per junction, in network order
    junction_torques: tuple[tuple[float, float, float], ...]
    tau_in: float
    output_torques: tuple[float, float, float]
    residual: float = 0.0

    def output_speeds(self, network: GearNetwork) -> np.ndarray:
        return np.array([self.shaft_speeds[s] for s in network.outputs])


def build_canonical_network(spec: DifferentialSpec) -> GearNetwork:
    names = ["input", "ring"]
    for k in range(3):
        names += [f"side {k + 1}a", f"side {k + 1}b"]
    names += [f"output carrier {k + 1}" for k in range(3)]
    names += [f"output {k + 1}" for k in range(3)]

    ring = 1
    side = lambda k, which: 2 + 2 * (k % 3) + which  # noqa: E731
    carrier = lambda k: 8 + k  # noqa: E731
    output = lambda k: 11 + k  # noqa: E731

    junctions = [BevelDifferentialJunction(ring, side(k, 0), side(k, 1), True) for k in range(3)]
    junctions += [
        BevelDifferentialJunction(carrier(k), side(k, 1), side(k + 1, 0), False)
        for k in range(3)
    ]
    pairs = [GearPair(0, ring, spec.g1)]
    pairs += [GearPair(carrier(k), output(k), spec.g2) for k in range(3)]
    circulation = tuple((2 + i, 1.0 if i % 2 == 0 else -1.0) for i in range(6))

    return GearNetwork(
        shafts=tuple(names),
        junctions=tuple(junctions),
        gear_pairs=tuple(pairs),
        input=0,
        outputs=(output(0), output(1), output(2)),
        gauges=(circulation,),
    )


def _labeled_graph(network: GearNetwork, output_labels: Sequence[str]) -> nx.DiGraph:
    g = nx.DiGraph()
    for sid in range(len(network.shafts)):
        g.add_node(("shaft", sid), kind="shaft")
    g.nodes[("shaft", network.input)]["kind"] = "input"
    for sid, label in zip(network.outputs, output_labels):
        g.nodes[("shaft", sid)]["kind"] = label
    for j, jn in enumerate(network.junctions):
        node = ("junction", j)
        g.add_node(node, kind=f"junction drives={jn.carrier_drives}")
        g.add_edge(node, ("shaft", jn.carrier), role="carrier")
        g.add_edge(node, ("shaft", jn.side_a), role="side_a")
        g.add_edge(node, ("shaft", jn.side_b), role="side_b")
    for p, gp in enumerate(network.gear_pairs):
        node = ("pair", p)
        g.add_node(node, kind=f"pair {gp.ratio!r}")
        g.add_edge(node, ("shaft", gp.driver), role="driver")
        g.add_edge(node, ("shaft", gp.driven), role="driven")
    for k, gauge in enumerate(network.gauges):
        node = ("gauge", k)
        g.add_node(node, kind="gauge")
        for sid, coef in gauge:
            g.add_edge(node, ("shaft", sid), role=f"coef {coef!r}")
    return g


def cyclic_shaft_map(network: GearNetwork) -> dict[int, int] | None:
    """Shaft relabeling induced by rotating the outputs 1->2->3->1.

    Returns None when no structure-preserving relabeling exists.
    """
    labels = ["out1", "out2", "out3"]
    src = _labeled_graph(network, labels)
    dst = _labeled_graph(network, labels[-1:] + labels[:-1])
    matcher = isomorphism.DiGraphMatcher(
        src, dst,
        node_match=lambda a, b: a["kind"] == b["kind"],
        edge_match=lambda a, b: a["role"] == b["role"],
    )
    if not matcher.is_isomorphic():
        return None
    return {a[1]: b[1] for a, b in matcher.mapping.items() if a[0] == "shaft"}


def is_cyclically_symmetric(network: GearNetwork) -> bool:
    return cyclic_shaft_map(network) is not None


@dataclass
class LinearSystem:
    """Assembled network equations ``A x = b`` with row and column labels."""

    A: np.ndarray
    b: np.ndarray
    rows: list[str] = field(default_factory=list)
    columns: list[str] = field(default_factory=list)

    def format(self, precision: int = 6) -> str:
        lines = [f"# {self.A.shape[0]} equations, {self.A.shape[1]} unknowns", "# unknowns:"]
        lines += [f"#   x[{i}] = {c}" for i, c in enumerate(self.columns)]
        width = precision + 7
        for label, row, rhs in zip(self.rows, self.A, self.b):
            coeffs = " ".join(f"{v:{width}.{precision}g}" for v in row)
            lines.append(f"{coeffs} | {rhs:{width}.{precision}g}   # {label}")
        return "\n".join(lines) + "\n"


class _Layout:
    def __init__(self, network: GearNetwork):
        self.n_shafts = n = len(network.shafts)
        self.n_junctions = nj = len(network.junctions)
        self.n_pairs = len(network.gear_pairs)
        self.omega = lambda s: s
        self.jt = lambda j, port: n + 3 * j + port  # port 0 carrier, 1 side a, 2 side b
        self.pair = lambda p: n + 3 * nj + p
        self.tau_out = lambda i: n + 3 * nj + self.n_pairs + i
        self.tau_in = n + 3 * nj + self.n_pairs + 3
        self.size = self.tau_in + 1

        names = network.shafts
        cols = [f"omega[{s}]" for s in names]
        for j, jn in enumerate(network.junctions):
            cols += [f"tau_j{j}[carrier {names[jn.carrier]}]",
                     f"tau_j{j}[{names[jn.side_a]}]",
                     f"tau_j{j}[{names[jn.side_b]}]"]
        cols += [f"F_pair{p}[{names[g.driver]}->{names[g.driven]}]"
                 for p, g in enumerate(network.gear_pairs)]
        cols += [f"tau_out[{names[s]}]" for s in network.outputs]
        cols.append("tau_in")
        self.columns = cols


def assemble_system(
    network: GearNetwork,
    omega_in: float,
    constraints: Sequence[OutputConstraint],
    tau_in: float = 0.0,
) -> LinearSystem:
    """Build the speed/torque equations for one operating point.

    Free and speed-fixed outputs take their torque level from ``tau_in``;
    all-viscous loads determine the torque themselves and ``tau_in`` is ignored.
    """
    kind = classify_constraints(constraints)
    L = _Layout(network)
    rows: list[np.ndarray] = []
    rhs: list[float] = []
    labels: list[str] = []
    names = network.shafts

    def row(label, entries, value=0.0):
        r = np.zeros(L.size)
        for col, coef in entries:
            r[col] += coef
        rows.append(r)
        rhs.append(float(value))
        labels.append(label)

    # kinematics
    row("input speed", [(L.omega(network.input), 1.0)], omega_in)
    for p, g in enumerate(network.gear_pairs):
        row(f"pair {p} speed ratio", [(L.omega(g.driven), 1.0), (L.omega(g.driver), -g.ratio)])
    for j, jn in enumerate(network.junctions):
        row(f"junction {j} speed average",
            [(L.omega(jn.side_a), 1.0), (L.omega(jn.side_b), 1.0), (L.omega(jn.carrier), -2.0)])
    for k, gauge in enumerate(network.gauges):
        row(f"gauge {k}", [(L.omega(s), c) for s, c in gauge])

    # ideal junction torque split
    for j in range(L.n_junctions):
        row(f"junction {j} equal side torques", [(L.jt(j, 1), 1.0), (L.jt(j, 2), -1.0)])
        row(f"junction {j} carrier torque",
            [(L.jt(j, 0), 1.0), (L.jt(j, 1), -1.0), (L.jt(j, 2), -1.0)])

    # massless shafts: torques applied by all elements cancel
    balance: list[list[tuple[int, float]]] = [[] for _ in range(L.n_shafts)]
    for j, jn in enumerate(network.junctions):
        sign = 1.0 if jn.carrier_drives else -1.0
        balance[jn.carrier].append((L.jt(j, 0), -sign))
        balance[jn.side_a].append((L.jt(j, 1), sign))
        balance[jn.side_b].append((L.jt(j, 2), sign))
    for p, g in enumerate(network.gear_pairs):
        balance[g.driver].append((L.pair(p), -g.ratio))
        balance[g.driven].append((L.pair(p), 1.0))
    balance[network.input].append((L.tau_in, 1.0))
    for i, s in enumerate(network.outputs):
        balance[s].append((L.tau_out(i), -1.0))
    for s, entries in enumerate(balance):
        row(f"torque balance {names[s]}", entries)

    # load closure
    outs = network.outputs
    if kind == "viscous":
        for i, c in enumerate(constraints):
            row(f"viscous load output {i + 1}", [(L.omega(outs[i]), c.c), (L.tau_out(i), -1.0)])
    else:
        free = []
        for i, c in enumerate(constraints):
            if isinstance(c, SpeedFixed):
                row(f"fixed speed output {i + 1}", [(L.omega(outs[i]), 1.0)], c.omega)
            else:
                free.append(i)
        for a, b in zip(free, free[1:]):
            row(f"equal load outputs {a + 1},{b + 1}",
                [(L.omega(outs[a]), 1.0), (L.omega(outs[b]), -1.0)])
        row("input torque", [(L.tau_in, 1.0)], tau_in)

    return LinearSystem(np.array(rows), np.array(rhs), labels, L.columns)


def _describe_null_vector(v: np.ndarray, columns: list[str]) -> str:
    v = v / np.max(np.abs(v))
    parts = [f"{columns[i]} {v[i]:+.3g}" for i in np.flatnonzero(np.abs(v) > 1e-6)]
    return ", ".join(parts)


def _refined_solve(A: np.ndarray, b: np.ndarray, sweeps: int = 3) -> np.ndarray:
    # row equilibration + iterative refinement; keeps ~1e-15 relative accuracy
    scale = 1.0 / np.max(np.abs(A), axis=1)
    As, bs = A * scale[:, None], b * scale
    x, *_ = np.linalg.lstsq(As, bs, rcond=None)
    for _ in range(sweeps):
        r = bs - As @ x
        dx, *_ = np.linalg.lstsq(As, r, rcond=None)
        x = x + dx
    return x


def solve_network(
    network: GearNetwork,
    omega_in: float,
    constraints: Sequence[OutputConstraint],
    tau_in: float = 0.0,
) -> NetworkSolution:
    system = assemble_system(network, omega_in, constraints, tau_in)
    A, b = system.A, system.b
    _, s, vt = np.linalg.svd(A)
    if s[-1] * COND_LIMIT < s[0] or s.size < A.shape[1]:
        null = vt[-1]
        raise IndeterminateError(
            "network equations are singular; unconstrained degree of freedom: "
            + _describe_null_vector(null, system.columns)
        )
    x = _refined_solve(A, b)
    residual = float(np.max(np.abs(A @ x - b)))
    if residual > RESIDUAL_RTOL * max(1.0, float(np.max(np.abs(b)))):
        worst = int(np.argmax(np.abs(A @ x - b)))
        raise InfeasibleError(
            f"network constraints are inconsistent (residual {residual:.3g} "
            f"at '{system.rows[worst]}')"
        )

    L = _Layout(network)
    speeds = {sid: float(x[L.omega(sid)]) for sid in range(L.n_shafts)}
    jt = tuple(tuple(float(x[L.jt(j, p)]) for p in range(3)) for j in range(L.n_junctions))

    # torque carried by each shaft, taken from its upstream element
    torques = {sid: 0.0 for sid in range(L.n_shafts)}
    torques[network.input] += float(x[L.tau_in])
    for p, g in enumerate(network.gear_pairs):
        torques[g.driven] += float(x[L.pair(p)])
    for j, jn in enumerate(network.junctions):
        if jn.carrier_drives:
            torques[jn.side_a] += jt[j][1]
            torques[jn.side_b] += jt[j][2]
        else:
            torques[jn.carrier] += jt[j][0]

    return NetworkSolution(
        shaft_speeds=speeds,
        shaft_torques=torques,
        junction_torques=jt,
        tau_in=float(x[L.tau_in]),
        output_torques=tuple(float(x[L.tau_out(i)]) for i in range(3)),
        residual=residual,
    )


def junction_residuals(network: GearNetwork, solution: NetworkSolution) -> tuple[float, float]:
    """Largest speed-average and side-torque mismatch over all junctions."""
    w = solution.shaft_speeds
    speed = max(abs(w[j.side_a] + w[j.side_b] - 2.0 * w[j.carrier]) for j in network.junctions)
    torque = max(abs(t[1] - t[2]) for t in solution.junction_torques)
    return speed, torque


def compare_to_closed_form(
    spec: DifferentialSpec,
    omega_in: float,
    constraints: Sequence[OutputConstraint],
    tau_in: float = 0.0,
) -> float:
    """Max absolute output-speed deviation between network and closed form."""
    network = build_canonical_network(spec)
    oracle = solve_network(network, omega_in, constraints, tau_in).output_speeds(network)
    closed = solve_with_constraints(spec, InputDrive(omega_in, tau_in), constraints).omega_out
    return float(np.max(np.abs(oracle - closed)))


def random_determinate_case(rng: np.random.Generator):
    """Draw (spec, omega_in, tau_in, constraints) covering every determinate load case."""
    spec = DifferentialSpec(float(rng.uniform(0.2, 5.0)), float(rng.uniform(0.2, 5.0)))
    omega_in = float(rng.uniform(-50.0, 50.0))
    tau_in = float(rng.uniform(0.0, 20.0))
    total = 3.0 * spec.ratio * omega_in
    kind = rng.integers(4)
    if kind == 0:
        constraints = [Free(), Free(), Free()]
    elif kind == 3:
        constraints = [ViscousLoad(float(c)) for c in rng.uniform(0.05, 20.0, size=3)]
    else:
        constraints = [Free(), Free(), Free()]
        for i in rng.choice(3, size=int(kind), replace=False):
            constraints[int(i)] = SpeedFixed(float(rng.uniform(-1.0, 1.0) * max(1.0, abs(total))))
    return spec, omega_in, tau_in, constraints


def run_equivalence_suite(cases: int = 1000, seed: int = 0) -> list[float]:
    """Closed-form vs network deviations for ``cases`` random determinate cases."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(cases):
        spec, omega_in, tau_in, constraints = random_determinate_case(rng)
        out.append(compare_to_closed_form(spec, omega_in, constraints, tau_in))
    return out
