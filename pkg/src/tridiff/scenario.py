"""Scenario files: YAML ingestion, batch execution and report emission.

All quantities in a scenario file use SI units: lengths in m, angles in rad,
input speed in rad/s, stiffness in N/m, mass in kg.  Example::

    name: two-bend loop
    omega_in: 10.0
    drive: differential          # or "fixed"
    robot:
      g1: 1.0                    # input shaft -> ring stage speed ratio
      g2: 1.0                    # ring stage -> output speed ratio
      track_wheel_radius: 0.03
      mass: 4.0                  # optional, enables the traction check
    clamp:                       # optional
      stiffness: 2000.0
      n_springs: 4
      preload: 0.005
      travel_min: 0.0
      travel_max: 0.02
      friction: 0.6
      nominal_radius: 0.11
    pipe:
      radius: 0.1
    segments:
      - straight: {length: 1.0}
      - bend: {radius: 0.5, angle: 1.5707963267948966}
    plans:
      - id: phi-0
        orientations: [0.0]      # one roll angle per bend
    output:
      plots: false
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
import yaml

from .clamp import GRAVITY, ClampSpec, TractionResult, compression_for_pipe, traction_check
from .differential import DifferentialSpec
from .errors import TridiffError, ValidationError
from .geometry import Bend, PipeNetwork, PipeSpec, Straight
from .traversal import DRIVE_MODES, RobotConfig, TraversalPlan, TraversalReport, simulate_traversal

SUMMARY_HEADER = [
    "plan_id", "orientation_rad", "total_time_s", "robot_distance_m",
    "track1_distance_m", "track2_distance_m", "track3_distance_m", "max_slip_m",
]
SEGMENT_HEADER = [
    "plan_id", "segment", "kind", "orientation_rad", "start_time_s", "time_s",
    "start_position_m", "robot_speed_mps",
    "track1_speed_mps", "track2_speed_mps", "track3_speed_mps",
    "track1_distance_m", "track2_distance_m", "track3_distance_m",
    "track1_slip_m", "track2_slip_m", "track3_slip_m",
]
SUMMARY_FILE = "summary.csv"
SEGMENTS_FILE = "segments.csv"
REPORT_FILE = "report.json"


class ScenarioParseError(TridiffError):
    pass


class ScenarioValidationError(ValidationError):
    def __init__(self, path: str, message: str, line: Optional[int] = None):
        self.path, self.line = path, line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{path}: {message}")


class SimulationError(TridiffError):
    pass


@dataclass(frozen=True)
class Scenario:
    name: str
    robot: RobotConfig
    network: PipeNetwork
    plans: tuple[TraversalPlan, ...]
    drive: str = "differential"
    plots: bool = False
    source: Optional[str] = None


@dataclass
class RunArtifacts:
    scenario: Scenario
    drive: str
    reports: list[TraversalReport]
    # per plan: {"differential": slip[3], "fixed": slip[3]}
    slip_comparison: list[dict[str, np.ndarray]]
    traction: Optional[TractionResult] = None
    summary_rows: list[list[Any]] = field(default_factory=list)
    segment_rows: list[list[Any]] = field(default_factory=list)


# -- YAML with line numbers ------------------------------------------------------

def _construct(node: yaml.Node, path: str, lines: dict[str, int]) -> Any:
    lines[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        out = {}
        for key_node, value_node in node.value:
            key = key_node.value
            out[key] = _construct(value_node, f"{path}.{key}" if path else key, lines)
        return out
    if isinstance(node, yaml.SequenceNode):
        return [_construct(v, f"{path}[{i}]", lines) for i, v in enumerate(node.value)]
    return yaml.SafeLoader(io.StringIO("")).construct_object(node)


class _Fields:
    """Typed access to a parsed mapping that reports errors with line numbers."""

    def __init__(self, data: Any, path: str, lines: dict[str, int]):
        self.path, self.lines = path, lines
        if not isinstance(data, dict):
            self.fail("expected a mapping")
        self.data = data

    def _sub(self, key: str) -> str:
        return f"{self.path}.{key}" if self.path else key

    def fail(self, message: str, key: Optional[str] = None):
        path = self._sub(key) if key else self.path
        raise ScenarioValidationError(path or "<root>", message,
                                      self.lines.get(path, self.lines.get(self.path)))

    def has(self, key: str) -> bool:
        return key in self.data

    def number(self, key: str, default: Any = ...) -> float:
        if key not in self.data:
            if default is ...:
                self.fail(f"missing required field '{key}'")
            return default
        value = self.data[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(f"expected a number, got {value!r}", key)
        return float(value)

    def build(self, key: Optional[str], factory, *args, **kwargs):
        try:
            return factory(*args, **kwargs)
        except ValidationError as exc:
            self.fail(str(exc), key)


def _parse_file(path: str) -> tuple[Any, dict[str, int]]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioParseError(f"cannot read scenario {path!r}: {exc}") from exc
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        raise ScenarioParseError(f"{path}: {exc}") from exc
    if node is None:
        raise ScenarioParseError(f"{path}: empty scenario file")
    lines: dict[str, int] = {}
    return _construct(node, "", lines), lines


def load_scenario(path: str, degrees: bool = False) -> Scenario:
    """Parse and fully validate a scenario file.

    With ``degrees=True`` bend angles and roll angles in the file are read as
    degrees and converted to radians.
    """
    data, lines = _parse_file(path)
    root = _Fields(data, "", lines)
    angle = np.deg2rad if degrees else float

    r = _Fields(root.data.get("robot", {}), "robot", lines)
    diff = r.build(None, DifferentialSpec, r.number("g1", 1.0), r.number("g2", 1.0))

    clamp = None
    if root.has("clamp"):
        c = _Fields(root.data["clamp"], "clamp", lines)
        clamp = c.build(
            None, ClampSpec,
            stiffness=c.number("stiffness"), preload=c.number("preload"),
            travel_min=c.number("travel_min"), travel_max=c.number("travel_max"),
            friction=c.number("friction"), nominal_radius=c.number("nominal_radius"),
            n_springs=c.number("n_springs", 4),
        )
    mass = r.number("mass", None)
    robot = r.build(None, RobotConfig, diff, r.number("track_wheel_radius"), clamp, mass)

    if not root.has("pipe"):
        root.fail("missing required section 'pipe'")
    p = _Fields(root.data["pipe"], "pipe", lines)
    pipe = p.build("radius", PipeSpec, p.number("radius"))

    raw_segments = root.data.get("segments")
    if not isinstance(raw_segments, list) or not raw_segments:
        root.fail("'segments' must be a non-empty list", "segments")
    segments = []
    for i, raw in enumerate(raw_segments):
        s = _Fields(raw, f"segments[{i}]", lines)
        if len(s.data) != 1 or not (s.has("straight") or s.has("bend")):
            s.fail("each segment must be exactly one of 'straight' or 'bend'")
        if s.has("straight"):
            f = _Fields(s.data["straight"], f"segments[{i}].straight", lines)
            segments.append(f.build("length", Straight, f.number("length")))
        else:
            f = _Fields(s.data["bend"], f"segments[{i}].bend", lines)
            bend = f.build(None, Bend, f.number("radius"), angle(f.number("angle")))
            if not bend.radius > pipe.radius:
                f.fail(f"bend radius {bend.radius!r} must exceed pipe radius "
                       f"{pipe.radius!r} (R_b > r)", "radius")
            segments.append(bend)
    network = root.build("segments", PipeNetwork, pipe, segments)
    n_bends = len(network.bends)

    omega_in = root.number("omega_in")
    raw_plans = root.data.get("plans")
    if raw_plans is None:
        raw_plans = [{"id": "plan-1", "orientations": [0.0] * n_bends}] if n_bends == 0 else None
    if not isinstance(raw_plans, list) or not raw_plans:
        root.fail("'plans' must be a non-empty list (one roll angle per bend per plan)", "plans")
    plans = []
    seen = set()
    for i, raw in enumerate(raw_plans):
        pl = _Fields(raw, f"plans[{i}]", lines)
        plan_id = str(pl.data.get("id", f"plan-{i + 1}"))
        if plan_id in seen:
            pl.fail(f"duplicate plan id {plan_id!r}", "id")
        seen.add(plan_id)
        orient = pl.data.get("orientations", [])
        if not isinstance(orient, list):
            pl.fail("expected a list of roll angles", "orientations")
        if len(orient) != n_bends:
            pl.fail(f"missing orientation: need one roll angle per bend ({n_bends}), "
                    f"got {len(orient)}", "orientations")
        phis = []
        for k, v in enumerate(orient):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                pl.fail(f"expected a number, got {v!r}", f"orientations[{k}]")
            phis.append(float(angle(v)))
        plans.append(pl.build(None, TraversalPlan, pl.number("omega_in", omega_in),
                              tuple(phis), plan_id))

    drive = root.data.get("drive", "differential")
    if drive not in DRIVE_MODES:
        root.fail(f"drive must be one of {DRIVE_MODES}, got {drive!r}", "drive")

    out = _Fields(root.data.get("output", {}), "output", lines)
    plots = out.data.get("plots", False)
    if not isinstance(plots, bool):
        out.fail("expected true or false", "plots")

    name = str(root.data.get("name", os.path.splitext(os.path.basename(path))[0]))
    return Scenario(name, robot, network, tuple(plans), drive, plots, os.path.abspath(path))


# -- execution --------------------------------------------------------------------

def _fmt(x) -> str:
    return repr(float(x))


def _fmt_angles(phis) -> str:
    return ";".join(_fmt(p) for p in phis)


def run(scenario: Scenario, drive: Optional[str] = None) -> RunArtifacts:
    drive = drive or scenario.drive
    reports, comparison = [], []
    for plan in scenario.plans:
        try:
            rep = simulate_traversal(scenario.network, scenario.robot, plan, drive)
            other = "fixed" if drive == "differential" else "differential"
            alt = simulate_traversal(scenario.network, scenario.robot, plan, other)
        except TridiffError as exc:
            raise SimulationError(f"scenario {scenario.name!r}, plan {plan.plan_id!r}: {exc}") from exc
        reports.append(rep)
        comparison.append({drive: rep.slip, other: alt.slip})

    traction = None
    robot = scenario.robot
    if robot.clamp is not None and robot.mass is not None:
        try:
            state = compression_for_pipe(robot.clamp, scenario.network.pipe.radius)
        except TridiffError as exc:
            raise SimulationError(f"scenario {scenario.name!r}: {exc}") from exc
        traction = traction_check(state, robot.clamp, robot.mass * GRAVITY)

    artifacts = RunArtifacts(scenario, drive, reports, comparison, traction)
    for plan, rep in zip(scenario.plans, reports):
        artifacts.summary_rows.append([
            plan.plan_id, _fmt_angles(plan.orientations), _fmt(rep.total_time),
            _fmt(rep.robot_distance), *map(_fmt, rep.track_distances), _fmt(rep.max_slip),
        ])
        for seg in rep.segments:
            artifacts.segment_rows.append([
                plan.plan_id, seg.index, seg.kind,
                "" if seg.orientation is None else _fmt(seg.orientation),
                _fmt(seg.start_time), _fmt(seg.time), _fmt(seg.start_position),
                _fmt(seg.robot_speed), *map(_fmt, seg.track_speeds),
                *map(_fmt, seg.track_distances), *map(_fmt, seg.slip),
            ])
    return artifacts


# -- reports ----------------------------------------------------------------------

def _report_dict(artifacts: RunArtifacts) -> dict:
    sc = artifacts.scenario
    plans = []
    for plan, rep, slips in zip(sc.plans, artifacts.reports, artifacts.slip_comparison):
        plans.append({
            "id": plan.plan_id,
            "omega_in_rad_s": plan.omega_in,
            "orientations_rad": list(plan.orientations),
            "total_time_s": rep.total_time,
            "robot_distance_m": rep.robot_distance,
            "track_distances_m": rep.track_distances.tolist(),
            "max_slip_m": rep.max_slip,
            "slip_comparison_m": {k: v.tolist() for k, v in sorted(slips.items())},
            "segments": [
                {
                    "index": s.index,
                    "kind": s.kind,
                    "orientation_rad": s.orientation,
                    "contact_radii_m": None if s.contact_radii is None else s.contact_radii.tolist(),
                    "start_time_s": s.start_time,
                    "time_s": s.time,
                    "start_position_m": s.start_position,
                    "robot_speed_mps": s.robot_speed,
                    "robot_distance_m": s.robot_distance,
                    "track_speeds_mps": s.track_speeds.tolist(),
                    "track_distances_m": s.track_distances.tolist(),
                    "required_distances_m": s.required_distances.tolist(),
                    "slip_m": s.slip.tolist(),
                }
                for s in rep.segments
            ],
        })
    out = {
        "scenario": sc.name,
        "drive": artifacts.drive,
        "units": {"length": "m", "angle": "rad", "speed": "m/s", "time": "s"},
        "summary": {"header": SUMMARY_HEADER, "rows": artifacts.summary_rows},
        "plans": plans,
    }
    if artifacts.traction is not None:
        t = artifacts.traction
        out["traction"] = {"passed": t.passed, "capacity_n": t.capacity, "margin_n": t.margin}
    return out


def _write_csv(path: str, header: list[str], rows: list[list[Any]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _plot_profile(path: str, report: TraversalReport) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "tridiff"
    xs, speeds = [], []
    for seg in report.segments:
        xs += [seg.start_position, seg.start_position + seg.robot_distance]
        speeds += [seg.track_speeds, seg.track_speeds]
    speeds = np.array(speeds)
    fig, ax = plt.subplots(figsize=(7, 4))
    for i in range(3):
        ax.plot(xs, speeds[:, i], label=f"track {i + 1}")
    ax.plot(xs, [report.segments[0].robot_speed] * len(xs), "k--", lw=1, label="robot")
    ax.set_xlabel("centerline position (m)")
    ax.set_ylabel("speed (m/s)")
    ax.set_title(f"{report.plan_id} ({report.drive} drive)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def emit_reports(artifacts: RunArtifacts, out_dir: str, plots: Optional[bool] = None) -> list[str]:
    """Write summary.csv, segments.csv, report.json and optional SVG profiles."""
    plots = artifacts.scenario.plots if plots is None else plots
    written = []
    try:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, SUMMARY_FILE)
        _write_csv(path, SUMMARY_HEADER, artifacts.summary_rows)
        written.append(path)
        path = os.path.join(out_dir, SEGMENTS_FILE)
        _write_csv(path, SEGMENT_HEADER, artifacts.segment_rows)
        written.append(path)
        path = os.path.join(out_dir, REPORT_FILE)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(_report_dict(artifacts), fh, indent=2)
            fh.write("\n")
        written.append(path)
        if plots:
            for rep in artifacts.reports:
                safe = "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in rep.plan_id)
                path = os.path.join(out_dir, f"profile_{safe}.svg")
                _plot_profile(path, rep)
                written.append(path)
    except OSError as exc:
        raise OSError(f"cannot write report to {exc.filename or out_dir!r}: {exc.strerror}") from exc
    return written
