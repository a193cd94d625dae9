# Driving through straight - bend - straight with the differential, then with
# a drive that feeds all tracks at the same speed.

import math
import tempfile

from tridiff import (
    Bend, DifferentialSpec, PipeNetwork, PipeSpec, RobotConfig, Straight,
    TraversalPlan, simulate_traversal,
)
from tridiff.scenario import emit_reports, load_scenario, run

net = PipeNetwork(PipeSpec(0.1), [Straight(1.0), Bend(0.5, math.pi / 2), Straight(1.0)])
robot = RobotConfig(DifferentialSpec(1.0, 1.0), track_wheel_radius=0.025)

for deg in (0, 45, 60):
    plan = TraversalPlan(10.0, (math.radians(deg),), plan_id=f"phi-{deg}")
    for drive in ("differential", "fixed"):
        rep = simulate_traversal(net, robot, plan, drive)
        bend = rep.segments[1]
        print(f"{plan.plan_id:7s} {drive:12s} t={rep.total_time:.4f}s "
              f"bend speeds={bend.track_speeds.round(4)} slip={rep.slip.round(4)}")

# The same thing from a scenario file, written out as reports
scenario = load_scenario("scenarios/bend_network.yaml")
with tempfile.TemporaryDirectory() as out:
    for path in emit_reports(run(scenario), out, plots=True):
        print("wrote", path)
    print(open(f"{out}/summary.csv").read())
