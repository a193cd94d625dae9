"""Simulator for a three-output differential driving a three-track in-pipe robot."""

from .clamp import (
    ClampSpec,
    ClampState,
    TractionResult,
    asymmetric_compression,
    compression_for_pipe,
    normal_force,
    traction_check,
)
from .differential import (
    DifferentialSolution,
    DifferentialSpec,
    Free,
    InputDrive,
    SpeedFixed,
    ViscousLoad,
    effective_ratio,
    equal_load_outputs,
    power_balance_residual,
    solve_with_constraints,
)
from .errors import (
    FitError,
    GeometryError,
    IndeterminateError,
    InfeasibleError,
    ObstacleTooLargeError,
    PlanMismatchError,
    TridiffError,
    ValidationError,
)
from .geometry import Bend, PipeNetwork, PipeSpec, Straight, contact_radii, segment_track_lengths
from .network import (
    GearNetwork,
    build_canonical_network,
    compare_to_closed_form,
    solve_network,
)
from .traversal import (
    RobotConfig,
    TraversalPlan,
    TraversalReport,
    allocate_bend_speeds,
    simulate_traversal,
    slip_drag_metric,
)

__version__ = "0.1.0"
