# Spring wall-clamp: how hard the modules press on the wall across the
# reachable pipe sizes, and whether that holds the robot in a vertical pipe.

import numpy as np

from tridiff import ClampSpec, asymmetric_compression, compression_for_pipe, traction_check
from tridiff.clamp import GRAVITY
from tridiff.errors import FitError, ObstacleTooLargeError

clamp = ClampSpec(stiffness=2000.0, preload=0.005, travel_min=0.0, travel_max=0.02,
                  friction=0.6, nominal_radius=0.11)
lo, hi = clamp.reachable_radii
print(f"reachable pipe radius: {lo:.3f} .. {hi:.3f} m")

weight = 4.0 * GRAVITY
for radius in np.linspace(lo, hi, 5):
    state = compression_for_pipe(clamp, radius)
    res = traction_check(state, clamp, weight)
    print(f"r={radius:.3f}  N per module={state.normal_force[0]:6.1f}  "
          f"capacity={res.capacity:6.1f} N  climbs 4 kg: {res.passed}")

try:
    compression_for_pipe(clamp, 0.08)
except FitError as exc:
    print("FitError:", exc)

bump = asymmetric_compression(clamp, 0.1, [0.006, 0.0, 0.0])
print("module forces over a 6 mm weld bead:", bump.normal_force)
try:
    asymmetric_compression(clamp, 0.1, [0.0, 0.0, 0.015])
except ObstacleTooLargeError as exc:
    print("ObstacleTooLargeError:", exc)
