# Three-output differential under the three load cases.
#
# One input, three outputs. With equal loads every output turns at G * omega_in
# and carries tau_in / (3 G). Load one output differently and the other two
# still match each other, while the speed sum stays pinned at 3 G omega_in.

import numpy as np

from tridiff import (
    DifferentialSpec, Free, InputDrive, SpeedFixed, ViscousLoad,
    equal_load_outputs, power_balance_residual, solve_with_constraints,
)

spec = DifferentialSpec(g1=0.5, g2=0.8)          # overall ratio G = 0.4
drive = InputDrive(omega_in=25.0, tau_in=1.2)    # rad/s, N m
print("G =", spec.ratio)

# Case 1: all outputs equally loaded
sol = equal_load_outputs(spec, drive)
print("equal loads   omega:", sol.omega_out, " tau:", sol.tau_out)
print("power residual:", power_balance_residual(spec, drive, sol))

# Case 2: one track held back (e.g. the inner track in a bend), two free
sol = solve_with_constraints(spec, drive, [SpeedFixed(8.0), Free(), Free()])
print("one held      omega:", sol.omega_out, " sum:", sol.omega_out.sum())

# Case 3: all three under different viscous drag; speeds go as 1/c
c = [0.5, 1.0, 2.0]
sol = solve_with_constraints(spec, drive, [ViscousLoad(x) for x in c])
print("viscous c=%s  omega:" % c, sol.omega_out)
print("  c * omega (equal torques):", np.multiply(c, sol.omega_out))

# Reversing the input just negates everything
rev = solve_with_constraints(spec, InputDrive(-25.0), [ViscousLoad(x) for x in c])
print("reversed      omega:", rev.omega_out)
