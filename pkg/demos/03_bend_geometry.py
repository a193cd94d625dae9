# Where each track touches the wall in a bend, and how far it has to travel.
#
# Roll angle phi = 0 puts track 1 on the outside of the bend.  The three
# contact radii always average to the bend radius, so the mean track speed,
# and hence the robot speed, does not depend on roll.

import math

import numpy as np

from tridiff import Bend, PipeSpec, contact_radii, segment_track_lengths

R_b, r = 0.5, 0.1
for deg in (0, 30, 60, 90, 180):
    radii = contact_radii(R_b, r, math.radians(deg))
    print(f"phi={deg:3d} deg  radii={np.round(radii, 4)}  sum={radii.sum():.12f}")

bend = Bend(R_b, math.pi / 2)
lengths = segment_track_lengths(bend, PipeSpec(r), 0.0)
print("quarter bend track lengths:", lengths, " centerline:", bend.centerline_length)

phis = np.radians(np.arange(0, 360, 1))
spread = [np.ptp(segment_track_lengths(bend, PipeSpec(r), p)) for p in phis]
print(f"largest track-length spread {max(spread):.4f} m at phi={np.degrees(phis[int(np.argmax(spread))]):.0f} deg")
print(f"smallest track-length spread {min(spread):.4f} m at phi={np.degrees(phis[int(np.argmin(spread))]):.0f} deg")
