"""Tabulate the 13 inertia schedules and 3 acceleration schedules over a run."""

import numpy as np

from swarmloc.schedules import accel_coeffs, weight_sequence

T = 150
ticks = [0, 1, 10, 50, 100, 149]

print("inertia weight at selected iterations (T = 150)")
print("label " + "".join(f"{t:>8d}" for t in ticks))
for k in range(13):
    seq = weight_sequence(f"W{k}", T, rng=np.random.default_rng(0))
    print(f"W{k:<4d} " + "".join(f"{seq[t]:8.3f}" for t in ticks))

print("\nacceleration coefficients (c1, c2)")
for label in ("A1", "A2", "A3"):
    row = [accel_coeffs(label, t, T) for t in (0, T // 2, T)]
    print(label, "  ".join(f"({c1:.2f}, {c2:.2f})" for c1, c2 in row))

# the random schedules differ per seed, the deterministic ones do not
print("\nW12 spread across seeds at t=10:", np.ptp([weight_sequence("W12", T, rng=np.random.default_rng(s))[10] for s in range(20)]).round(3))
