"""
Where lossy sampling stays hard
===============================

A point (n, eta) counts as hard when its mean surviving photon number and
its distance from the nearest Gaussian surrogate both reach the levels of
a 20-photon, 96%-efficient benchmark.
"""

# %%
# The benchmark
# -------------

import numpy as np

from bosonharness import Benchmark, region, truncation_curve
from bosonharness.hardness import default_axes

bench = Benchmark()
print(f"mean threshold {bench.mean_threshold:.2f}, distance threshold {bench.D_ref:.6f}")

# %%
# A coarse map
# ------------
#
# '#' marks hard cells. Larger experiments tolerate more loss.

n_axis, eta_axis = default_axes(n_min=20, n_max=300, n_step=40, eta_min=0.3, eta_step=0.05)
grid = region(n_axis, eta_axis, bench)
print("eta      " + " ".join(f"{e:4.2f}" for e in eta_axis))
for n, row in zip(grid.n_axis, grid.hard):
    print(f"n={n:<4}  " + " ".join(f"{'#' if h else '.':>4}" for h in row))
print("monotone:", grid.is_monotone())

# %%
# Truncating the simulation
# -------------------------
#
# A simulator that keeps at most m photons makes an error that falls with
# m. Heavier loss makes truncation cheaper. Columns are m = 0, 4, .., 20.

curves = truncation_curve(20, [0.1, 0.3, 0.5], 400)
for p, eps in curves.items():
    print(f"p_loss={p}", " ".join(f"{x:.2e}" for x in eps[::4]))
