"""
How close can a Gaussian state get to a lossy photon?
=====================================================

A phase-averaged displaced squeezed state is easy to simulate. We search
for the one nearest in trace distance to a lossy single photon, and then
to many copies of it.
"""

# %%
# Photon-number weights
# ---------------------

import math

import numpy as np

from bosonharness import SqueezedParams, distance_curve, minimize_distance, photon_number_prob

p = SqueezedParams(beta=math.sqrt(2), V=1 / 3)
print([round(photon_number_prob(i, p), 4) for i in range(6)])

# %%
# One copy
# --------
#
# Without loss the best surrogate puts under half its weight on one photon.

r = minimize_distance(1, 1.0)
print(f"D={r.distance:.4f} beta={r.params.beta:.4f} V={r.params.V:.4f}")

# %%
# Many copies with loss
# ---------------------
#
# The distance rises with photon number and with efficiency. Rows are n,
# columns are eta.

ns = [1, 2, 5, 10, 20, 50]
etas = [0.3, 0.5, 0.7, 0.9, 0.96, 1.0]
D = np.array([x.distance for x in distance_curve(ns, etas)]).reshape(len(ns), len(etas))
print("n \\ eta", etas)
for n, row in zip(ns, D):
    print(f"{n:>6}", np.round(row, 5))

r = minimize_distance(20, 0.96)
print(f"benchmark: D={r.distance:.5f} at beta={r.params.beta:.4f}, V={r.params.V:.4f}")
