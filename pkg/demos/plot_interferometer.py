"""
Random interferometers and their permanents
===========================================

Draw a Haar-random network, rebuild it from nearest-neighbour
beamsplitters, then look at how fast the output space grows.
"""

# %%
# Sampling and decomposing
# ------------------------

import math
import time

import numpy as np

from bosonharness import haar_unitary, hilbert_dimension, output_distribution, permanent, recompose, reck_decompose

U = haar_unitary(6, seed=3)
seq = reck_decompose(U)
print(f"{seq.n_beamsplitters} beamsplitters, {seq.n_phase_shifters} phase shifters")
print("rebuild error", np.linalg.norm(recompose(seq) - U))

# %%
# The first few beamsplitters, in the order light meets them.

for el in [e for e in seq.elements if e.kind == "beamsplitter"][:4]:
    print(el.kind, el.modes, round(el.angle, 4), round(el.phase, 4))

# %%
# Permanent cost
# --------------
#
# Ryser's formula with Gray-code updates needs about 2^m m operations.
# The all-ones matrix is a handy check since its permanent is m!. Its
# alternating sum cancels badly, so exact agreement stops around m = 12.

for m in (4, 8, 12):
    print(m, round(permanent(np.ones((m, m))).real), math.factorial(m))

rng = np.random.default_rng(0)
permanent(np.eye(2))  # compile once before timing
for m in (12, 16, 20, 24):
    A = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    t0 = time.perf_counter()
    permanent(A)
    print(m, f"{time.perf_counter() - t0:.4f}s")

# %%
# Output space
# ------------
#
# Exact enumeration is only possible for tiny instances; the count of
# configurations grows like a binomial coefficient.

d = output_distribution(U, (1, 1, 1, 0, 0, 0))
print(len(d), "configurations, total probability", round(d.total(), 12))
print("largest outcome", max(d.entries, key=d.entries.get))
for n, N in [(3, 6), (10, 100), (20, 400)]:
    print(n, N, f"{hilbert_dimension(n, N):.3e}")
