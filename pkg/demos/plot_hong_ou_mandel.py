"""
Two photons on a beamsplitter
=============================

Two single photons meeting on a balanced beamsplitter never leave in
different ports. Distinguishable particles do so half of the time.
"""

# %%
# The network
# -----------
#
# Columns are input modes, rows are output modes.

import numpy as np

from bosonharness import (
    balanced_beamsplitter,
    distinguishable_distribution,
    output_distribution,
    sample,
)

B = balanced_beamsplitter()
print(np.round(B, 4))

# %%
# Exact statistics
# ----------------
#
# Indistinguishable photons bunch: the coincidence term cancels because
# the permanent of the 2x2 matrix is zero.

quantum = output_distribution(B, (1, 1))
classical = distinguishable_distribution(B, (1, 1))
for cfg in quantum.configs:
    print(cfg, f"bosons {quantum[cfg]:.3f}", f"distinguishable {classical[cfg]:.3f}")

# %%
# Sampling
# --------
#
# A finite run shows the same thing: no (1, 1) clicks at all.

clicks = sample(quantum, 2000, seed=1)
print({cfg: clicks.count(cfg) for cfg in quantum.configs})

# %%
# Mean occupations agree
# ----------------------
#
# First moments cannot tell the two cases apart; both follow |U|^2 times
# the input.

print(quantum.mean_occupations(), classical.mean_occupations())
