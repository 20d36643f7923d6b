"""
Loss, post-selection and how many photons to send
=================================================

Uniform loss commutes with a passive network, so it can be moved to the
source. Here we check that and size an experiment around it.
"""

# %%
# Loss at the source or at the detectors
# --------------------------------------

from bosonharness import (
    apply_loss_to_distribution,
    haar_unitary,
    lossy_output_distribution,
    output_distribution,
    photons_required,
    postselect_probability,
    required_efficiency,
    standard_input,
)

U = haar_unitary(4, seed=0)
s = standard_input(3, 4)
after = apply_loss_to_distribution(output_distribution(U, s), 0.7)
before = lossy_output_distribution(U, s, 0.7)
gap = max(abs(after[c] - before[c]) for c in set(after.entries) | set(before.entries))
print("largest difference", gap)
print("mean photons", round(after.mean_photons(), 10), "expected", 0.7 * 3)

# %%
# Post-selection
# --------------
#
# Keeping only runs where all n photons arrive succeeds with eta^n.

for eta in (0.9, 0.96, 0.99):
    print(eta, round(postselect_probability(eta, 20), 4))
print("efficiency for a 50% success rate at n=20:", round(required_efficiency(0.5, 20), 5))

# %%
# Matching a lossless mean
# ------------------------
#
# If instead we accept any number of surviving photons, we can send more
# to keep the mean where we want it.

for eta in (0.96, 0.8, 0.5, 0.3):
    print(eta, photons_required(20, eta))
