"""
Spectral filtering as loss
==========================

Photons with slightly different spectra can be made indistinguishable by
a narrow filter, at the price of throwing some of them away. That cost is
just more loss.
"""

# %%
# Pass probability against window width
# -------------------------------------

from bosonharness import FilterWindow, SpectralProfile, filter_pass_probability, loss_budget_check

profile = SpectralProfile.gaussian(center=0.0, width=1.0)
for w in (0.5, 1.0, 2.0, 3.0, 4.0):
    print(w, round(filter_pass_probability(profile, FilterWindow.centered(0.0, w)), 4))

# %%
# Budget check
# ------------
#
# A 90% efficient setup with a filter passing 60% leaves 54% overall.
# With 200 photons that still clears both hardness thresholds.

window = FilterWindow.centered(0.0, 1.6832)
for n in (20, 100, 200):
    v = loss_budget_check(0.9, profile, window, n)
    print(n, f"eta_total={v.eta_total:.3f}", f"mean={v.mean_photons:.1f}", f"D={v.D_min:.5f}", "hard" if v.hard else "easy")
