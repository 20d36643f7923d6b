"""Mode mismatch treated as loss.

Narrowband filtering makes partially distinguishable photons look identical
inside the pass band but throws away the rest of each wavepacket. The pass
probability of the filter therefore acts as an extra transmission factor,
and the hardness criteria are evaluated at the combined efficiency.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np
from scipy.integrate import trapezoid
from scipy.special import ndtr

from .errors import DomainError
from .hardness import Benchmark, criterion_gauss, criterion_mean
from .loss import LossChannel

__all__ = [
    "SpectralProfile",
    "FilterWindow",
    "LossBudgetVerdict",
    "filter_pass_probability",
    "filter_to_loss",
    "loss_budget_check",
]

NORM_TOL = 1e-6
MIN_SAMPLES = 1000
# trapezoid resolution for Gaussian profiles
GAUSS_SPAN = 12.0
STEPS_PER_SIGMA = 400


@dataclass(frozen=True)
class FilterWindow:
    """Pass band ``[start, start + width]``."""

    start: float
    width: float

    def __post_init__(self):
        if not self.width >= 0:
            raise DomainError(f"window width must be >= 0, got {self.width}")

    @property
    def stop(self) -> float:
        return self.start + self.width

    @classmethod
    def centered(cls, center: float, width: float) -> "FilterWindow":
        return cls(center - width / 2, width)


@dataclass(frozen=True)
class SpectralProfile:
    """Spectral intensity ``|psi(omega)|^2`` of one photon.

    Either a Gaussian (``center``, ``width`` = standard deviation) or a
    tabulated density on ``omega`` with values ``density``; tabulated
    profiles must integrate to one within ``1e-6``.
    """

    kind: Literal["gaussian", "tabulated"] = "gaussian"
    center: float = 0.0
    width: float = 1.0
    omega: np.ndarray | None = field(default=None, repr=False)
    density: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind == "gaussian":
            if not self.width > 0:
                raise DomainError(f"Gaussian width must be > 0, got {self.width}")
        elif self.kind == "tabulated":
            if self.omega is None or self.density is None:
                raise DomainError("tabulated profile needs omega and density")
            w = np.asarray(self.omega, dtype=float)
            d = np.asarray(self.density, dtype=float)
            if w.shape != d.shape or w.ndim != 1 or w.size < 2:
                raise DomainError("omega and density must be equal-length 1-D arrays")
            if np.any(np.diff(w) <= 0):
                raise DomainError("omega must be strictly increasing")
            if np.any(d < 0):
                raise DomainError("density must be non-negative")
            norm = trapezoid(d, w)
            if abs(norm - 1.0) > NORM_TOL:
                raise DomainError(f"profile integrates to {norm:.9g}, not 1")
            object.__setattr__(self, "omega", w)
            object.__setattr__(self, "density", d)
        else:
            raise DomainError(f"unknown profile kind {self.kind!r}")

    @classmethod
    def gaussian(cls, center: float = 0.0, width: float = 1.0) -> "SpectralProfile":
        return cls("gaussian", center, width)

    @classmethod
    def tabulated(cls, omega, density, normalize: bool = False) -> "SpectralProfile":
        omega = np.asarray(omega, dtype=float)
        density = np.asarray(density, dtype=float)
        if normalize:
            mass = trapezoid(density, omega) if density.size > 1 and density.shape == omega.shape else 0.0
            if not mass > 0:
                raise DomainError("profile has no positive mass to normalize")
            density = density / mass
        return cls("tabulated", omega=omega, density=density)

    @classmethod
    def from_csv(cls, path, normalize: bool = False) -> "SpectralProfile":
        """Read a two-column ``omega, density`` CSV; a non-numeric header row is skipped."""
        rows = []
        with open(Path(path), newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except ValueError:
                    if rows:
                        raise
        arr = np.asarray(rows)
        return cls.tabulated(arr[:, 0], arr[:, 1], normalize=normalize)

    def pdf(self, omega) -> np.ndarray:
        omega = np.asarray(omega, dtype=float)
        if self.kind == "gaussian":
            z = (omega - self.center) / self.width
            return np.exp(-0.5 * z * z) / (self.width * math.sqrt(2 * math.pi))
        return np.interp(omega, self.omega, self.density, left=0.0, right=0.0)

    def sampled(self, n: int = 4001, span: float = 10.0) -> "SpectralProfile":
        """Tabulated copy of a Gaussian over ``center +- span * width``."""
        if self.kind == "tabulated":
            return self
        w = np.linspace(self.center - span * self.width, self.center + span * self.width, n)
        return SpectralProfile.tabulated(w, self.pdf(w), normalize=True)

    def filtered(self, window: FilterWindow, samples: int = 4001) -> "SpectralProfile":
        """Profile after the filter, renormalized to the part that passed."""
        p = filter_pass_probability(self, window)
        if p == 0.0:
            raise DomainError("filter blocks the whole profile")
        w = np.linspace(window.start, window.stop, samples)
        return SpectralProfile.tabulated(w, self.pdf(w), normalize=True)


def _trapezoid_pass(profile: SpectralProfile, lo: float, hi: float) -> float:
    count = MIN_SAMPLES
    if profile.kind == "tabulated":
        lo = max(lo, float(profile.omega[0]))
        hi = min(hi, float(profile.omega[-1]))
    else:
        # mass beyond 12 sigma is below double precision
        lo = max(lo, profile.center - GAUSS_SPAN * profile.width)
        hi = min(hi, profile.center + GAUSS_SPAN * profile.width)
        count = max(count, math.ceil((hi - lo) / profile.width * STEPS_PER_SIGMA) + 1)
    if hi <= lo:
        return 0.0
    grid = np.linspace(lo, hi, count)
    if profile.kind == "tabulated":
        inner = profile.omega[(profile.omega > lo) & (profile.omega < hi)]
        grid = np.union1d(grid, inner)
    return float(trapezoid(profile.pdf(grid), grid))


def filter_pass_probability(profile: SpectralProfile, window: FilterWindow,
                            method: Literal["auto", "trapezoid"] = "auto") -> float:
    """Probability that a photon with this spectrum passes the window.

    Gaussian profiles use the normal CDF unless ``method="trapezoid"``;
    tabulated ones are always integrated by the trapezoid rule on at least
    1000 points spanning the window, with the table's own nodes included so
    piecewise-linear data integrate exactly.
    """
    if window.width == 0:
        return 0.0
    if profile.kind == "gaussian" and method == "auto":
        a = (window.start - profile.center) / profile.width
        b = (window.stop - profile.center) / profile.width
        p = float(ndtr(b) - ndtr(a))
    else:
        p = _trapezoid_pass(profile, window.start, window.stop)
    return min(1.0, max(0.0, p))


def filter_to_loss(profile: SpectralProfile, window: FilterWindow) -> LossChannel:
    """The filter as a loss channel with transmission equal to its pass probability."""
    return LossChannel(filter_pass_probability(profile, window))


@dataclass(frozen=True)
class LossBudgetVerdict:
    n: int
    eta_phys: float
    eta_filter: float
    eta_total: float
    mean_photons: float
    D_min: float
    mean_ok: bool
    gauss_ok: bool

    @property
    def hard(self) -> bool:
        return self.mean_ok and self.gauss_ok

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "eta_phys": self.eta_phys,
            "eta_filter": self.eta_filter,
            "eta_total": self.eta_total,
            "mean_photons": self.mean_photons,
            "D_min": self.D_min,
            "mean_ok": self.mean_ok,
            "gauss_ok": self.gauss_ok,
            "hard": self.hard,
        }


def loss_budget_check(eta_phys: float, profile: SpectralProfile, window: FilterWindow, n: int,
                      bench: Benchmark | None = None) -> LossBudgetVerdict:
    """Combine physical loss with filtering loss and test both hardness criteria."""
    bench = bench or Benchmark()
    eta_filter = filter_to_loss(profile, window).eta
    eta_total = LossChannel(eta_phys).then(LossChannel(eta_filter)).eta
    mean_ok, mean = criterion_mean(n, eta_total, bench)
    gauss_ok, d = criterion_gauss(n, eta_total, bench)
    return LossBudgetVerdict(n, float(eta_phys), eta_filter, eta_total, mean, d, mean_ok, gauss_ok)
