"""Which (photon number, efficiency) pairs stay as hard as the benchmark?

Two criteria are compared against a lossy reference experiment
(by default 20 photons at efficiency 0.96):

* mean: the mean surviving photon number is at least the reference's;
* gauss: the minimum trace distance to a Gaussian surrogate is at least the
  reference's.

A point satisfying both is counted as hard. The module also provides the
truncation error of a classical simulation that drops outcomes with more
than ``m`` surviving photons.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import gammaln, xlog1py, xlogy

from .errors import DomainError
from .gaussian import minimize_distance

__all__ = [
    "Benchmark",
    "RegionCell",
    "RegionGrid",
    "TruncationSpec",
    "criterion_mean",
    "criterion_gauss",
    "region",
    "default_axes",
    "truncation_error",
    "truncation_curve",
]

# float slack on both criteria so grid points equal to the benchmark pass
CRITERION_RTOL = 1e-12


@dataclass(frozen=True)
class Benchmark:
    """Reference experiment. ``D_ref`` is computed from the optimizer when omitted.

    ``mean_threshold`` defaults to ``n_ref * eta_ref`` so the reference
    point itself satisfies both criteria; pass ``n_ref`` for the stricter
    reading that requires the lossless photon number.
    """

    n_ref: int = 20
    eta_ref: float = 0.96
    D_ref: float | None = None
    mean_threshold: float | None = None

    def __post_init__(self):
        if self.n_ref < 1 or not 0.0 <= self.eta_ref <= 1.0:
            raise DomainError(f"invalid benchmark n_ref={self.n_ref}, eta_ref={self.eta_ref}")
        if self.D_ref is None:
            object.__setattr__(self, "D_ref", minimize_distance(self.n_ref, self.eta_ref).distance)
        if not 0.0 <= self.D_ref <= 1.0:
            raise DomainError(f"D_ref must lie in [0, 1], got {self.D_ref}")
        if self.mean_threshold is None:
            object.__setattr__(self, "mean_threshold", self.mean_ref)

    @property
    def mean_ref(self) -> float:
        return self.n_ref * self.eta_ref


def criterion_mean(n: int, eta: float, bench: Benchmark | None = None) -> tuple[bool, float]:
    bench = bench or Benchmark()
    mean = n * eta
    return mean >= bench.mean_threshold * (1 - CRITERION_RTOL), mean


def criterion_gauss(n: int, eta: float, bench: Benchmark | None = None) -> tuple[bool, float]:
    bench = bench or Benchmark()
    d = minimize_distance(n, eta).distance
    return d >= bench.D_ref - CRITERION_RTOL, d


@dataclass(frozen=True)
class RegionCell:
    n: int
    eta: float
    mean_photons: float
    D_min: float
    mean_ok: bool
    gauss_ok: bool

    @property
    def hard(self) -> bool:
        return self.mean_ok and self.gauss_ok


@dataclass
class RegionGrid:
    n_axis: list[int]
    eta_axis: list[float]
    cells: list[RegionCell] = field(default_factory=list)

    def cell(self, n: int, eta: float) -> RegionCell:
        i = self.n_axis.index(n)
        j = int(np.argmin(np.abs(np.asarray(self.eta_axis) - eta)))
        if not math.isclose(self.eta_axis[j], eta, abs_tol=1e-9):
            raise KeyError(f"eta={eta} is not on the grid")
        return self.cells[i * len(self.eta_axis) + j]

    def _array(self, attr: str) -> np.ndarray:
        vals = [getattr(c, attr) for c in self.cells]
        return np.asarray(vals).reshape(len(self.n_axis), len(self.eta_axis))

    @property
    def D_min(self) -> np.ndarray:
        return self._array("D_min")

    @property
    def hard(self) -> np.ndarray:
        return self._array("hard")

    def is_monotone(self) -> bool:
        """True if every hard cell stays hard for larger ``n`` and larger ``eta``."""
        h = self.hard
        return bool(np.all(h[1:, :] >= h[:-1, :]) and np.all(h[:, 1:] >= h[:, :-1]))

    def to_dict(self) -> dict:
        return {
            "n_axis": list(self.n_axis),
            "eta_axis": list(self.eta_axis),
            "cells": [
                {"n": c.n, "eta": c.eta, "mean_photons": c.mean_photons, "D_min": c.D_min,
                 "mean_ok": c.mean_ok, "gauss_ok": c.gauss_ok, "hard": c.hard}
                for c in self.cells
            ],
        }


def default_axes(n_min: int = 1, n_max: int = 300, n_step: int = 1,
                 eta_min: float = 0.0, eta_max: float = 1.0, eta_step: float = 0.01):
    n_axis = list(range(n_min, n_max + 1, n_step))
    count = int(round((eta_max - eta_min) / eta_step)) + 1
    eta_axis = [round(eta_min + k * eta_step, 12) for k in range(count)]
    return n_axis, [e for e in eta_axis if e <= eta_max + 1e-12]


def region(n_axis: Sequence[int], eta_axis: Sequence[float], bench: Benchmark | None = None,
           threads: int = 1) -> RegionGrid:
    """Evaluate both criteria on the cross product of the axes (``n`` outer)."""
    if not n_axis or not eta_axis:
        raise DomainError("region axes must be non-empty")
    bench = bench or Benchmark()
    points = [(int(n), float(e)) for n in n_axis for e in eta_axis]

    def one(p):
        n, e = p
        mean_ok, mean = criterion_mean(n, e, bench)
        gauss_ok, d = criterion_gauss(n, e, bench)
        return RegionCell(n, e, mean, d, mean_ok, gauss_ok)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(threads) as pool:
            cells = list(pool.map(one, points))
    else:
        cells = [one(p) for p in points]
    return RegionGrid([int(n) for n in n_axis], [float(e) for e in eta_axis], cells)


@dataclass(frozen=True)
class TruncationSpec:
    n: int
    m: int
    p_loss: float
    N: int

    def __post_init__(self):
        if self.n < 0 or not 0 <= self.m <= self.n:
            raise DomainError(f"need 0 <= m <= n, got m={self.m}, n={self.n}")
        if not 0.0 <= self.p_loss <= 1.0:
            raise DomainError(f"p_loss must lie in [0, 1], got {self.p_loss}")
        if self.N < 1:
            raise DomainError(f"need N >= 1, got {self.N}")


def _truncation_terms(n: int, p_loss: float, N: int) -> np.ndarray:
    # term i: binomial weight of i survivors times 1 - (1 - 1/N)^i
    i = np.arange(n + 1)
    log_binom = gammaln(n + 1) - gammaln(i + 1) - gammaln(n - i + 1)
    weight = np.exp(log_binom + xlogy(n - i, p_loss) + xlogy(i, 1.0 - p_loss))
    return weight * -np.expm1(xlog1py(i, -1.0 / N))


def truncation_error(spec: TruncationSpec) -> float:
    """Distance between ideal and truncated statistics when the simulation keeps at most ``m`` photons.

    ``eps = sum_{i=m+1}^{n} C(n,i) p^(n-i) (1-p)^i [1 - (1 - 1/N)^i]`` for a
    network that sends each photon to every output with probability ``1/N``.
    """
    terms = _truncation_terms(spec.n, spec.p_loss, spec.N)
    return min(1.0, max(0.0, math.fsum(terms[spec.m + 1:])))


def truncation_curve(n: int, p_loss_list: Sequence[float], N: int) -> dict[float, np.ndarray]:
    """Truncation error for every ``m`` in ``0..n`` at each loss probability."""
    out = {}
    for p in p_loss_list:
        TruncationSpec(n, 0, p, N)
        terms = _truncation_terms(n, p, N)
        # tail sums from the top keep the curve exactly non-increasing in m
        tails = np.zeros(n + 1)
        for m in range(n - 1, -1, -1):
            tails[m] = tails[m + 1] + terms[m + 1]
        out[float(p)] = np.clip(tails, 0.0, 1.0)
    return out


def region_to_csv(grid: RegionGrid) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "eta", "mean_photons", "D_min", "mean_ok", "gauss_ok", "hard"])
    for c in grid.cells:
        w.writerow([c.n, f"{c.eta:.12g}", f"{c.mean_photons:.12g}", f"{c.D_min:.12g}",
                    int(c.mean_ok), int(c.gauss_ok), int(c.hard)])
    return buf.getvalue()
