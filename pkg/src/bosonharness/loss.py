"""Uniform photon loss: post-selection, survival statistics and loss channels
applied to exact output distributions.

Uniform loss commutes with any passive network, so all inefficiencies
(source, circuit, detector) are lumped into a single per-photon
transmission ``eta`` applied at the source.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, UnreachableTargetError
from .fock import ENUMERATION_CEILING, FockConfig, OutputDistribution, output_distribution

__all__ = [
    "LossChannel",
    "LossySingleMode",
    "postselect_probability",
    "required_efficiency",
    "survival_distribution",
    "photons_required",
    "apply_loss_to_distribution",
    "lossy_output_distribution",
]


def _check_eta(eta: float) -> float:
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"efficiency must lie in [0, 1], got {eta}")
    return eta


@dataclass(frozen=True)
class LossChannel:
    eta: float

    def __post_init__(self):
        _check_eta(self.eta)

    @property
    def p_loss(self) -> float:
        return 1.0 - self.eta

    def then(self, other: "LossChannel") -> "LossChannel":
        """Two channels in series multiply their transmissions."""
        return LossChannel(self.eta * other.eta)


@dataclass(frozen=True)
class LossySingleMode:
    """A single photon after loss: ``(1 - eta)|0><0| + eta|1><1|``."""

    eta: float

    def __post_init__(self):
        _check_eta(self.eta)

    @property
    def weights(self) -> tuple[float, float]:
        return (1.0 - self.eta, self.eta)

    def number_probabilities(self, cutoff: int = 2) -> np.ndarray:
        p = np.zeros(max(cutoff, 2))
        p[0], p[1] = self.weights
        return p


def postselect_probability(eta: float, n: int) -> float:
    """Chance that all ``n`` photons survive, ``eta ** n``."""
    return _check_eta(eta) ** n


def required_efficiency(p_target: float, n: int) -> float:
    """Per-photon efficiency at which all ``n`` photons survive with probability ``p_target``."""
    if not 0.0 < p_target <= 1.0:
        raise DomainError(f"target probability must lie in (0, 1], got {p_target}")
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    return p_target ** (1.0 / n)


def survival_distribution(eta: float, n: int) -> np.ndarray:
    """Binomial(n, eta) mass function over the number of surviving photons."""
    eta = _check_eta(eta)
    k = np.arange(n + 1)
    # exact at the endpoints, where 0 ** 0 must be 1
    if eta == 0.0:
        return (k == 0).astype(float)
    if eta == 1.0:
        return (k == n).astype(float)
    # log space: scipy's binom.pmf overflows for subnormal eta
    logp = (gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
            + k * math.log(eta) + (n - k) * math.log1p(-eta))
    return np.exp(logp)


def photons_required(m: float, eta: float) -> int:
    """Smallest integer input photon number whose post-loss mean is at least ``m``."""
    eta = _check_eta(eta)
    if m < 0:
        raise DomainError(f"target mean must be >= 0, got {m}")
    if eta == 0.0:
        if m == 0:
            return 0
        raise UnreachableTargetError("no photon survives a channel with eta = 0")
    # guard against 20/0.96*0.96 style rounding pushing the ceiling up
    q = m / eta
    r = round(q)
    return int(r) if abs(q - r) <= 1e-9 * abs(q) else math.ceil(q)


def _binom_row(k: int, eta: float) -> list[float]:
    return [math.comb(k, j) * eta**j * (1.0 - eta) ** (k - j) for j in range(k + 1)]


def _config_loss(cfg: FockConfig, etas: Sequence[float]) -> dict[FockConfig, float]:
    out: dict[FockConfig, float] = {(): 1.0}
    for occ, eta in zip(cfg, etas):
        row = _binom_row(occ, eta)
        nxt: dict[FockConfig, float] = {}
        for prefix, p in out.items():
            for j, q in enumerate(row):
                if q == 0.0:
                    continue
                key = prefix + (j,)
                nxt[key] = nxt.get(key, 0.0) + p * q
        out = nxt
    return out


def _sector_order(acc: dict[FockConfig, float]) -> dict[FockConfig, float]:
    # highest photon sector first; reverse tuple order is enumeration order
    keys = sorted(acc, key=lambda c: (sum(c), c), reverse=True)
    return {c: acc[c] for c in keys}


def apply_loss_to_distribution(dist: OutputDistribution, eta, seed: int | None = None) -> OutputDistribution:
    """Exact output of a loss channel acting on every mode of ``dist``.

    Each photon survives independently, so a mode holding ``k`` photons keeps
    ``j`` of them with binomial probability. ``eta`` may be a scalar or a
    per-mode vector. The result mixes photon-number sectors and is laid out
    from the highest sector down, each in enumeration order. ``seed`` is
    accepted for interface symmetry; the computation is exact and ignores it.
    """
    etas = np.broadcast_to(np.asarray(eta, dtype=float), (dist.modes,))
    for e in etas:
        _check_eta(e)
    acc: dict[FockConfig, float] = {}
    for cfg, p in dist.entries.items():
        for red, q in _config_loss(cfg, etas).items():
            acc[red] = acc.get(red, 0.0) + p * q
    return OutputDistribution(dist.modes, None, _sector_order(acc))


def lossy_output_distribution(U, input: Sequence[int], eta,
                              ceiling: int = ENUMERATION_CEILING) -> OutputDistribution:
    """Apply loss at the source, then scatter each surviving sector through ``U``.

    Equivalent to loss after the network when ``eta`` is uniform.
    """
    U = np.asarray(U, dtype=complex)
    N = U.shape[0]
    src = OutputDistribution(N, sum(input), {tuple(input): 1.0})
    lossy_in = apply_loss_to_distribution(src, eta)
    acc: dict[FockConfig, float] = {}
    for cfg, p in lossy_in.entries.items():
        if p == 0.0:
            continue
        for out, q in output_distribution(U, cfg, ceiling).entries.items():
            acc[out] = acc.get(out, 0.0) + p * q
    return OutputDistribution(N, None, _sector_order(acc))
