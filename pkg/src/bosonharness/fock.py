"""Exact Fock-basis simulation of single photons scattered by a passive network.

Convention: a photon entering mode ``j`` leaves in mode ``i`` with amplitude
``U[i, j]`` (columns index inputs, rows index outputs), so ``U = I`` is the
trivial network. The scattering matrix for an input/output pair is built by
repeating columns of ``U`` by the input occupations and rows by the output
occupations.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import EnumerationTooLargeError, InvalidInputError, SectorError
from .linops import PERMANENT_MAX_SIZE, check_unitary, permanent

__all__ = [
    "ENUMERATION_CEILING",
    "OutputDistribution",
    "standard_input",
    "hilbert_dimension",
    "configurations",
    "scattering_matrix",
    "amplitude",
    "output_distribution",
    "sample",
    "distinguishable_distribution",
    "distinguishable_parameter_count",
]

ENUMERATION_CEILING = 10**7
# probabilities below this are stored as exact zeros
PROB_FLOOR = 1e-300

FockConfig = tuple[int, ...]


@dataclass
class OutputDistribution:
    """Probability table over occupation configurations.

    ``entries`` keeps enumeration order. ``photons`` is the common photon
    number of every configuration, or ``None`` for a mixture of sectors
    (for example after loss).
    """

    modes: int
    photons: int | None
    entries: dict[FockConfig, float] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, config: Sequence[int]) -> float:
        return self.entries.get(tuple(config), 0.0)

    @property
    def configs(self) -> list[FockConfig]:
        return list(self.entries)

    @property
    def probabilities(self) -> np.ndarray:
        return np.fromiter(self.entries.values(), dtype=float, count=len(self.entries))

    def total(self) -> float:
        return math.fsum(self.entries.values())

    def mean_occupations(self) -> np.ndarray:
        out = np.zeros(self.modes)
        for cfg, p in self.entries.items():
            out += p * np.asarray(cfg)
        return out

    def mean_photons(self) -> float:
        return math.fsum(p * sum(cfg) for cfg, p in self.entries.items())

    def to_dict(self) -> dict:
        return {
            "modes": self.modes,
            "photons": self.photons,
            "entries": [{"config": list(c), "p": float(p)} for c, p in self.entries.items()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "OutputDistribution":
        entries = {tuple(int(x) for x in e["config"]): float(e["p"]) for e in data["entries"]}
        return cls(int(data["modes"]), data.get("photons"), entries)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["config", "p"])
        for c, p in self.entries.items():
            w.writerow(["-".join(map(str, c)), f"{p:.12g}"])
        return buf.getvalue()


def standard_input(n: int, N: int, modes: Sequence[int] | None = None) -> FockConfig:
    """``n`` single photons in ``N`` modes.

    By default the first ``n`` modes are occupied; ``modes`` picks a
    different set of ``n`` distinct modes.
    """
    if n < 0 or N < 1:
        raise InvalidInputError(f"need n >= 0 and N >= 1, got n={n}, N={N}")
    if n > N:
        raise InvalidInputError(f"cannot place {n} single photons in {N} modes")
    occ = [0] * N
    chosen = range(n) if modes is None else list(modes)
    if len(chosen) != n or len(set(chosen)) != n or any(not 0 <= m < N for m in chosen):
        raise InvalidInputError(f"modes must be {n} distinct indices below {N}, got {modes}")
    for m in chosen:
        occ[m] = 1
    return tuple(occ)


def hilbert_dimension(n: int, N: int) -> int:
    """Number of ways to place ``n`` bosons in ``N`` modes, ``C(N+n-1, n)``."""
    if n < 0 or N < 1:
        raise InvalidInputError(f"need n >= 0 and N >= 1, got n={n}, N={N}")
    return math.comb(N + n - 1, n)


def configurations(n: int, N: int) -> Iterator[FockConfig]:
    """All ``n``-photon configurations over ``N`` modes, lexicographically decreasing."""
    if N == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in configurations(n - first, N - 1):
            yield (first,) + rest


def _check_config(config: Sequence[int], N: int) -> FockConfig:
    cfg = tuple(int(x) for x in config)
    if len(cfg) != N or any(x < 0 for x in cfg):
        raise InvalidInputError(f"config {config} is not a valid occupation list over {N} modes")
    return cfg


def scattering_matrix(U, input: Sequence[int], output: Sequence[int]) -> np.ndarray:
    """Submatrix of ``U`` with rows repeated by ``output`` and columns by ``input``."""
    U = np.asarray(U)
    rows = np.repeat(np.arange(U.shape[0]), output)
    cols = np.repeat(np.arange(U.shape[1]), input)
    return U[np.ix_(rows, cols)]


def _factorial_norm(input: FockConfig, output: FockConfig) -> float:
    prod = 1
    for x in input + output:
        prod *= math.factorial(x)
    return math.sqrt(prod)


def amplitude(U, input: Sequence[int], output: Sequence[int]) -> complex:
    """Transition amplitude ``<output| U |input>`` via a permanent.

    ``Per(A_S) / sqrt(prod s_i! prod t_j!)`` where ``A_S`` is the
    :func:`scattering_matrix`.
    """
    U = np.asarray(U, dtype=complex)
    N = U.shape[0]
    s = _check_config(input, N)
    t = _check_config(output, N)
    if sum(s) != sum(t):
        raise SectorError(f"input has {sum(s)} photons but output has {sum(t)}")
    return permanent(scattering_matrix(U, s, t)) / _factorial_norm(s, t)


def _check_ceiling(n: int, N: int, ceiling: int) -> None:
    dim = hilbert_dimension(n, N)
    if dim > ceiling:
        raise EnumerationTooLargeError(dim, ceiling)
    if n > PERMANENT_MAX_SIZE:
        raise EnumerationTooLargeError(dim, ceiling)


def output_distribution(U, input: Sequence[int], ceiling: int = ENUMERATION_CEILING) -> OutputDistribution:
    """Exact output statistics for indistinguishable photons.

    Examples
    --------
    >>> from bosonharness.linops import balanced_beamsplitter
    >>> d = output_distribution(balanced_beamsplitter(), (1, 1))
    >>> [round(p, 12) for p in d.entries.values()]
    [0.5, 0.0, 0.5]
    """
    U = check_unitary(U)
    N = U.shape[0]
    s = _check_config(input, N)
    n = sum(s)
    _check_ceiling(n, N, ceiling)
    norm_in = 1
    for x in s:
        norm_in *= math.factorial(x)
    cols = np.repeat(np.arange(N), s)
    entries = {}
    for t in configurations(n, N):
        norm = 1
        for x in t:
            norm *= math.factorial(x)
        A = U[np.ix_(np.repeat(np.arange(N), t), cols)]
        p = abs(permanent(A)) ** 2 / (norm_in * norm)
        entries[t] = p if p >= PROB_FLOOR else 0.0
    return OutputDistribution(N, n, entries)


def sample(dist: OutputDistribution, count: int, seed: int | None = None) -> list[FockConfig]:
    """Draw ``count`` i.i.d. configurations from ``dist``."""
    if count <= 0:
        return []
    configs = dist.configs
    p = dist.probabilities
    p = p / p.sum()
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(configs), size=count, p=p)
    return [configs[i] for i in idx]


def distinguishable_distribution(U, input: Sequence[int],
                                 ceiling: int = ENUMERATION_CEILING) -> OutputDistribution:
    """Output statistics when every photon is distinguishable.

    Each photon hops independently from input mode ``j`` to output mode
    ``i`` with probability ``|U[i, j]|^2``; the occupation distribution is
    the convolution over photons.
    """
    U = check_unitary(U)
    N = U.shape[0]
    s = _check_config(input, N)
    n = sum(s)
    _check_ceiling(n, N, ceiling)
    T = np.abs(U) ** 2
    acc: dict[FockConfig, float] = {(0,) * N: 1.0}
    for j, occ in enumerate(s):
        for _ in range(occ):
            nxt: dict[FockConfig, float] = {}
            for cfg, p in acc.items():
                for i in range(N):
                    if T[i, j] == 0:
                        continue
                    c = list(cfg)
                    c[i] += 1
                    c = tuple(c)
                    nxt[c] = nxt.get(c, 0.0) + p * T[i, j]
            acc = nxt
    entries = {}
    for t in configurations(n, N):
        p = acc.get(t, 0.0)
        entries[t] = p if p >= PROB_FLOOR else 0.0
    return OutputDistribution(N, n, entries)


def distinguishable_parameter_count(n: int, N: int) -> int:
    """Independent single-photon amplitudes in the factorized description, ``n * N``."""
    return n * N
