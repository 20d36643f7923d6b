"""Linear-optics substrate: unitaries, Haar sampling, triangular mesh
decomposition and the matrix permanent.

Unitaries are plain ``(N, N)`` complex ndarrays. A network is described by
an :class:`ElementSequence` of two-mode beamsplitters and single-mode phase
shifters; :func:`recompose` multiplies the elements back together in
application order (the first element acts on the state first).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .errors import (
    InvalidDimensionError,
    InvalidElementError,
    InvalidUnitaryError,
    ShapeError,
    SizeLimitError,
)

try:
    import numba as _nb
except ModuleNotFoundError:  # pragma: no cover - exercised only without numba
    _nb = None

__all__ = [
    "UNITARY_TOL",
    "ROUNDTRIP_TOL",
    "PERMANENT_MAX_SIZE",
    "TwoModeElement",
    "ElementSequence",
    "is_unitary",
    "check_unitary",
    "haar_unitary",
    "beamsplitter",
    "balanced_beamsplitter",
    "reck_decompose",
    "recompose",
    "permanent",
]

UNITARY_TOL = 1e-10
ROUNDTRIP_TOL = 1e-8
PERMANENT_MAX_SIZE = 30


def is_unitary(U, tol: float = UNITARY_TOL) -> bool:
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1] or U.shape[0] == 0:
        return False
    return float(np.max(np.abs(U @ U.conj().T - np.eye(U.shape[0])))) <= tol


def check_unitary(U, tol: float = UNITARY_TOL) -> np.ndarray:
    """Return ``U`` as a complex array, raising if it is not unitary to ``tol``."""
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise InvalidUnitaryError(f"expected a square matrix, got shape {U.shape}")
    if U.shape[0] == 0:
        raise InvalidDimensionError("unitary must have dim >= 1")
    if not is_unitary(U, tol):
        err = float(np.max(np.abs(U @ U.conj().T - np.eye(U.shape[0]))))
        raise InvalidUnitaryError(f"matrix is not unitary: max |UU^dag - I| = {err:.3e} exceeds {tol:.1e}")
    return U


def haar_unitary(dim: int, seed: int | None = None) -> np.ndarray:
    """Draw a Haar-random ``dim x dim`` unitary.

    QR-factorizes a matrix of i.i.d. standard complex Gaussians and rescales
    the columns of Q by the phases of diag(R), which removes the bias of the
    Householder sign convention.

    Parameters
    ----------
    dim : int
        Number of modes, at least 1.
    seed : int, optional
        Seed for :func:`numpy.random.default_rng`. A fixed seed gives a fixed
        matrix.

    Returns
    -------
    ndarray
        Complex ``(dim, dim)`` unitary.
    """
    if dim < 1:
        raise InvalidDimensionError(f"dim must be >= 1, got {dim}")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def beamsplitter(theta: float, phi: float = 0.0) -> np.ndarray:
    """2x2 beamsplitter ``[[cos t, -e^{-i phi} sin t], [e^{i phi} sin t, cos t]]``.

    The family is closed under the adjoint: ``B(t, phi)^dag = B(t, phi + pi)``.
    """
    c, s = math.cos(theta), math.sin(theta)
    e = complex(math.cos(phi), math.sin(phi))
    return np.array([[c, -s / e], [e * s, c]], dtype=complex)


def balanced_beamsplitter() -> np.ndarray:
    """The symmetric 50:50 beamsplitter ``[[t, r], [r, -t]]`` with ``t = r = 1/sqrt 2``."""
    t = 1 / math.sqrt(2)
    return np.array([[t, t], [t, -t]], dtype=complex)


@dataclass(frozen=True)
class TwoModeElement:
    """One optical element.

    A ``"beamsplitter"`` acts on ``modes = (p, q)`` with the matrix of
    :func:`beamsplitter` (``angle``, ``phase``); a ``"phase"`` shifter acts on
    ``modes = (p,)`` with ``e^{i phase}`` and ignores ``angle``.
    """

    kind: Literal["beamsplitter", "phase"]
    modes: tuple[int, ...]
    angle: float = 0.0
    phase: float = 0.0

    def matrix(self) -> np.ndarray:
        if self.kind == "beamsplitter":
            return beamsplitter(self.angle, self.phase)
        return np.array([[np.exp(1j * self.phase)]])

    def validate(self, dim: int) -> None:
        if self.kind not in ("beamsplitter", "phase"):
            raise InvalidElementError(f"unknown element kind {self.kind!r}")
        want = 2 if self.kind == "beamsplitter" else 1
        if len(self.modes) != want:
            raise InvalidElementError(f"{self.kind} needs {want} mode index(es), got {self.modes}")
        if len(set(self.modes)) != len(self.modes):
            raise InvalidElementError(f"mode indices must be distinct, got {self.modes}")
        if any(m < 0 or m >= dim for m in self.modes):
            raise InvalidElementError(f"mode index out of range for dim {dim}: {self.modes}")
        if not (math.isfinite(self.angle) and math.isfinite(self.phase)):
            raise InvalidElementError("element angles must be finite")


@dataclass(frozen=True)
class ElementSequence:
    dim: int
    elements: tuple[TwoModeElement, ...] = field(default_factory=tuple)

    @property
    def n_beamsplitters(self) -> int:
        return sum(e.kind == "beamsplitter" for e in self.elements)

    @property
    def n_phase_shifters(self) -> int:
        return sum(e.kind == "phase" for e in self.elements)


def reck_decompose(U, tol: float = UNITARY_TOL) -> ElementSequence:
    """Factor a unitary into a triangular mesh of nearest-neighbour elements.

    Below-diagonal entries are nulled column by column, bottom row first,
    with a beamsplitter acting on rows ``(i - 1, i)``. What remains is a
    diagonal of phases. Inverting the nulling steps gives at most
    ``N(N-1)/2`` beamsplitters preceded by ``N`` phase shifters.
    """
    U = check_unitary(U, tol)
    N = U.shape[0]
    M = U.copy()
    nulls: list[tuple[int, float, float]] = []
    for j in range(N - 1):
        for i in range(N - 1, j, -1):
            a, b = M[i - 1, j], M[i, j]
            if b == 0:
                continue
            theta = math.atan2(abs(b), abs(a))
            phi = float(np.angle(-b)) - (float(np.angle(a)) if a != 0 else 0.0)
            G = beamsplitter(theta, phi)
            M[[i - 1, i], :] = G @ M[[i - 1, i], :]
            M[i, j] = 0.0
            nulls.append((i, theta, phi))

    elements = [TwoModeElement("phase", (k,), phase=float(np.angle(M[k, k]))) for k in range(N)]
    # U = G_1^dag ... G_K^dag D, so G_K^dag is applied first after D.
    for i, theta, phi in reversed(nulls):
        adj_phase = math.remainder(phi + math.pi, 2 * math.pi)
        elements.append(TwoModeElement("beamsplitter", (i - 1, i), angle=theta, phase=adj_phase))
    return ElementSequence(N, tuple(elements))


def recompose(seq: ElementSequence) -> np.ndarray:
    if seq.dim < 1:
        raise InvalidDimensionError(f"dim must be >= 1, got {seq.dim}")
    U = np.eye(seq.dim, dtype=complex)
    for el in seq.elements:
        el.validate(seq.dim)
        idx = list(el.modes)
        U[idx, :] = el.matrix() @ U[idx, :]
    return U


def _ryser_gray(A: np.ndarray) -> complex:
    # Ryser's formula over column subsets visited in Gray-code order: one
    # column enters or leaves per step, so the row sums update in O(m).
    m = A.shape[0]
    rowsum = np.zeros(m, dtype=np.complex128)
    total = 0j
    sign = 1.0
    gray_prev = 0
    for k in range(1, 1 << m):
        gray = k ^ (k >> 1)
        diff = gray ^ gray_prev
        j = 0
        while (diff >> j) & 1 == 0:
            j += 1
        if gray & diff:
            for r in range(m):
                rowsum[r] += A[r, j]
        else:
            for r in range(m):
                rowsum[r] -= A[r, j]
        sign = -sign
        prod = 1.0 + 0j
        for r in range(m):
            prod *= rowsum[r]
        total += sign * prod
        gray_prev = gray
    # sign tracks (-1)^|S|; Ryser carries an overall (-1)^m
    return total if m % 2 == 0 else -total


_ryser_gray_py = _ryser_gray
if _nb is not None:
    _ryser_gray = _nb.njit(cache=True)(_ryser_gray_py)


def permanent(A, max_size: int = PERMANENT_MAX_SIZE) -> complex:
    """Permanent of a square matrix by Ryser's formula, ``O(2^m m)``.

    Parameters
    ----------
    A : array_like
        ``(m, m)`` matrix, real or complex. ``m = 0`` gives 1.
    max_size : int
        Refuse matrices larger than this.
    """
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError(f"permanent needs a square matrix, got shape {A.shape}")
    m = A.shape[0]
    if m > max_size:
        raise SizeLimitError(f"{m}x{m} exceeds permanent size limit {max_size}")
    if m == 0:
        return 1 + 0j
    if m == 1:
        return complex(A[0, 0])
    return complex(_ryser_gray(np.ascontiguousarray(A)))


def matrix_to_json(U) -> list:
    """Nested row-major ``[re, im]`` pairs."""
    U = np.asarray(U, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in U]


def matrix_from_json(data: Sequence) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 3 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim == 2:
        return arr.astype(complex)
    raise ShapeError(f"matrix JSON must be nested [re, im] pairs, got array shape {arr.shape}")
