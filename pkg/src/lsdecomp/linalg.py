"""Dense complex linear algebra foundation.

Plain ``numpy`` arrays are the matrix currency throughout the package;
this module adds the Hermitian/PSD helpers and the subsystem-aware
operations (partial trace, partial transpose) everything else builds on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import TOL
from .errors import BadIndex, NotHermitian, NotPSD, ValidationError

__all__ = [
    "DensityMatrix",
    "PureState",
    "kron",
    "hermitian_eigen",
    "psd_sqrt",
    "partial_transpose",
    "partial_trace",
    "is_psd",
    "rank_at",
]


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product (thin wrapper so call sites read uniformly)."""
    return np.kron(np.asarray(a), np.asarray(b))


def _assert_hermitian(m: np.ndarray, tol: float = TOL.hermitian) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {m.shape}")
    dev = np.abs(m - m.conj().T).max()
    if dev > tol:
        raise NotHermitian(f"matrix deviates from Hermiticity by {dev:.3e}")


def hermitian_eigen(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns (w, V) with m = V diag(w) V^dag.  Each eigenvector's first
    component of magnitude > 1e-12 is phased to be real positive, so
    non-degenerate outputs are deterministic.
    """
    m = np.asarray(m, dtype=complex)
    _assert_hermitian(m)
    w, v = np.linalg.eigh(m)
    w, v = w[::-1].copy(), v[:, ::-1].copy()
    for k in range(v.shape[1]):
        col = v[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            phase = col[nz[0]] / abs(col[nz[0]])
            v[:, k] = col / phase
    return w, v


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Hermitian square root of a PSD matrix.

    Eigenvalues in [-eig_clamp, 0) are clamped to zero; anything below
    -psd_hard raises NotPSD.
    """
    m = np.asarray(m, dtype=complex)
    _assert_hermitian(m)
    w, v = np.linalg.eigh(m)
    if w.min() < -TOL.psd_hard:
        raise NotPSD(f"min eigenvalue {w.min():.3e} is too negative for a square root")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def is_psd(m: np.ndarray, tol: float = TOL.psd) -> bool:
    """True iff the Hermitian matrix has min eigenvalue >= -tol."""
    m = np.asarray(m, dtype=complex)
    _assert_hermitian(m)
    return bool(np.linalg.eigvalsh(m).min() >= -tol)


def rank_at(m: np.ndarray, threshold: float = TOL.rank) -> int:
    """Number of eigenvalues above ``threshold`` (Hermitian input)."""
    return int(np.sum(np.linalg.eigvalsh(np.asarray(m, dtype=complex)) > threshold))


def _pt_array(mat: np.ndarray, dims: list[int], subsystem: int) -> np.ndarray:
    n = len(dims)
    total = int(np.prod(dims))
    t = mat.reshape(dims + dims)
    t = np.swapaxes(t, subsystem, n + subsystem)
    return t.reshape(total, total)


def _ptrace_array(mat: np.ndarray, dims: list[int], keep: int) -> np.ndarray:
    n = len(dims)
    t = mat.reshape(dims + dims)
    for k in reversed([i for i in range(n) if i != keep]):
        t = np.trace(t, axis1=k, axis2=len(t.shape) // 2 + k)
    return t


@dataclass(frozen=True)
class DensityMatrix:
    """A validated density matrix with its subsystem dimensions.

    Invariants (checked on construction): Hermitian within 1e-10,
    trace one within 1e-10, min eigenvalue >= -1e-9.
    """

    dims: tuple[int, ...]
    mat: np.ndarray = field(repr=False)

    def __init__(self, dims, mat):
        dims = tuple(int(d) for d in dims)
        mat = np.array(mat, dtype=complex)
        total = int(np.prod(dims))
        if mat.shape != (total, total):
            raise ValidationError(f"matrix shape {mat.shape} does not match dims {dims}")
        dev = np.abs(mat - mat.conj().T).max()
        if dev > TOL.hermitian:
            raise NotHermitian(f"density matrix deviates from Hermiticity by {dev:.3e}")
        tr = mat.trace()
        if abs(tr - 1.0) > TOL.trace:
            raise ValidationError(f"trace {tr} is not 1 within {TOL.trace}")
        wmin = np.linalg.eigvalsh(mat).min()
        if wmin < -TOL.psd:
            raise NotPSD(f"min eigenvalue {wmin:.3e} below -{TOL.psd}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in descending order, clamped at zero from below."""
        w = np.linalg.eigvalsh(self.mat)[::-1]
        return np.where((w < 0) & (w >= -TOL.eig_clamp), 0.0, w)

    def rank(self, threshold: float = TOL.rank) -> int:
        return rank_at(self.mat, threshold)


@dataclass(frozen=True)
class PureState:
    """A normalized state vector with subsystem dimensions."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray = field(repr=False)

    def __init__(self, dims, amplitudes):
        dims = tuple(int(d) for d in dims)
        amplitudes = np.array(amplitudes, dtype=complex).reshape(-1)
        total = int(np.prod(dims))
        if amplitudes.shape != (total,):
            raise ValidationError(
                f"amplitude length {amplitudes.shape[0]} does not match dims {dims}"
            )
        nrm = np.linalg.norm(amplitudes)
        if abs(nrm - 1.0) > TOL.norm:
            raise ValidationError(f"norm {nrm} is not 1 within {TOL.norm}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amplitudes)

    def projector(self) -> DensityMatrix:
        return DensityMatrix(self.dims, np.outer(self.amplitudes, self.amplitudes.conj()))


def partial_transpose(rho: DensityMatrix, subsystem: int) -> np.ndarray:
    """Blockwise transpose on one tensor factor; preserves Hermiticity."""
    if not 0 <= subsystem < len(rho.dims):
        raise BadIndex(f"subsystem {subsystem} out of range for dims {rho.dims}")
    return _pt_array(rho.mat, list(rho.dims), subsystem)


def partial_trace(rho: DensityMatrix, keep: int) -> DensityMatrix:
    """Trace out all subsystems except ``keep``."""
    if not 0 <= keep < len(rho.dims):
        raise BadIndex(f"subsystem {keep} out of range for dims {rho.dims}")
    red = _ptrace_array(rho.mat, list(rho.dims), keep)
    return DensityMatrix([rho.dims[keep]], red)
