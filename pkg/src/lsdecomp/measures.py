"""Entanglement quantifiers for two-qubit and 2xK states.

Implements the spin flip, the R-matrix concurrence and entanglement of
formation, the Wootters basis (via a Takagi factorization of the tau
matrix), the pure-state I-concurrence, and the restricted-subspace
concurrence lower bound for 2xK systems.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import TOL
from .errors import WrongDims
from .linalg import DensityMatrix, PureState, hermitian_eigen, partial_trace, psd_sqrt

__all__ = [
    "SIGMA_Y",
    "SPIN_FLIP_OP",
    "ConcurrenceReport",
    "WoottersDecomposition",
    "spin_flip",
    "wootters_concurrence",
    "wootters_basis",
    "i_concurrence_pure",
    "concurrence_lower_bound_2k",
    "takagi",
    "binary_entropy",
    "eof_from_concurrence",
]

SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SPIN_FLIP_OP = np.kron(SIGMA_Y, SIGMA_Y)  # anti-diagonal (-1, 1, 1, -1)


def _require_two_qubits(rho: DensityMatrix) -> None:
    if tuple(rho.dims) != (2, 2):
        raise WrongDims(f"two-qubit operation got dims {rho.dims}")


def spin_flip(rho: DensityMatrix) -> np.ndarray:
    """(sigma_y x sigma_y) rho* (sigma_y x sigma_y) for a two-qubit state."""
    _require_two_qubits(rho)
    return SPIN_FLIP_OP @ rho.mat.conj() @ SPIN_FLIP_OP


def binary_entropy(x: float) -> float:
    """-x ln x - (1-x) ln(1-x), in nats."""
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * np.log(x) - (1.0 - x) * np.log(1.0 - x))


def eof_from_concurrence(c: float) -> float:
    """Entanglement of formation (nats) from the concurrence."""
    c = min(max(c, 0.0), 1.0)
    return binary_entropy(0.5 + 0.5 * np.sqrt(1.0 - c * c))


@dataclass(frozen=True)
class ConcurrenceReport:
    concurrence: float
    r_eigenvalues: np.ndarray  # four non-negative reals, descending
    eof: float                 # nats; eof / ln 2 gives ebits


def _r_eigenvalues(mat: np.ndarray) -> np.ndarray:
    """Descending eigenvalues of R = sqrt(sqrt(rho) rho~ sqrt(rho)).

    Accepts an unnormalized PSD two-qubit matrix; the eigenvalues scale
    linearly with the trace, which the 2xK lower bound relies on.
    """
    sr = psd_sqrt(mat)
    flipped = SPIN_FLIP_OP @ mat.conj() @ SPIN_FLIP_OP
    r = psd_sqrt(sr @ flipped @ sr)
    lam = np.linalg.eigvalsh(r)[::-1]
    return np.clip(lam, 0.0, None)


def wootters_concurrence(rho: DensityMatrix) -> ConcurrenceReport:
    """Concurrence C = max(0, l1 - l2 - l3 - l4) plus EoF for dims [2,2]."""
    _require_two_qubits(rho)
    lam = _r_eigenvalues(rho.mat)
    c = lam[0] - lam[1] - lam[2] - lam[3]
    if -TOL.psd <= c < 0.0:
        c = 0.0
    c = max(c, 0.0)
    return ConcurrenceReport(float(c), lam, eof_from_concurrence(float(c)))


def takagi(tau: np.ndarray, zero_tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Takagi factorization tau = V diag(sig) V^T of a complex symmetric matrix.

    Returns (sig, V) with sig >= 0 descending and V unitary.  Works on the
    real symmetric doubling [[X, Y], [Y, -X]] (X = Re tau, Y = Im tau): a
    real eigenpair (a; b) at eigenvalue s > 0 gives a con-eigenvector
    v = a + ib with tau v* = s v, and eigenpairs come in +/- s partners
    under (a; b) -> (-b; a).  Picking the non-negative half (with a
    J-partner filter inside the zero eigenspace) yields a unitary V even
    for degenerate or rank-deficient input.
    """
    tau = np.asarray(tau, dtype=complex)
    n = tau.shape[0]
    if tau.shape != (n, n) or np.abs(tau - tau.T).max() > 1e-10:
        raise ValueError("takagi expects a complex symmetric square matrix")
    x, y = tau.real, tau.imag
    m = np.block([[x, y], [y, -x]])
    w, v = np.linalg.eigh(m)
    order = np.argsort(w)[::-1]
    w, v = w[order], v[:, order]

    sigs: list[float] = []
    vecs: list[np.ndarray] = []
    for i in range(2 * n):
        if w[i] > zero_tol:
            sigs.append(float(w[i]))
            vecs.append(v[:n, i] + 1j * v[n:, i])
    # The zero eigenspace contains each kernel direction twice (as v and
    # its partner i v*); complex Gram-Schmidt picks one copy of each.
    for i in range(2 * n):
        if len(vecs) == n:
            break
        if abs(w[i]) <= zero_tol:
            cand = v[:n, i] + 1j * v[n:, i]
            for u in vecs:
                cand = cand - np.vdot(u, cand) * u
            nrm = np.linalg.norm(cand)
            if nrm > 0.5:
                sigs.append(0.0)
                vecs.append(cand / nrm)
    if len(vecs) != n:
        raise ValueError("takagi failed to select a complete con-eigenbasis")
    return np.array(sigs), np.array(vecs).T


@dataclass(frozen=True)
class WoottersDecomposition:
    """Subnormalized decomposition rho = sum_i lambdas[i] |x'_i><x'_i|.

    ``basis`` holds the |x'_i> as columns; <x_i|x~_j> = lambdas[i] d_ij
    with |x_i> = sqrt(lambdas[i]) |x'_i>.  Columns with lambdas[i] = 0
    are zero vectors.
    """

    lambdas: np.ndarray
    basis: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.basis * self.lambdas) @ self.basis.conj().T

    def concurrence(self) -> float:
        lam = self.lambdas
        return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def wootters_basis(rho: DensityMatrix) -> WoottersDecomposition:
    """Build the Wootters basis of a two-qubit state.

    Starting from subnormalized eigenvectors |v_i> of rho, the symmetric
    matrix tau_ij = <v_i|v~_j> is Takagi-factorized, and the unitary
    congruence making it non-negative diagonal is applied to the |v_i>.
    Rank deficiency is allowed: missing directions get lambda = 0.
    """
    _require_two_qubits(rho)
    w, vmat = hermitian_eigen(rho.mat)
    w = np.clip(w, 0.0, None)
    sub = vmat * np.sqrt(w)  # subnormalized eigenvectors as columns
    flipped = SPIN_FLIP_OP @ sub.conj()
    tau = sub.conj().T @ flipped  # tau_ij = <v_i | v~_j>, complex symmetric
    tau = 0.5 * (tau + tau.T)
    sig, v = takagi(tau)
    u = v.conj().T  # U tau U^T = diag(sig)
    xs = sub @ u.conj().T  # |x_i> = sum_j U*_ij |v_j>, as columns
    basis = np.zeros_like(xs)
    for i in range(4):
        if sig[i] > TOL.zero:
            basis[:, i] = xs[:, i] / np.sqrt(sig[i])
    return WoottersDecomposition(np.asarray(sig, dtype=float), basis)


def i_concurrence_pure(psi: PureState) -> float:
    """sqrt(2 (1 - tr rho_A^2)) for a bipartite pure state."""
    if len(psi.dims) != 2:
        raise WrongDims(f"I-concurrence needs bipartite dims, got {psi.dims}")
    rho_a = partial_trace(psi.projector(), 0).mat
    purity = float(np.real(np.trace(rho_a @ rho_a)))
    return float(np.sqrt(max(0.0, 2.0 * (1.0 - purity))))


def concurrence_lower_bound_2k(rho: DensityMatrix) -> tuple[float, list[float]]:
    """Lower bound on the concurrence of a 2xK state.

    For every level pair i < j of the K-level side, the state is projected
    onto the 2x2 subspace with P = I_2 x (|i><i| + |j><j|) and the Wootters
    concurrence of the unnormalized restriction is computed.  Returns
    (sqrt(sum of squares), per-pair values in lexicographic pair order).
    """
    if len(rho.dims) != 2 or rho.dims[0] != 2 or rho.dims[1] < 2:
        raise WrongDims(f"expected dims [2, K], got {rho.dims}")
    k = rho.dims[1]
    blocks = rho.mat.reshape(2, k, 2, k)
    values: list[float] = []
    for i in range(k):
        for j in range(i + 1, k):
            sel = [i, j]
            sub = blocks[:, sel][:, :, :, sel].reshape(4, 4)
            lam = _r_eigenvalues(sub)
            values.append(float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))
    return float(np.sqrt(np.sum(np.square(values)))), values
