"""Analytic state families: constructors, separability predicates, helpers.

Every family gets a small parameter record, a ``to_density`` realization
in the computational product basis, and an analytic ``is_separable``
predicate that agrees with the PPT test wherever PPT is conclusive.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .config import TOL
from .errors import BadParams
from .linalg import DensityMatrix

__all__ = [
    "BD22Params",
    "ICDParams",
    "BD23Params",
    "WernerParams",
    "IsotropicParams",
    "Locc1Params",
    "Locc3Params",
    "Horodecki33Params",
    "MultiIsoParams",
    "FamilyState",
    "EntanglementClass",
    "to_density",
    "is_separable",
    "icd_lambda",
    "bd23_canonicalize",
    "entanglement_class_33",
    "bell_vectors_22",
    "magic_basis_22",
    "icd_vectors",
    "bd23_vectors",
    "locc1_y",
    "locc3_y",
    "max_entangled_ket",
    "ghz_ket",
    "swap_operator",
    "FAMILY_TAGS",
]


# ---------------------------------------------------------------------------
# fixed bases and kets


def bell_vectors_22() -> np.ndarray:
    """Columns: (|00>+|11>, |00>-|11>, |01>+|10>, |01>-|10>)/sqrt(2)."""
    s = 1.0 / np.sqrt(2.0)
    return np.array(
        [[s, s, 0, 0], [0, 0, s, s], [0, 0, s, -s], [s, -s, 0, 0]], dtype=complex
    )


def magic_basis_22() -> np.ndarray:
    """Bell basis with phases (i, 1, 1, i).

    In this basis the spin flip acts as plain complex conjugation, so a
    state written as Y diag(l) Y^dag with complex-orthogonal Y has
    Wootters values exactly l.  The LOCC families live here.
    """
    return bell_vectors_22() @ np.diag([1j, 1.0, 1.0, 1j])


def icd_vectors(theta: float) -> np.ndarray:
    """Columns: the four iso-concurrence vectors at mixing angle theta."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array(
        [[c, s, 0, 0], [0, 0, c, s], [0, 0, s, -c], [s, -c, 0, 0]], dtype=complex
    )


def bd23_vectors() -> np.ndarray:
    """Columns: the six 2x3 Bell-type vectors (levels 0-based)."""
    s = 1.0 / np.sqrt(2.0)
    v = np.zeros((6, 6))

    def ket(a: int, b: int) -> np.ndarray:
        e = np.zeros(6)
        e[3 * a + b] = 1.0
        return e

    v[:, 0] = s * (ket(0, 0) + ket(1, 1))
    v[:, 1] = s * (ket(0, 0) - ket(1, 1))
    v[:, 2] = s * (ket(0, 1) + ket(1, 2))
    v[:, 3] = s * (ket(0, 1) - ket(1, 2))
    v[:, 4] = s * (ket(0, 2) + ket(1, 0))
    v[:, 5] = s * (ket(0, 2) - ket(1, 0))
    return v.astype(complex)


def max_entangled_ket(d: int) -> np.ndarray:
    """(1/sqrt(d)) sum_i |ii> for a d x d system."""
    psi = np.zeros(d * d)
    psi[:: d + 1] = 1.0
    return psi / np.sqrt(d)


def ghz_ket(d: int, n: int) -> np.ndarray:
    """(1/sqrt(d)) sum_i |ii...i> on n d-level parties."""
    psi = np.zeros(d**n)
    stride = sum(d**k for k in range(n))
    psi[::stride] = 1.0
    return psi / np.sqrt(d)


def swap_operator(d: int) -> np.ndarray:
    """F = sum_ij |ij><ji| on a d x d system."""
    f = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            f[i * d + j, j * d + i] = 1.0
    return f


def locc1_y(theta: float) -> np.ndarray:
    """One-parameter complex-orthogonal Y acting on magic components (1, 2)."""
    y = np.eye(4, dtype=complex)
    c, s = np.cosh(theta), np.sinh(theta)
    y[0, 0] = c
    y[0, 1] = 1j * s
    y[1, 0] = -1j * s
    y[1, 1] = c
    return y


def _hyp_block(a: float, i: int, j: int, n: int = 4) -> np.ndarray:
    m = np.eye(n, dtype=complex)
    m[i, i] = np.cosh(a)
    m[j, j] = np.cosh(a)
    m[i, j] = 1j * np.sinh(a)
    m[j, i] = -1j * np.sinh(a)
    return m


def locc3_y(theta: float, xi: float, phi: float) -> np.ndarray:
    """Three-parameter complex-orthogonal Y = T(theta) X(xi) P(phi).

    T and P act on magic components (1, 2), X on (1, 3); component 4 is
    untouched.  Matches the printed one-parameter matrix at xi = phi = 0.
    """
    return _hyp_block(theta, 0, 1) @ _hyp_block(xi, 0, 2) @ _hyp_block(phi, 0, 1)


# ---------------------------------------------------------------------------
# parameter records


def _check_probs(p: np.ndarray, n: int) -> np.ndarray:
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.shape != (n,):
        raise BadParams(f"expected {n} probabilities, got {p.shape}")
    if p.min() < -TOL.zero or p.max() > 1 + TOL.zero:
        raise BadParams(f"probabilities outside [0, 1]: {p}")
    if abs(p.sum() - 1.0) > 1e-12:
        raise BadParams(f"probabilities sum to {p.sum()}, not 1")
    return np.clip(p, 0.0, 1.0)


@dataclass(frozen=True)
class BD22Params:
    """Mixture weights over the four 2x2 Bell projectors."""

    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", _check_probs(self.p, 4))


@dataclass(frozen=True)
class ICDParams:
    """Iso-concurrence family: weights plus mixing angle in (0, pi/4]."""

    p: np.ndarray
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "p", _check_probs(self.p, 4))
        if not 0.0 < self.theta <= np.pi / 4 + TOL.zero:
            raise BadParams(f"theta must lie in (0, pi/4], got {self.theta}")


@dataclass(frozen=True)
class BD23Params:
    """Mixture weights over the six 2x3 Bell-type projectors."""

    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", _check_probs(self.p, 6))

    @property
    def is_canonical(self) -> bool:
        p = self.p
        return bool(p[0] >= p[1] and p[2] >= p[3] and p[4] >= p[5])


@dataclass(frozen=True)
class WernerParams:
    d: int
    f: float

    def __post_init__(self):
        if self.d < 2:
            raise BadParams("Werner dimension must be >= 2")
        if not -1.0 - TOL.zero <= self.f <= 1.0 + TOL.zero:
            raise BadParams(f"f must lie in [-1, 1], got {self.f}")


@dataclass(frozen=True)
class IsotropicParams:
    d: int
    big_f: float

    def __post_init__(self):
        if self.d < 2:
            raise BadParams("isotropic dimension must be >= 2")
        if not -TOL.zero <= self.big_f <= 1.0 + TOL.zero:
            raise BadParams(f"F must lie in [0, 1], got {self.big_f}")


def _locc_lambdas(lambdas) -> np.ndarray:
    lam = np.asarray(lambdas, dtype=float).reshape(-1)
    if lam.shape != (4,):
        raise BadParams(f"expected 4 diagonal weights, got {lam.shape}")
    if lam.min() < -TOL.zero:
        raise BadParams(f"diagonal weights must be non-negative: {lam}")
    if np.any(np.diff(lam) > TOL.zero):
        raise BadParams(f"diagonal weights must be descending: {lam}")
    return np.clip(lam, 0.0, None)


@dataclass(frozen=True)
class Locc1Params:
    """Bell-diagonal weights pushed through a one-parameter LOCC map.

    ``lambdas`` may be given unnormalized; the constructor rescales so
    that (l1 + l2) cosh(2 theta) + l3 + l4 = 1.
    """

    lambdas: np.ndarray
    theta: float

    def __post_init__(self):
        lam = _locc_lambdas(self.lambdas)
        norm = (lam[0] + lam[1]) * np.cosh(2 * self.theta) + lam[2] + lam[3]
        if norm <= TOL.zero:
            raise BadParams("cannot normalize all-zero weights")
        object.__setattr__(self, "lambdas", lam / norm)


@dataclass(frozen=True)
class Locc3Params:
    """Bell-diagonal weights pushed through a three-parameter LOCC map."""

    lambdas: np.ndarray
    theta: float
    xi: float
    phi: float

    def __post_init__(self):
        lam = _locc_lambdas(self.lambdas)
        y = locc3_y(self.theta, self.xi, self.phi)
        norm = float(np.real(np.sum(lam * np.diag(y.conj().T @ y))))
        if norm <= TOL.zero:
            raise BadParams("cannot normalize all-zero weights")
        object.__setattr__(self, "lambdas", lam / norm)


@dataclass(frozen=True)
class Horodecki33Params:
    alpha: float

    def __post_init__(self):
        if not 2.0 - TOL.zero <= self.alpha <= 5.0 + TOL.zero:
            raise BadParams(f"alpha must lie in [2, 5], got {self.alpha}")


@dataclass(frozen=True)
class MultiIsoParams:
    d: int
    n: int
    s: float

    def __post_init__(self):
        if self.d < 2 or self.n < 2:
            raise BadParams("need d >= 2 and n >= 2")
        if not -TOL.zero <= self.s <= 1.0 + TOL.zero:
            raise BadParams(f"s must lie in [0, 1], got {self.s}")

    @property
    def s0(self) -> float:
        return 1.0 / (1.0 + self.d ** (self.n - 1))


FamilyState = (
    BD22Params
    | ICDParams
    | BD23Params
    | WernerParams
    | IsotropicParams
    | Locc1Params
    | Locc3Params
    | Horodecki33Params
    | MultiIsoParams
)

FAMILY_TAGS = {
    BD22Params: "bd22",
    ICDParams: "icd",
    BD23Params: "bd23",
    WernerParams: "werner",
    IsotropicParams: "isotropic",
    Locc1Params: "locc1",
    Locc3Params: "locc3",
    Horodecki33Params: "horodecki33",
    MultiIsoParams: "multi_iso",
}


# ---------------------------------------------------------------------------
# realization as density matrices


def _mix(vectors: np.ndarray, weights: np.ndarray) -> np.ndarray:
    return (vectors * weights) @ vectors.conj().T


def _horodecki_pieces() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    psi = max_entangled_ket(3)
    proj = np.outer(psi, psi)

    def cyc(pairs):
        m = np.zeros((9, 9))
        for i, j in pairs:
            m[3 * i + j, 3 * i + j] = 1.0 / 3.0
        return m

    sigma_plus = cyc([(0, 1), (1, 2), (2, 0)])
    sigma_minus = cyc([(1, 0), (2, 1), (0, 2)])
    return proj.astype(complex), sigma_plus.astype(complex), sigma_minus.astype(complex)


def to_density(params: FamilyState) -> DensityMatrix:
    """Realize a family state in the computational product basis."""
    if isinstance(params, BD22Params):
        return DensityMatrix([2, 2], _mix(bell_vectors_22(), params.p))
    if isinstance(params, ICDParams):
        return DensityMatrix([2, 2], _mix(icd_vectors(params.theta), params.p))
    if isinstance(params, BD23Params):
        return DensityMatrix([2, 3], _mix(bd23_vectors(), params.p))
    if isinstance(params, WernerParams):
        d, f = params.d, params.f
        mat = ((d - f) * np.eye(d * d) + (d * f - 1.0) * swap_operator(d)) / (d**3 - d)
        return DensityMatrix([d, d], mat)
    if isinstance(params, IsotropicParams):
        d, big_f = params.d, params.big_f
        psi = max_entangled_ket(d)
        proj = np.outer(psi, psi)
        mat = (1.0 - big_f) / (d * d - 1.0) * (np.eye(d * d) - proj) + big_f * proj
        return DensityMatrix([d, d], mat)
    if isinstance(params, Locc1Params):
        q = magic_basis_22()
        y = locc1_y(params.theta)
        mat = q @ _mix(y, params.lambdas) @ q.conj().T
        return DensityMatrix([2, 2], mat)
    if isinstance(params, Locc3Params):
        q = magic_basis_22()
        y = locc3_y(params.theta, params.xi, params.phi)
        mat = q @ _mix(y, params.lambdas) @ q.conj().T
        return DensityMatrix([2, 2], mat)
    if isinstance(params, Horodecki33Params):
        proj, sp, sm = _horodecki_pieces()
        a = params.alpha
        mat = (2.0 / 7.0) * proj + (a / 7.0) * sp + ((5.0 - a) / 7.0) * sm
        return DensityMatrix([3, 3], mat)
    if isinstance(params, MultiIsoParams):
        d, n, s = params.d, params.n, params.s
        psi = ghz_ket(d, n)
        mat = (1.0 - s) * np.eye(d**n) / d**n + s * np.outer(psi, psi)
        return DensityMatrix([d] * n, mat)
    raise BadParams(f"unknown family record {type(params).__name__}")


# ---------------------------------------------------------------------------
# separability predicates


def _icd_ppt_margins(p: np.ndarray, theta: float) -> np.ndarray:
    """Margins of the four PPT inequalities; all >= 0 means separable.

    The inequalities carry sin(2 theta) on the probability-difference
    side; at theta = pi/4 they reduce to the Bell-diagonal p_i <= 1/2.
    """
    s = np.sin(2 * theta)
    r34 = np.sqrt(4 * p[2] * p[3] + (p[2] - p[3]) ** 2 * s * s)
    r12 = np.sqrt(4 * p[0] * p[1] + (p[0] - p[1]) ** 2 * s * s)
    return np.array(
        [
            r34 - (p[0] - p[1]) * s,
            r34 - (p[1] - p[0]) * s,
            r12 - (p[2] - p[3]) * s,
            r12 - (p[3] - p[2]) * s,
        ]
    )


def _bd23_margins(p: np.ndarray) -> np.ndarray:
    """Margins of the three 2x3 separability inequalities (squared form)."""
    return np.array(
        [
            (p[2] + p[3]) * (p[4] + p[5]) - (p[0] - p[1]) ** 2,
            (p[4] + p[5]) * (p[0] + p[1]) - (p[2] - p[3]) ** 2,
            (p[0] + p[1]) * (p[2] + p[3]) - (p[4] - p[5]) ** 2,
        ]
    )


def is_separable(params: FamilyState, tol: float = 1e-12) -> bool:
    """Family-specific analytic separability predicate.

    For the 2x2 and 2x3 families this agrees with the PPT verdict on the
    realized matrix; boundary points count as separable.
    """
    if isinstance(params, BD22Params):
        return bool(params.p.max() <= 0.5 + tol)
    if isinstance(params, ICDParams):
        return bool(_icd_ppt_margins(params.p, params.theta).min() >= -tol)
    if isinstance(params, BD23Params):
        return bool(_bd23_margins(params.p).min() >= -tol)
    if isinstance(params, WernerParams):
        return bool(params.f >= -tol)
    if isinstance(params, IsotropicParams):
        return bool(params.big_f <= 1.0 / params.d + tol)
    if isinstance(params, (Locc1Params, Locc3Params)):
        lam = params.lambdas
        return bool(lam[0] - lam[1] - lam[2] - lam[3] <= tol)
    if isinstance(params, Horodecki33Params):
        return bool(params.alpha <= 3.0 + tol)
    if isinstance(params, MultiIsoParams):
        # The separability threshold s0 = 1/(1 + d^(n-1)); below it the
        # mixture stays separable (the printed "iff s = s0" reads as the
        # boundary of the separable ball around the maximally mixed state).
        return bool(params.s <= params.s0 + tol)
    raise BadParams(f"unknown family record {type(params).__name__}")


class EntanglementClass(enum.Enum):
    SEPARABLE = "separable"
    BOUND_ENTANGLED = "bound_entangled"
    FREE_ENTANGLED = "free_entangled"


def entanglement_class_33(alpha: float) -> EntanglementClass:
    """Classify the one-parameter 3x3 family; boundaries go to the lower class."""
    if not 2.0 - TOL.zero <= alpha <= 5.0 + TOL.zero:
        raise BadParams(f"alpha must lie in [2, 5], got {alpha}")
    if alpha <= 3.0:
        return EntanglementClass.SEPARABLE
    if alpha <= 4.0:
        return EntanglementClass.BOUND_ENTANGLED
    return EntanglementClass.FREE_ENTANGLED


def icd_lambda(params: ICDParams) -> np.ndarray:
    """Closed-form Wootters values of an ICD state, descending."""
    p, s = params.p, np.sin(2 * params.theta)
    root12 = np.sqrt(4 * p[0] * p[1] + (p[0] - p[1]) ** 2 * s * s)
    root34 = np.sqrt(4 * p[2] * p[3] + (p[2] - p[3]) ** 2 * s * s)
    lam = np.array(
        [
            0.5 * ((p[0] - p[1]) * s + root12),
            0.5 * (-(p[0] - p[1]) * s + root12),
            0.5 * ((p[2] - p[3]) * s + root34),
            0.5 * (-(p[2] - p[3]) * s + root34),
        ]
    )
    return np.sort(lam)[::-1]


def bd23_canonicalize(params: BD23Params) -> tuple[BD23Params, tuple[int, ...]]:
    """Sort each 2x3 Bell pair so p1 >= p2, p3 >= p4, p5 >= p6.

    Returns the sorted record plus the indices of the pairs that were
    swapped (each swap is a local unitary).  Ties are not swapped.
    """
    p = params.p.copy()
    swapped = []
    for k in range(3):
        if p[2 * k] < p[2 * k + 1]:
            p[2 * k], p[2 * k + 1] = p[2 * k + 1], p[2 * k]
            swapped.append(k)
    return BD23Params(p), tuple(swapped)
