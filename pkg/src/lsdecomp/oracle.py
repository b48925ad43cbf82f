"""Independent numerical certification of separable weights.

``max_lambda_for`` finds the largest weight a given separable candidate
can carry by PSD bisection; ``certify`` maximizes that weight over a
deterministic grid on a family's separable boundary (with optional
recentering refinement); ``validate`` re-checks a closed-form
decomposition from scratch.  Nothing here consults the closed-form
lambda formulas, so agreement is evidence of optimality.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .config import TOL
from .decompose import LSDecomposition
from .errors import BadParams, DimMismatch, EmptyGrid
from .families import (
    BD22Params,
    BD23Params,
    FamilyState,
    Horodecki33Params,
    ICDParams,
    IsotropicParams,
    Locc1Params,
    MultiIsoParams,
    WernerParams,
    bd23_canonicalize,
    locc1_y,
    magic_basis_22,
    to_density,
)
from .linalg import DensityMatrix, partial_transpose
from .measures import wootters_basis

__all__ = [
    "OracleReport",
    "BoundarySampler",
    "max_lambda_for",
    "certify",
    "validate",
    "default_sampler",
]


@dataclass(frozen=True)
class OracleReport:
    lambda_star: float
    best_rho_s: DensityMatrix
    reconstruction_residual: float
    psd_margin_e: float   # min eigenvalue of the implied entangled part
    ppt_margin_s: float   # min partial-transpose eigenvalue of rho_s
    samples: int
    runtime: float
    segment_npt: bool | None = None  # None when PPT is not conclusive


def max_lambda_for(rho: DensityMatrix, rho_s: DensityMatrix) -> float:
    """Largest lambda in [0, 1] with rho - lambda * rho_s >= -psd_tol.

    Plain bisection to absolute tolerance 1e-10; the min eigenvalue of
    rho - lambda * rho_s is concave in lambda, so feasibility is an
    interval and bisection is exact.  Rank-deficient candidates need no
    special casing.
    """
    if rho.dims != rho_s.dims:
        raise DimMismatch(f"dims {rho.dims} vs {rho_s.dims}")
    a, b = rho.mat, rho_s.mat

    def feasible(lam: float) -> bool:
        return np.linalg.eigvalsh(a - lam * b).min() >= -TOL.psd

    if feasible(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > TOL.bisection:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _bisect_batch(
    spectra_min: Callable[[np.ndarray], np.ndarray], count: int
) -> np.ndarray:
    """Vectorized bisection: per-candidate max feasible lambda.

    ``spectra_min`` maps a lambda vector (one entry per candidate) to the
    min eigenvalue of rho - lambda_i * candidate_i.
    """
    lo = np.zeros(count)
    hi = np.ones(count)
    at_one = spectra_min(np.ones(count)) >= -TOL.psd
    lo[at_one] = 1.0
    while np.max(hi - lo) > TOL.bisection:
        mid = 0.5 * (lo + hi)
        ok = spectra_min(mid) >= -TOL.psd
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    return lo


@dataclass(frozen=True)
class BoundarySampler:
    """Deterministic grid over a family's separable boundary.

    ``grids`` maps each free coordinate to (lower, upper, points).  The
    anchor carries whatever the family needs to materialize candidates
    (the state's own parameters, or the state itself for the generic
    Wootters face).  Every emitted candidate is separable for its family.
    """

    family: str
    grids: tuple[tuple[str, float, float, int], ...]
    anchor: Any = field(repr=False, default=None)

    def axes(self) -> list[np.ndarray]:
        out = []
        for _, lo, hi, n in self.grids:
            if n < 1 or hi < lo:
                raise BadParams(f"bad grid {self.grids}")
            out.append(np.linspace(lo, hi, n))
        return out

    def with_grids(self, grids) -> "BoundarySampler":
        return BoundarySampler(self.family, tuple(grids), self.anchor)


def _mesh(axes: list[np.ndarray]) -> np.ndarray:
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.reshape(-1) for g in grids], axis=1)


# --- candidate construction per family ------------------------------------
# Co-diagonal families expose candidates as weight vectors in a projector
# (or spectral-block) basis shared with rho, so the bisection needs no
# eigensolves.  The LOCC/Wootters faces are dense 4x4 stacks.


def _codiag_candidates(sampler: BoundarySampler, coords):
    """Returns (block_weights, keep_mask) for co-diagonal families."""
    fam, anchor = sampler.family, sampler.anchor

    if fam == "bd22":
        q = coords  # two free weights on the p'_1 = 1/2 face
        p4 = 0.5 - q[:, 0] - q[:, 1]
        keep = p4 >= -1e-14
        w = np.stack([np.full(len(q), 0.5), q[:, 0], q[:, 1], np.clip(p4, 0, None)], axis=1)
        return w, keep

    if fam == "icd":
        canon, _perm = anchor
        s = np.sin(2.0 * canon.theta)
        q2, q3, q4 = coords[:, 0], coords[:, 1], coords[:, 2]
        root34 = np.sqrt(4 * q3 * q4 + (q3 - q4) ** 2 * s * s)
        q1 = q2 + root34 / s
        w = np.stack([q1, q2, q3, q4], axis=1)
        tot = w.sum(axis=1)
        keep = tot > 1e-12
        w = w / np.where(keep, tot, 1.0)[:, None]
        root12 = np.sqrt(4 * w[:, 0] * w[:, 1] + (w[:, 0] - w[:, 1]) ** 2 * s * s)
        keep &= np.abs(w[:, 2] - w[:, 3]) * s <= root12 + 1e-12
        return w, keep

    if fam == "bd23":
        q = coords  # q2..q6 free, q1 from the boundary equality
        q1 = q[:, 0] + np.sqrt((q[:, 1] + q[:, 2]) * (q[:, 3] + q[:, 4]))
        w = np.concatenate([q1[:, None], q], axis=1)
        tot = w.sum(axis=1)
        keep = tot > 1e-12
        w = w / np.where(keep, tot, 1.0)[:, None]
        keep &= (w[:, 2] - w[:, 3]) ** 2 <= (w[:, 4] + w[:, 5]) * (w[:, 0] + w[:, 1]) + 1e-12
        keep &= (w[:, 4] - w[:, 5]) ** 2 <= (w[:, 0] + w[:, 1]) * (w[:, 2] + w[:, 3]) + 1e-12
        return w, keep

    if fam == "werner":
        d = anchor.d
        f = coords[:, 0]
        w = np.stack([(1 + f) / (d * (d + 1)), (1 - f) / (d * (d - 1))], axis=1)
        return w, np.ones(len(f), bool)

    if fam == "isotropic":
        d = anchor.d
        fid = coords[:, 0]
        w = np.stack([fid, (1 - fid) / (d * d - 1)], axis=1)
        return w, np.ones(len(fid), bool)

    if fam == "horodecki33":
        a = coords[:, 0]
        w = np.stack([np.full(len(a), 2.0 / 7.0), a / 21.0, (5.0 - a) / 21.0], axis=1)
        return w, np.ones(len(a), bool)

    if fam == "multi_iso":
        d, n = anchor.d, anchor.n
        s = coords[:, 0]
        w = np.stack([s + (1 - s) / d**n, (1 - s) / d**n], axis=1)
        return w, np.ones(len(s), bool)

    raise BadParams(f"no co-diagonal sampler for family {fam!r}")


def _codiag_blocks_of_state(sampler: BoundarySampler) -> np.ndarray:
    fam, anchor = sampler.family, sampler.anchor
    if fam == "bd22":
        params, order = anchor
        return params.p[order]
    if fam == "icd":
        canon, _perm = anchor
        return canon.p
    if fam == "bd23":
        canon, _rot, _swapped = anchor
        return canon.p
    if fam == "werner":
        d, f = anchor.d, anchor.f
        return np.array([(1 + f) / (d * (d + 1)), (1 - f) / (d * (d - 1))])
    if fam == "isotropic":
        d = anchor.d
        return np.array([anchor.big_f, (1 - anchor.big_f) / (d * d - 1)])
    if fam == "horodecki33":
        a = anchor.alpha
        return np.array([2.0 / 7.0, a / 21.0, (5.0 - a) / 21.0])
    if fam == "multi_iso":
        d, n, s = anchor.d, anchor.n, anchor.s
        return np.array([s + (1 - s) / d**n, (1 - s) / d**n])
    raise BadParams(f"no co-diagonal sampler for family {fam!r}")


def _codiag_materialize(sampler: BoundarySampler, w: np.ndarray) -> DensityMatrix:
    fam, anchor = sampler.family, sampler.anchor
    if fam == "bd22":
        params, order = anchor
        p = np.empty(4)
        p[order] = w
        return to_density(BD22Params(p))
    if fam == "icd":
        canon, perm = anchor
        p = np.empty(4)
        p[perm] = w / w.sum()
        return to_density(ICDParams(p, canon.theta))
    if fam == "bd23":
        canon, rot, swapped = anchor
        p = np.empty(6)
        p[rot] = w / w.sum()
        for k in swapped:
            p[2 * k], p[2 * k + 1] = p[2 * k + 1], p[2 * k]
        return to_density(BD23Params(p))
    if fam == "werner":
        d = anchor.d
        f = w[0] * d * (d + 1) - 1.0
        return to_density(WernerParams(d, float(f)))
    if fam == "isotropic":
        return to_density(IsotropicParams(anchor.d, float(w[0])))
    if fam == "horodecki33":
        return to_density(Horodecki33Params(float(w[1] * 21.0)))
    if fam == "multi_iso":
        d, n = anchor.d, anchor.n
        s = 1.0 - w[1] * d**n
        return to_density(MultiIsoParams(d, n, float(s)))
    raise BadParams(f"no co-diagonal sampler for family {fam!r}")


def _dense_candidates(sampler: BoundarySampler, coords: np.ndarray):
    """Candidate stack (N, 4, 4) for the locc1 and wootters faces."""
    fam, anchor = sampler.family, sampler.anchor
    if fam == "locc1":
        q = magic_basis_22()
        theta_p = coords[:, 0]
        u = coords[:, 1:]
        u1 = u.sum(axis=1)
        weights = np.concatenate([u1[:, None], u], axis=1)
        keep = u1 > 1e-12
        stack = np.empty((len(coords), 4, 4), dtype=complex)
        for i in range(len(coords)):
            if not keep[i]:
                stack[i] = np.eye(4) / 4.0
                continue
            y = locc1_y(theta_p[i])
            norm = (weights[i, 0] + weights[i, 1]) * np.cosh(2 * theta_p[i]) + weights[
                i, 2
            ] + weights[i, 3]
            mats = (y * (weights[i] / norm)) @ y.conj().T
            stack[i] = q @ mats @ q.conj().T
        return stack, keep

    if fam == "wootters":
        basis = anchor  # columns |x'_i> of the state's Wootters basis
        u = coords
        u1 = u.sum(axis=1)
        weights = np.concatenate([u1[:, None], u], axis=1)
        norms = np.real(np.einsum("ij,ij->j", basis.conj(), basis))
        traces = weights @ norms
        keep = traces > 1e-12
        stack = np.empty((len(coords), 4, 4), dtype=complex)
        for i in range(len(coords)):
            if not keep[i]:
                stack[i] = np.eye(4) / 4.0
                continue
            wv = weights[i] / traces[i]
            stack[i] = (basis * wv) @ basis.conj().T
        return stack, keep

    raise BadParams(f"no dense sampler for family {fam!r}")


def default_sampler(
    target: FamilyState | DensityMatrix, points: int | None = None
) -> BoundarySampler:
    """The documented boundary grid for a family state.

    Passing a bare two-qubit DensityMatrix selects the generic Wootters
    face of that state.  Grid ranges cover the family's full boundary
    face; certify() then refines around the running argmax.
    """
    if isinstance(target, DensityMatrix):
        if tuple(target.dims) != (2, 2):
            raise BadParams("generic sampling is available for two-qubit states only")
        n = points or 9
        basis = wootters_basis(target).basis
        grids = tuple((f"u{k}", 0.0, 1.0, n) for k in (2, 3, 4))
        return BoundarySampler("wootters", grids, basis)
    if isinstance(target, BD22Params):
        n = points or 25
        order = np.argsort(-target.p, kind="stable")
        return BoundarySampler(
            "bd22", (("p2", 0.0, 0.5, n), ("p3", 0.0, 0.5, n)), (target, order)
        )
    if isinstance(target, ICDParams):
        n = points or 11
        grids = (("q2", 0.0, 1.0, n), ("q3", 0.0, 1.0, n), ("q4", 0.0, 1.0, n))
        return BoundarySampler("icd", grids, _icd_canonical(target))
    if isinstance(target, BD23Params):
        n = points or 7
        canon, swapped = bd23_canonicalize(target)
        from .decompose import _BD23_ROTATIONS, _bd23_margins

        margins = _bd23_margins(canon.p)
        rot = _BD23_ROTATIONS[int(np.argmin(margins))]
        anchored = BD23Params(canon.p[rot])
        grids = tuple((f"q{k}", 0.0, 1.0, n) for k in range(2, 7))
        return BoundarySampler("bd23", grids, (anchored, rot, swapped))
    if isinstance(target, WernerParams):
        n = points or 201
        return BoundarySampler("werner", (("f", 0.0, 1.0, n),), target)
    if isinstance(target, IsotropicParams):
        n = points or 201
        return BoundarySampler("isotropic", (("F", 0.0, 1.0 / target.d, n),), target)
    if isinstance(target, Horodecki33Params):
        n = points or 201
        return BoundarySampler("horodecki33", (("alpha", 2.0, 3.0, n),), target)
    if isinstance(target, MultiIsoParams):
        n = points or 201
        return BoundarySampler("multi_iso", (("s", 0.0, target.s0, n),), target)
    if isinstance(target, Locc1Params):
        n = points or 7
        span = abs(target.theta) + 0.75
        grids = (
            ("theta", -span, span, n),
            ("u2", 0.0, 1.0, n),
            ("u3", 0.0, 1.0, n),
            ("u4", 0.0, 1.0, n),
        )
        return BoundarySampler("locc1", grids, target)
    raise BadParams(f"no default sampler for {type(target).__name__}")


def _icd_canonical(params: ICDParams) -> tuple[ICDParams, np.ndarray]:
    from .decompose import _ICD_PERMS, _icd_margins

    margins = _icd_margins(params.p, np.sin(2 * params.theta))
    perm = _ICD_PERMS[int(np.argmin(margins))]
    return ICDParams(params.p[perm], params.theta), perm


_CODIAG_FAMILIES = {"bd22", "icd", "bd23", "werner", "isotropic", "horodecki33", "multi_iso"}


def certify(
    rho: DensityMatrix, sampler: BoundarySampler, refine: int = 5
) -> OracleReport:
    """Maximize the separable weight over the sampler's boundary grid.

    Runs the grid, then ``refine`` recentering rounds that shrink each
    axis to one grid spacing around the running argmax (never leaving the
    original bounds).  Ties go to the lowest flat grid index, so the
    result is deterministic.  Raises EmptyGrid if no candidate survives
    the family's admissibility filters.
    """
    start = time.perf_counter()
    fam = sampler.family
    if fam in _CODIAG_FAMILIES:
        rho_blocks = _codiag_blocks_of_state(sampler)
    elif fam in ("locc1", "wootters"):
        rho_blocks = None
    else:
        raise BadParams(f"certify has no sampler for family {fam!r}")

    best_lambda = -1.0
    best_payload = None
    best_coords = None
    total = 0
    current = sampler
    original = {name: (lo, hi) for name, lo, hi, _ in sampler.grids}

    for _ in range(max(1, refine + 1)):
        axes = current.axes()
        coords = _mesh(axes)
        if fam in _CODIAG_FAMILIES:
            w, keep = _codiag_candidates(current, coords)
            if not keep.any():
                raise EmptyGrid(f"no admissible candidates for {fam} grid")
            wk = w[keep]
            rb = np.asarray(rho_blocks, dtype=float)

            def spectra_min(lams: np.ndarray) -> np.ndarray:
                return (rb[None, :] - lams[:, None] * wk).min(axis=1)

            lams = _bisect_batch(spectra_min, len(wk))
            payloads = wk
        else:
            stack, keep = _dense_candidates(current, coords)
            if not keep.any():
                raise EmptyGrid(f"no admissible candidates for {fam} grid")
            stack_k = stack[keep]
            target = rho.mat[None, :, :]

            def spectra_min(lams: np.ndarray) -> np.ndarray:
                return np.linalg.eigvalsh(
                    target - lams[:, None, None] * stack_k
                ).min(axis=1)

            lams = _bisect_batch(spectra_min, len(stack_k))
            payloads = stack_k
        total += len(lams)
        idx = int(np.argmax(lams))
        if lams[idx] > best_lambda + 1e-15:
            best_lambda = float(lams[idx])
            best_payload = payloads[idx]
            best_coords = coords[keep][idx]
        # shrink every axis to +/- one spacing around the argmax
        new_grids = []
        for (name, lo, hi, n), center, ax in zip(current.grids, best_coords, axes):
            spacing = (hi - lo) / max(n - 1, 1)
            o_lo, o_hi = original[name]
            new_lo = max(o_lo, center - spacing)
            new_hi = min(o_hi, center + spacing)
            new_grids.append((name, new_lo, new_hi, n))
        current = current.with_grids(new_grids)

    if fam in _CODIAG_FAMILIES:
        best_rho_s = _codiag_materialize(sampler, np.asarray(best_payload))
    else:
        best_rho_s = DensityMatrix(rho.dims, best_payload)
    report = _report_for(rho, best_lambda, best_rho_s, total, start)
    return report


def _min_pt_eig(rho: DensityMatrix) -> float:
    worst = np.inf
    for k in range(len(rho.dims)):
        worst = min(worst, float(np.linalg.eigvalsh(partial_transpose(rho, k)).min()))
    return worst


def _report_for(
    rho: DensityMatrix,
    lam: float,
    rho_s: DensityMatrix,
    samples: int,
    start: float,
    segment: bool | None = None,
) -> OracleReport:
    if lam < 1.0:
        e_mat = (rho.mat - lam * rho_s.mat) / (1.0 - lam)
        psd_margin = float(np.linalg.eigvalsh(e_mat).min())
        recon = 0.0
    else:
        psd_margin = 0.0
        recon = float(np.abs(rho.mat - rho_s.mat).max())
    return OracleReport(
        lambda_star=lam,
        best_rho_s=rho_s,
        reconstruction_residual=recon,
        psd_margin_e=psd_margin,
        ppt_margin_s=_min_pt_eig(rho_s),
        samples=samples,
        runtime=time.perf_counter() - start,
        segment_npt=segment,
    )


def validate(rho: DensityMatrix, dec: LSDecomposition) -> OracleReport:
    """Re-check a decomposition: reconstruction, positivity, PPT, segment.

    For 2x2 and 2x3 systems the line segment eps * rho_s + (1 - eps) * rho
    is verified to stay entangled (NPT) at eps = 0.1 ... 0.9; elsewhere
    PPT is inconclusive and the check is skipped (segment_npt = None).
    """
    if rho.dims != dec.rho_s.dims:
        raise DimMismatch(f"dims {rho.dims} vs {dec.rho_s.dims}")
    start = time.perf_counter()
    mix = dec.lambda_ * dec.rho_s.mat + (1.0 - dec.lambda_) * dec.rho_e.mat
    recon = float(np.abs(mix - rho.mat).max())
    psd_margin_e = float(np.linalg.eigvalsh(dec.rho_e.mat).min())
    ppt_margin_s = _min_pt_eig(dec.rho_s)
    segment: bool | None = None
    if tuple(rho.dims) in ((2, 2), (2, 3)):
        segment = True
        for eps in np.linspace(0.1, 0.9, 9):
            mat = eps * dec.rho_s.mat + (1.0 - eps) * rho.mat
            seg = DensityMatrix(rho.dims, mat)
            if _min_pt_eig(seg) > -TOL.zero:
                segment = False
                break
    return OracleReport(
        lambda_star=dec.lambda_,
        best_rho_s=dec.rho_s,
        reconstruction_residual=recon,
        psd_margin_e=psd_margin_e,
        ppt_margin_s=ppt_margin_s,
        samples=9 if segment is not None else 0,
        runtime=time.perf_counter() - start,
        segment_npt=segment,
    )
