"""Optimal Lewenstein-Sanpera decompositions in closed form.

Each ``decompose_*`` function returns a certified triple
rho = lambda * rho_s + (1 - lambda) * rho_e with rho_s on the separable
boundary and lambda maximal over the family's boundary set.  Inputs
whose violated inequality is not the canonical one are rotated there by
a recorded local-unitary relabeling and rotated back on output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .config import TOL
from .errors import (
    ConstraintViolated,
    InvalidDecomposition,
    MixedEntangledPart,
    NoApplicableCase,
    NoConvergence,
    NotEntangled,
    UnsupportedShape,
    WrongDims,
)
from .families import (
    BD22Params,
    BD23Params,
    FamilyState,
    Horodecki33Params,
    ICDParams,
    IsotropicParams,
    Locc1Params,
    Locc3Params,
    MultiIsoParams,
    WernerParams,
    bd23_canonicalize,
    bd23_vectors,
    icd_vectors,
    locc1_y,
    locc3_y,
    magic_basis_22,
    to_density,
)
from .linalg import DensityMatrix, PureState
from .measures import i_concurrence_pure, wootters_basis, wootters_concurrence

__all__ = [
    "LSDecomposition",
    "decompose",
    "decompose_bd22",
    "decompose_wootters",
    "decompose_icd",
    "decompose_locc1",
    "decompose_locc3",
    "decompose_bd23",
    "decompose_werner",
    "decompose_isotropic",
    "decompose_horodecki33",
    "decompose_multi_isotropic",
    "average_concurrence",
    "locc1_max_theta_pp",
]


@dataclass(frozen=True)
class LSDecomposition:
    """(lambda, rho_s, rho_e) with the branch that produced it."""

    lambda_: float
    rho_s: DensityMatrix
    rho_e: DensityMatrix
    family: str
    record: dict[str, Any] = field(default_factory=dict)

    def reconstruction_residual(self, rho: DensityMatrix) -> float:
        mix = self.lambda_ * self.rho_s.mat + (1.0 - self.lambda_) * self.rho_e.mat
        return float(np.abs(mix - rho.mat).max())


def _clamp_lambda(lam: float) -> float:
    if not -TOL.lambda_slack <= lam <= 1.0 + TOL.lambda_slack:
        raise InvalidDecomposition(f"separable weight {lam} falls outside [0, 1]")
    return float(min(max(lam, 0.0), 1.0))


# ---------------------------------------------------------------------------
# Bell-diagonal 2x2


def decompose_bd22(params: BD22Params) -> LSDecomposition:
    """lambda = 1 - C with a maximally entangled pure part.

    The dominant weight is rotated to slot 1 (any permutation of the four
    Bell projectors is a local unitary), split off as the pure part, and
    the boundary state keeps weight 1/2 there.
    """
    order = np.argsort(-params.p, kind="stable")
    p = params.p[order]
    if p[0] <= 0.5 + TOL.zero:
        raise NotEntangled(f"all Bell weights <= 1/2: {params.p}")
    c = 2.0 * p[0] - 1.0
    lam = _clamp_lambda(1.0 - c)
    p_s_c = np.array([0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0])
    if lam > TOL.zero:
        p_s_c = np.concatenate([[0.5], p[1:] / lam])
    p_s = np.empty(4)
    p_s[order] = p_s_c
    p_e = np.zeros(4)
    p_e[order[0]] = 1.0
    rho_s = to_density(BD22Params(p_s))
    rho_e = to_density(BD22Params(p_e))
    record = {
        "case": "bd22",
        "concurrence": c,
        "dominant": int(order[0]),
        "permutation": order.tolist(),
        "p_s": p_s.tolist(),
        "p_e": p_e.tolist(),
    }
    return LSDecomposition(lam, rho_s, rho_e, "bd22", record)


# ---------------------------------------------------------------------------
# generic two-qubit state via its Wootters basis


def decompose_wootters(rho: DensityMatrix) -> LSDecomposition:
    """Split a generic entangled two-qubit state along its Wootters basis.

    With rho = sum_i l_i |x'_i><x'_i| and C = l1 - l2 - l3 - l4 > 0, the
    pure part is |x'_1> renormalized and lambda = 1 - C <x'_1|x'_1>.
    """
    if tuple(rho.dims) != (2, 2):
        raise WrongDims(f"expected dims [2, 2], got {rho.dims}")
    wd = wootters_basis(rho)
    lam_w = wd.lambdas
    c = lam_w[0] - lam_w[1] - lam_w[2] - lam_w[3]
    if c <= TOL.zero:
        raise NotEntangled(f"Wootters values give concurrence {c:.3e}")
    x1 = wd.basis[:, 0]
    n1 = float(np.real(np.vdot(x1, x1)))
    lam = _clamp_lambda(1.0 - c * n1)
    if lam > TOL.zero:
        lam_s = np.concatenate([[lam_w[1:].sum()], lam_w[1:]]) / lam
        mat_s = (wd.basis * lam_s) @ wd.basis.conj().T
    else:
        lam_s = np.full(4, 0.25)
        mat_s = np.eye(4, dtype=complex) / 4.0
    rho_s = DensityMatrix([2, 2], mat_s)
    rho_e = DensityMatrix([2, 2], np.outer(x1, x1.conj()) / n1)
    record = {
        "case": "wootters",
        "concurrence": float(c),
        "wootters_values": lam_w.tolist(),
        "lambda_s": np.asarray(lam_s).tolist(),
        "pure_norm": n1,
        "entangled_concurrence": 1.0 / n1,
    }
    return LSDecomposition(lam, rho_s, rho_e, "wootters", record)


# ---------------------------------------------------------------------------
# iso-concurrence decomposable states

# Local-unitary relabelings that move each violated PPT inequality to the
# canonical first position: (1) swap within both pairs, (2) exchange the
# pairs, (3) both.  Each is its own inverse.
_ICD_PERMS = {
    0: np.array([0, 1, 2, 3]),
    1: np.array([1, 0, 3, 2]),
    2: np.array([2, 3, 0, 1]),
    3: np.array([3, 2, 1, 0]),
}


def _icd_margins(p: np.ndarray, s: float) -> np.ndarray:
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


def decompose_icd(params: ICDParams, theta_pp: float | None = None) -> LSDecomposition:
    """Optimal split of an iso-concurrence state.

    Case 1 (theta < pi/4): the boundary and pure parts keep the state's
    angle and lambda = 1 - C / sin(2 theta).  The concurrence-zero
    condition on rho_s forces this weight; the factor 1/sin(2 theta) is
    the concurrence of the pure part |phi_1(theta)>.

    Case 2 (theta = pi/4, Bell-diagonal input): a one-parameter family of
    boundary solutions indexed by the pure part's angle theta'' with
    sin(2 theta'') >= (p1 + p2) C / (p1 C + p2); the default theta'' =
    pi/4 reproduces the Bell-diagonal split.
    """
    theta = params.theta
    s = np.sin(2.0 * theta)
    margins = _icd_margins(params.p, s)
    if margins.min() >= -TOL.zero:
        raise NotEntangled(f"all PPT margins non-negative: {margins}")
    perm = _ICD_PERMS[int(np.argmin(margins))]
    p = params.p[perm]

    bell_input = abs(theta - np.pi / 4) <= 1e-12
    if not bell_input and theta_pp is not None and abs(theta_pp - theta) > 1e-12:
        raise UnsupportedShape("for theta < pi/4 the pure part's angle must equal theta")

    if bell_input:
        c = 2.0 * p[0] - 1.0
        theta_pp = np.pi / 4 if theta_pp is None else float(theta_pp)
        s_pp = np.sin(2.0 * theta_pp)
        if abs(theta_pp - np.pi / 4) <= 1e-12:
            lam = _clamp_lambda(1.0 - c)
            theta_p = np.pi / 4
            if lam > TOL.zero:
                p_s = np.concatenate([[(p[0] - (1.0 - lam)) / lam], p[1:] / lam])
            else:
                p_s = np.array([0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0])
            case = "case2-bell"
        else:
            if abs(p[2] - p[3]) > 1e-10:
                raise UnsupportedShape(
                    "case 2 with theta'' != pi/4 requires equal weights on the second pair"
                )
            floor = (p[0] + p[1]) * c / (p[0] * c + p[1])
            if s_pp < floor - 1e-12:
                raise UnsupportedShape(
                    f"sin(2 theta'')={s_pp:.6f} below admissible floor {floor:.6f}"
                )
            if p[2] <= TOL.zero:
                raise UnsupportedShape(
                    "rank-two Bell-diagonal input admits only theta'' = pi/4"
                )
            lam = _clamp_lambda(1.0 - c / s_pp)
            c_pp = np.cos(2.0 * theta_pp)
            two_theta_p = np.arctan2(2.0 * p[2], -c * c_pp / s_pp)
            theta_p = 0.5 * two_theta_p
            s_p = np.sin(two_theta_p)
            half = p[0] + p[1] - (1.0 - lam)
            p_s = np.array(
                [
                    (half + 2.0 * p[2] / s_p) / (2.0 * lam),
                    (half - 2.0 * p[2] / s_p) / (2.0 * lam),
                    p[2] / lam,
                    p[2] / lam,
                ]
            )
            case = "case2"
    else:
        root34 = np.sqrt(4 * p[2] * p[3] + (p[2] - p[3]) ** 2 * s * s)
        c = (p[0] - p[1]) * s - root34
        theta_pp = theta
        theta_p = theta
        lam = _clamp_lambda(1.0 - c / s)
        if lam > TOL.zero:
            p_s = np.concatenate([[(p[0] - (1.0 - lam)) / lam], p[1:] / lam])
        else:
            p_s = np.full(4, 0.25)
        case = "case1"

    if p_s.min() < -1e-9:
        raise UnsupportedShape(f"boundary weights left the simplex: {p_s}")
    p_s = np.clip(p_s, 0.0, None)
    p_s = p_s / p_s.sum()
    if _icd_margins(p_s, np.sin(2.0 * theta_p)).min() < -TOL.boundary:
        raise UnsupportedShape("constructed boundary state is not PPT")

    p_s_out = np.empty(4)
    p_s_out[perm] = p_s
    pure_index = int(perm[0])
    rho_s = DensityMatrix([2, 2], _projector_mix(icd_vectors(theta_p), p_s_out))
    vec = icd_vectors(theta_pp)[:, pure_index]
    rho_e = DensityMatrix([2, 2], np.outer(vec, vec.conj()))
    record = {
        "case": case,
        "concurrence": float(c),
        "violated_inequality": int(np.argmin(margins)),
        "permutation": perm.tolist(),
        "theta_s": float(theta_p),
        "theta_e": float(theta_pp),
        "p_s": p_s_out.tolist(),
        "pure_index": pure_index,
    }
    return LSDecomposition(lam, rho_s, rho_e, "icd", record)


def _projector_mix(vectors: np.ndarray, weights: np.ndarray) -> np.ndarray:
    return (vectors * weights) @ vectors.conj().T


# ---------------------------------------------------------------------------
# one-parameter LOCC family


def locc1_max_theta_pp(params: Locc1Params) -> float:
    """The admissible pure-part angle that maximizes the separable weight.

    lambda = 1 - C cosh(2 theta'') decreases with |theta''|, so the best
    angle is 0 when the boundary-positivity bound allows it, else the
    closest admissible angle to 0.
    """
    lam4, theta = params.lambdas, params.theta
    c = lam4[0] - lam4[1] - lam4[2] - lam4[3]
    if c <= TOL.zero:
        raise NotEntangled("family weights give zero concurrence")
    l12 = lam4[0] + lam4[1]
    bound = (lam4[0] - lam4[1]) / l12 + 2.0 * lam4[0] * lam4[1] / (l12 * c)
    if np.cosh(2.0 * theta) <= bound:
        return 0.0
    gap = 0.5 * np.arccosh(bound)
    return float(theta - np.sign(theta) * gap)


def decompose_locc1(params: Locc1Params, theta_pp: float) -> LSDecomposition:
    """Split a one-parameter LOCC state with a chosen pure-part angle.

    lambda = 1 - C cosh(2 theta''); the boundary state's angle follows
    from tanh(2 (theta' - theta'')) and its weights from the printed
    closed forms.  Validity requires cosh(2 theta'') <= 1/C and
    cosh(2 (theta - theta'')) within the positivity bound.
    """
    lam4, theta = params.lambdas, params.theta
    c = lam4[0] - lam4[1] - lam4[2] - lam4[3]
    if c <= TOL.zero:
        raise NotEntangled("family weights give zero concurrence")
    if np.cosh(2.0 * theta_pp) > 1.0 / c + 1e-12:
        raise ConstraintViolated(
            f"cosh(2 theta'') = {np.cosh(2 * theta_pp):.6f} exceeds 1/C = {1 / c:.6f}"
        )
    l12 = lam4[0] + lam4[1]
    bound = (lam4[0] - lam4[1]) / l12 + 2.0 * lam4[0] * lam4[1] / (l12 * c)
    delta = theta - theta_pp
    if np.cosh(2.0 * delta) > bound + 1e-12:
        raise ConstraintViolated(
            f"cosh(2 (theta - theta'')) = {np.cosh(2 * delta):.6f} exceeds bound {bound:.6f}"
        )
    lam = 1.0 - c * np.cosh(2.0 * theta_pp)
    if lam <= TOL.zero:
        raise ConstraintViolated("theta'' saturates the weight bound; no separable part left")
    lam = _clamp_lambda(lam)

    denom = l12 * np.cosh(2.0 * delta) - c
    if abs(denom) <= TOL.zero:
        raise ConstraintViolated("degenerate geometry: cannot place the boundary angle")
    delta_p = 0.5 * np.arctanh(l12 * np.sinh(2.0 * delta) / denom)
    theta_p = theta_pp + delta_p
    head = denom / np.cosh(2.0 * delta_p)
    l34 = lam4[2] + lam4[3]
    lam_s = np.array(
        [
            (head + l34) / (2.0 * lam),
            (head - l34) / (2.0 * lam),
            lam4[2] / lam,
            lam4[3] / lam,
        ]
    )
    if lam_s.min() < -1e-9:
        raise ConstraintViolated(f"boundary weights turned negative: {lam_s}")
    lam_s = np.clip(lam_s, 0.0, None)

    q = magic_basis_22()
    y_s = locc1_y(theta_p)
    y_e = locc1_y(theta_pp)
    lam_e1 = 1.0 / np.cosh(2.0 * theta_pp)
    rho_s = DensityMatrix([2, 2], q @ _projector_mix(y_s, lam_s) @ q.conj().T)
    rho_e = DensityMatrix(
        [2, 2], q @ _projector_mix(y_e, np.array([lam_e1, 0, 0, 0])) @ q.conj().T
    )
    record = {
        "case": "locc1",
        "concurrence": float(c),
        "theta_s": float(theta_p),
        "theta_e": float(theta_pp),
        "lambda_s": lam_s.tolist(),
        "lambda_e1": float(lam_e1),
    }
    return LSDecomposition(lam, rho_s, rho_e, "locc1", record)


# ---------------------------------------------------------------------------
# three-parameter LOCC family


def _hyp3(a: float, i: int, j: int) -> np.ndarray:
    m = np.eye(3, dtype=complex)
    m[i, i] = np.cosh(a)
    m[j, j] = np.cosh(a)
    m[i, j] = 1j * np.sinh(a)
    m[j, i] = -1j * np.sinh(a)
    return m


def _locc3_recover(block: np.ndarray, seed: tuple[float, float]) -> dict[str, Any]:
    """Recover (theta', xi', phi', l1..l3) from a magic-basis 3x3 block.

    Solves the two coupled tanh equations for (theta', xi') by damped
    Newton iteration with a finite-difference Jacobian, then reads the
    remaining parameters off in closed form.
    """

    def residual(v: np.ndarray) -> np.ndarray:
        t, x = v
        w = _hyp3(-t, 0, 1) @ block @ _hyp3(-t, 0, 1).conj().T
        r1 = np.tanh(x) * w[0, 1].imag - w[1, 2].real
        r2 = np.tanh(2.0 * x) * (w[0, 0].real + w[2, 2].real) - 2.0 * w[0, 2].imag
        return np.array([r1, r2])

    v = np.array(seed, dtype=float)
    r = residual(v)
    iters = 0
    for iters in range(1, 201):
        if np.abs(r).max() < TOL.newton_target:
            break
        jac = np.empty((2, 2))
        h = 1e-7
        for k in range(2):
            vp = v.copy()
            vp[k] += h
            jac[:, k] = (residual(vp) - r) / h
        try:
            step = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence(f"singular Jacobian in the angle solve: {exc}") from exc
        scale = 1.0
        v_new, r_new = v, r
        for _ in range(40):
            v_new = v + scale * step
            r_new = residual(v_new)
            if np.abs(r_new).max() < np.abs(r).max():
                break
            scale *= 0.5
        else:
            break  # no descent direction left; report the residual below
        v, r = v_new, r_new
    res = float(np.abs(r).max())
    if res > TOL.newton_fail:
        raise NoConvergence(f"angle solve stalled at residual {res:.3e}")
    theta_p, xi_p = float(v[0]), float(v[1])
    w = _hyp3(-theta_p, 0, 1) @ block @ _hyp3(-theta_p, 0, 1).conj().T
    inner = _hyp3(-xi_p, 0, 2) @ w @ _hyp3(-xi_p, 0, 2).conj().T
    l3 = inner[2, 2].real
    u, vdiag, woff = inner[0, 0].real, inner[1, 1].real, inner[0, 1].imag
    ratio = 2.0 * woff / (u + vdiag)
    if abs(ratio) >= 1.0:
        raise NoConvergence(f"phi' solve left the tanh range: {ratio}")
    phi_p = 0.5 * np.arctanh(ratio)
    sum12 = np.sqrt(max((u + vdiag) ** 2 - 4.0 * woff * woff, 0.0))
    l1 = 0.5 * ((u - vdiag) + sum12)
    l2 = 0.5 * (sum12 - (u - vdiag))
    return {
        "theta": theta_p,
        "xi": xi_p,
        "phi": phi_p,
        "lams": np.array([l1, l2, l3]),
        "iterations": iters,
        "residual": res,
    }


def decompose_locc3(
    params: Locc3Params, entangled_angles: tuple[float, float, float] | None = None
) -> LSDecomposition:
    """Split a three-parameter LOCC state.

    The pure part is the first column of Y(theta'', xi'', phi'') with
    weight fixed by normalization, lambda = 1 - C * (Y''^dag Y'')_11, and
    the separable part's parameters are recovered numerically from
    (rho - (1 - lambda) rho_e) / lambda.  A failed recovery raises
    NoConvergence; a recovered triple that does not reproduce rho within
    1e-8 raises InvalidDecomposition instead of returning silently.
    """
    lam4 = params.lambdas
    c = lam4[0] - lam4[1] - lam4[2] - lam4[3]
    if c <= TOL.zero:
        raise NotEntangled("family weights give zero concurrence")
    if entangled_angles is None:
        entangled_angles = (params.theta, params.xi, params.phi)
    th_pp, xi_pp, ph_pp = (float(a) for a in entangled_angles)

    q = magic_basis_22()
    y = locc3_y(params.theta, params.xi, params.phi)
    rho_m = _projector_mix(y, lam4)
    y_pp = locc3_y(th_pp, xi_pp, ph_pp)
    norm_pp = float(np.real((y_pp.conj().T @ y_pp)[0, 0]))
    lam = 1.0 - c * norm_pp
    if lam <= TOL.zero:
        raise InvalidDecomposition(
            f"entangled angles give weight {lam:.3e}; nothing separable remains"
        )
    lam = _clamp_lambda(lam)
    lam_e1 = 1.0 / norm_pp
    rho_e_m = _projector_mix(y_pp, np.array([lam_e1, 0, 0, 0]))
    rho_s_m = (rho_m - (1.0 - lam) * rho_e_m) / lam
    if np.linalg.eigvalsh(rho_s_m).min() < -TOL.psd:
        raise InvalidDecomposition("separable part is not positive for these angles")

    lam4_s = np.empty(4)
    lam4_s[3] = rho_s_m[3, 3].real
    block = rho_s_m[:3, :3]
    coupling = abs(rho_s_m[0, 2]) + abs(rho_s_m[1, 2])
    if coupling < 1e-11:
        # xi' = 0 collapses T and P onto one generator; solve it directly
        ratio = 2.0 * block[0, 1].imag / (block[0, 0].real + block[1, 1].real)
        theta_p = 0.5 * np.arctanh(ratio)
        xi_p = 0.0
        phi_p = 0.0
        m = _hyp3(-theta_p, 0, 1) @ block @ _hyp3(-theta_p, 0, 1).conj().T
        lam4_s[0], lam4_s[1], lam4_s[2] = m[0, 0].real, m[1, 1].real, m[2, 2].real
        rec_info = {"iterations": 0, "residual": 0.0}
    else:
        rec = _locc3_recover(block, (params.theta, params.xi))
        theta_p, xi_p, phi_p = rec["theta"], rec["xi"], rec["phi"]
        lam4_s[:3] = rec["lams"]
        rec_info = {"iterations": rec["iterations"], "residual": rec["residual"]}
    if lam4_s.min() < -1e-9:
        raise InvalidDecomposition(f"recovered boundary weights are negative: {lam4_s}")
    lam4_s = np.clip(lam4_s, 0.0, None)
    boundary_gap = lam4_s[0] - lam4_s[1] - lam4_s[2] - lam4_s[3]

    y_s = locc3_y(theta_p, xi_p, phi_p)
    rho_s_rebuilt = _projector_mix(y_s, lam4_s)
    rho = q @ rho_m @ q.conj().T
    rho_s = q @ rho_s_rebuilt @ q.conj().T
    rho_e = q @ rho_e_m @ q.conj().T
    residual = np.abs(lam * rho_s + (1.0 - lam) * rho_e - rho).max()
    if residual > TOL.boundary or abs(boundary_gap) > TOL.boundary:
        raise InvalidDecomposition(
            f"reconstruction residual {residual:.3e}, boundary gap {boundary_gap:.3e}"
        )
    record = {
        "case": "locc3",
        "concurrence": float(c),
        "angles_s": (float(theta_p), float(xi_p), float(phi_p)),
        "angles_e": (th_pp, xi_pp, ph_pp),
        "lambda_s": lam4_s.tolist(),
        "lambda_e1": float(lam_e1),
        "newton": rec_info,
        "rebuild_residual": float(residual),
    }
    return LSDecomposition(
        lam,
        DensityMatrix([2, 2], rho_s),
        DensityMatrix([2, 2], rho_e),
        "locc3",
        record,
    )


# ---------------------------------------------------------------------------
# 2x3 Bell-diagonal states

# Cyclic qutrit relabelings that move the violated inequality to the
# first pair: identity for S1, one or two applications of the shift
# |j> -> |j-1 mod 3| for S2 or S3.
_BD23_ROTATIONS = {
    0: np.array([0, 1, 2, 3, 4, 5]),
    1: np.array([2, 3, 4, 5, 0, 1]),
    2: np.array([4, 5, 0, 1, 2, 3]),
}


def _bd23_margins(p: np.ndarray) -> np.ndarray:
    return np.array(
        [
            (p[2] + p[3]) * (p[4] + p[5]) - (p[0] - p[1]) ** 2,
            (p[4] + p[5]) * (p[0] + p[1]) - (p[2] - p[3]) ** 2,
            (p[0] + p[1]) * (p[2] + p[3]) - (p[4] - p[5]) ** 2,
        ]
    )


def _bd23_case_i(p: np.ndarray) -> tuple[float, np.ndarray, np.ndarray] | None:
    root = np.sqrt((p[2] + p[3]) * (p[4] + p[5]))
    cap = 2.0 * p[1] + root
    if (p[2] - p[3]) ** 2 > (p[4] + p[5]) * cap + 1e-12:
        return None
    if (p[4] - p[5]) ** 2 > (p[2] + p[3]) * cap + 1e-12:
        return None
    lam = 1.0 - (p[0] - p[1]) + root
    p_s = np.concatenate([[(p[0] - (1.0 - lam)) / lam], p[1:] / lam]) if lam > TOL.zero else None
    if p_s is None:
        p_s = np.array([0.5, 0.5, 0, 0, 0, 0.0])
    p_e = np.zeros(6)
    p_e[0] = 1.0
    return lam, p_s, p_e


def _bd23_case_iii(p: np.ndarray) -> tuple[float, np.ndarray, np.ndarray] | None:
    tail = p[4] + p[5]
    slack = p[1] - 0.25 * tail
    if not (4.0 * p[3] <= tail + 1e-12 and tail <= 2.0 * p[1] + 1e-12):
        return None
    if 2.0 * (p[3] - tail / 8.0) ** 2 > tail * slack + 1e-12:
        return None
    if 2.0 * (p[4] - p[5]) ** 2 > tail * slack + 1e-12:
        return None
    if p[2] + p[3] < 0.25 * tail - 1e-12:
        return None  # entangled part would lose positivity
    lam = 1.0 - (p[0] - p[1]) - (p[2] + p[3]) - 0.25 * tail
    if lam <= TOL.zero:
        return None
    p_s = np.array(
        [
            (2.0 * p[1] - tail) / (2.0 * lam),
            p[1] / lam,
            (tail - 4.0 * p[3]) / (4.0 * lam),
            p[3] / lam,
            p[4] / lam,
            p[5] / lam,
        ]
    )
    p_e = np.zeros(6)
    p_e[0] = (p[0] - p[1] + tail / 2.0) / (1.0 - lam)
    p_e[2] = (p[2] + p[3] - tail / 4.0) / (1.0 - lam)
    return lam, p_s, p_e


_SWAP_PAIR_23 = np.array([0, 1, 4, 5, 2, 3])  # exchange pairs (3,4) <-> (5,6)


def _bd23_case_iv(p: np.ndarray) -> tuple[float, np.ndarray, np.ndarray] | None:
    out = _bd23_case_iii(p[_SWAP_PAIR_23])
    if out is None:
        return None
    lam, p_s, p_e = out
    return lam, p_s[_SWAP_PAIR_23], p_e[_SWAP_PAIR_23]


def _bd23_case_v(p: np.ndarray) -> tuple[float, np.ndarray, np.ndarray] | None:
    if p[3] > 1e-12 or p[5] > 1e-12:
        return None
    lam = 2.0 * p[1]
    if lam <= TOL.zero:
        return None
    p_s = np.array([0.5, 0.5, 0, 0, 0, 0.0])
    p_e = np.zeros(6)
    p_e[0] = (p[0] - p[1]) / (1.0 - lam)
    p_e[2] = p[2] / (1.0 - lam)
    p_e[4] = p[4] / (1.0 - lam)
    return lam, p_s, p_e


def decompose_bd23(params: BD23Params) -> LSDecomposition:
    """Optimal split of a 2x3 Bell-diagonal state.

    The input is pair-sorted and rotated so the violated separability
    inequality is the canonical first one, then the analytic cases are
    tried in the order i, iii, iv, v (the first one whose validity
    conditions hold wins; case ii collapses into case i).
    """
    canon, swapped = bd23_canonicalize(params)
    margins = _bd23_margins(canon.p)
    if margins.min() >= -TOL.zero:
        raise NotEntangled(f"all separability margins non-negative: {margins}")

    rotations = [k for k in np.argsort(margins) if margins[k] < -TOL.zero]
    for rot_idx in rotations:
        rot = _BD23_ROTATIONS[int(rot_idx)]
        p = canon.p[rot]
        for case_name, case_fn in (
            ("i", _bd23_case_i),
            ("iii", _bd23_case_iii),
            ("iv", _bd23_case_iv),
            ("v", _bd23_case_v),
        ):
            out = case_fn(p)
            if out is None:
                continue
            lam, p_s_c, p_e_c = out
            lam = _clamp_lambda(lam)
            if p_s_c.min() < -1e-9 or p_e_c.min() < -1e-9:
                continue
            p_s_c, p_e_c = np.clip(p_s_c, 0, None), np.clip(p_e_c, 0, None)
            inv = np.empty(6, dtype=int)
            inv[rot] = np.arange(6)
            p_s = _bd23_unswap(p_s_c[inv], swapped)
            p_e = _bd23_unswap(p_e_c[inv], swapped)
            vecs = bd23_vectors()
            rho_s = DensityMatrix([2, 3], _projector_mix(vecs, p_s))
            rho_e = DensityMatrix([2, 3], _projector_mix(vecs, p_e))
            record = {
                "case": case_name,
                "rotation": int(rot_idx),
                "pair_swaps": list(swapped),
                "p_s": p_s.tolist(),
                "p_e": p_e.tolist(),
                "margins": margins.tolist(),
            }
            return LSDecomposition(lam, rho_s, rho_e, "bd23", record)
    raise NoApplicableCase(
        f"no analytic case covers weights {params.p} (margins {margins})"
    )


def _bd23_unswap(p: np.ndarray, swapped: tuple[int, ...]) -> np.ndarray:
    p = p.copy()
    for k in swapped:
        p[2 * k], p[2 * k + 1] = p[2 * k + 1], p[2 * k]
    return p


# ---------------------------------------------------------------------------
# Werner, isotropic, one-parameter 3x3, multipartite isotropic


def decompose_werner(params: WernerParams) -> LSDecomposition:
    """lambda = f + 1 against the f = 0 boundary Werner state."""
    if params.f >= -TOL.zero:
        raise NotEntangled(f"Werner state with f = {params.f} is separable")
    lam = _clamp_lambda(params.f + 1.0)
    rho_s = to_density(WernerParams(params.d, 0.0))
    rho_e = to_density(WernerParams(params.d, -1.0))
    record = {"case": "werner-line", "f_s": 0.0, "f_e": -1.0}
    return LSDecomposition(lam, rho_s, rho_e, "werner", record)


def decompose_isotropic(params: IsotropicParams) -> LSDecomposition:
    """lambda = d (1 - F) / (d - 1) against the F = 1/d boundary state."""
    d = params.d
    if params.big_f <= 1.0 / d + TOL.zero:
        raise NotEntangled(f"isotropic state with F = {params.big_f} is separable")
    lam = _clamp_lambda(d * (1.0 - params.big_f) / (d - 1.0))
    rho_s = to_density(IsotropicParams(d, 1.0 / d))
    rho_e = to_density(IsotropicParams(d, 1.0))
    record = {"case": "isotropic-line", "F_s": 1.0 / d, "F_e": 1.0}
    return LSDecomposition(lam, rho_s, rho_e, "isotropic", record)


def decompose_horodecki33(params: Horodecki33Params) -> LSDecomposition:
    """lambda = (5 - alpha) / 2 against the alpha = 3 boundary state."""
    if params.alpha <= 3.0 + TOL.zero:
        raise NotEntangled(f"alpha = {params.alpha} is separable")
    lam = _clamp_lambda((5.0 - params.alpha) / 2.0)
    rho_s = to_density(Horodecki33Params(3.0))
    rho_e = to_density(Horodecki33Params(5.0))
    record = {"case": "alpha-line", "alpha_s": 3.0, "alpha_e": 5.0}
    return LSDecomposition(lam, rho_s, rho_e, "horodecki33", record)


def decompose_multi_isotropic(params: MultiIsoParams) -> LSDecomposition:
    """lambda = (1 - s)(1 + d^(n-1)) / d^(n-1) against the s = s0 boundary."""
    s0 = params.s0
    if params.s <= s0 + TOL.zero:
        raise NotEntangled(f"s = {params.s} is within the separable ball (s0 = {s0})")
    dn1 = params.d ** (params.n - 1)
    lam = _clamp_lambda((1.0 - params.s) * (1.0 + dn1) / dn1)
    rho_s = to_density(MultiIsoParams(params.d, params.n, s0))
    rho_e = to_density(MultiIsoParams(params.d, params.n, 1.0))
    record = {"case": "multi-iso-line", "s_s": s0, "s_e": 1.0}
    return LSDecomposition(lam, rho_s, rho_e, "multi_iso", record)


# ---------------------------------------------------------------------------
# dispatch and derived quantities


def decompose(params: FamilyState, **kwargs) -> LSDecomposition:
    """Dispatch to the family-specific split.

    locc1 accepts theta_pp (default: the lambda-maximizing admissible
    angle); locc3 accepts entangled_angles (default: the state's own).
    """
    if isinstance(params, BD22Params):
        return decompose_bd22(params)
    if isinstance(params, ICDParams):
        return decompose_icd(params, **kwargs)
    if isinstance(params, BD23Params):
        return decompose_bd23(params)
    if isinstance(params, WernerParams):
        return decompose_werner(params)
    if isinstance(params, IsotropicParams):
        return decompose_isotropic(params)
    if isinstance(params, Locc1Params):
        theta_pp = kwargs.pop("theta_pp", None)
        if theta_pp is None:
            theta_pp = locc1_max_theta_pp(params)
        return decompose_locc1(params, theta_pp, **kwargs)
    if isinstance(params, Locc3Params):
        return decompose_locc3(params, **kwargs)
    if isinstance(params, Horodecki33Params):
        return decompose_horodecki33(params)
    if isinstance(params, MultiIsoParams):
        return decompose_multi_isotropic(params)
    raise WrongDims(f"unknown family record {type(params).__name__}")


def average_concurrence(dec: LSDecomposition) -> float:
    """(1 - lambda) times the pure entangled part's concurrence.

    Uses the Wootters concurrence for two-qubit parts and the
    I-concurrence for higher bipartite pure parts; raises
    MixedEntangledPart when rho_e is not pure.
    """
    rho_e = dec.rho_e
    w, v = np.linalg.eigh(rho_e.mat)
    if w[-1] < 1.0 - TOL.boundary:
        raise MixedEntangledPart(
            f"entangled part has largest eigenvalue {w[-1]:.6f}; not pure"
        )
    if tuple(rho_e.dims) == (2, 2):
        c_e = wootters_concurrence(rho_e).concurrence
    elif len(rho_e.dims) == 2:
        c_e = i_concurrence_pure(PureState(rho_e.dims, v[:, -1] / np.linalg.norm(v[:, -1])))
    else:
        raise WrongDims("average concurrence is defined for bipartite parts only")
    return float((1.0 - dec.lambda_) * c_e)
