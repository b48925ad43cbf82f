import numpy as np
import pytest

from lsdecomp import (
    BD22Params,
    BD23Params,
    DensityMatrix,
    ICDParams,
    PureState,
    concurrence_lower_bound_2k,
    i_concurrence_pure,
    icd_lambda,
    is_separable,
    kron,
    spin_flip,
    takagi,
    to_density,
    wootters_basis,
    wootters_concurrence,
)
from lsdecomp.errors import WrongDims
from lsdecomp.families import bell_vectors_22, max_entangled_ket
from lsdecomp.measures import SPIN_FLIP_OP, eof_from_concurrence

from conftest import random_density, random_pure, random_unitary


def bell_state(k):
    v = bell_vectors_22()[:, k]
    return DensityMatrix([2, 2], np.outer(v, v.conj()))


class TestSpinFlip:
    def test_singlet_invariant(self):
        rho = bell_state(3)
        assert np.abs(spin_flip(rho) - rho.mat).max() < 1e-12

    def test_maximally_mixed_invariant(self):
        rho = DensityMatrix([2, 2], np.eye(4) / 4)
        assert np.abs(spin_flip(rho) - rho.mat).max() < 1e-12

    def test_involution(self, rng):
        rho = random_density(rng, 4)
        once = SPIN_FLIP_OP @ rho.mat.conj() @ SPIN_FLIP_OP
        twice = SPIN_FLIP_OP @ once.conj() @ SPIN_FLIP_OP
        assert np.abs(twice - rho.mat).max() < 1e-12

    def test_wrong_dims(self, rng):
        with pytest.raises(WrongDims):
            spin_flip(random_density(rng, 6, dims=[2, 3]))


class TestConcurrence:
    def test_bell_state(self):
        assert abs(wootters_concurrence(bell_state(0)).concurrence - 1.0) < 1e-12

    def test_werner_five_eighths(self):
        rho = to_density(BD22Params(np.array([5 / 8, 1 / 8, 1 / 8, 1 / 8])))
        assert abs(wootters_concurrence(rho).concurrence - 0.25) < 1e-12

    def test_icd_closed_form(self):
        params = ICDParams(np.array([0.6, 0.2, 0.1, 0.1]), np.pi / 6)
        s = np.sin(np.pi / 3)
        expected = 0.4 * s - np.sqrt(0.04 + 0.0 * s * s)
        got = wootters_concurrence(to_density(params)).concurrence
        assert abs(got - expected) < 1e-10

    def test_pure_state_formula(self, rng):
        # independent oracle: C(a,b,c,d) = 2 |ad - bc|
        for _ in range(50):
            v, dims = random_pure(rng, 4)
            rho = DensityMatrix(dims, np.outer(v, v.conj()))
            expected = 2.0 * abs(v[0] * v[3] - v[1] * v[2])
            assert abs(wootters_concurrence(rho).concurrence - expected) < 1e-10

    def test_local_unitary_invariance(self, rng):
        for _ in range(10):
            rho = random_density(rng, 4)
            u = kron(random_unitary(rng, 2), random_unitary(rng, 2))
            rotated = DensityMatrix([2, 2], u @ rho.mat @ u.conj().T)
            assert (
                abs(
                    wootters_concurrence(rotated).concurrence
                    - wootters_concurrence(rho).concurrence
                )
                < 1e-8
            )

    def test_range(self, rng):
        for rank in (1, 2, 3, 4):
            rep = wootters_concurrence(random_density(rng, 4, rank=rank))
            assert 0.0 <= rep.concurrence <= 1.0
            assert np.all(np.diff(rep.r_eigenvalues) <= 1e-12)

    def test_eof(self):
        assert eof_from_concurrence(0.0) == 0.0
        assert abs(eof_from_concurrence(1.0) - np.log(2.0)) < 1e-12
        rep = wootters_concurrence(bell_state(1))
        assert abs(rep.eof - np.log(2.0)) < 1e-12


class TestTakagi:
    def test_random_symmetric(self, rng):
        for n in (2, 4, 5):
            a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            tau = a + a.T
            sig, v = takagi(tau)
            assert np.abs(v @ v.conj().T - np.eye(n)).max() < 1e-10
            assert np.abs(v.conj().T @ tau @ v.conj() - np.diag(sig)).max() < 1e-10
            assert np.all(sig[:-1] >= sig[1:] - 1e-12)

    def test_rank_deficient(self):
        v = np.array([1.0, 1j, 0.0, 0.0]) / np.sqrt(2)
        tau = 2.0 * np.outer(v, v)
        sig, w = takagi(tau)
        assert np.allclose(sig, [2, 0, 0, 0], atol=1e-12)
        assert np.abs(w @ w.conj().T - np.eye(4)).max() < 1e-10

    def test_zero_matrix(self):
        sig, w = takagi(np.zeros((4, 4), dtype=complex))
        assert np.allclose(sig, 0.0)
        assert np.abs(w @ w.conj().T - np.eye(4)).max() < 1e-10


class TestWoottersBasis:
    def test_bell_diagonal(self):
        p = np.array([0.55, 0.25, 0.15, 0.05])
        wd = wootters_basis(to_density(BD22Params(p)))
        assert np.allclose(wd.lambdas, p, atol=1e-10)
        # basis vectors are phase-adjusted Bell vectors: compare projectors
        rho = to_density(BD22Params(p)).mat
        assert np.abs(wd.reconstruct() - rho).max() < 1e-10

    def test_pure_state(self):
        wd = wootters_basis(bell_state(0))
        assert np.allclose(wd.lambdas, [1, 0, 0, 0], atol=1e-10)

    def test_cross_check_with_r_route(self, rng):
        for rank in (2, 3, 4, 4, 4):
            rho = random_density(rng, 4, rank=rank)
            wd = wootters_basis(rho)
            lam = wd.lambdas
            c_basis = max(0.0, lam[0] - lam[1] - lam[2] - lam[3])
            c_r = wootters_concurrence(rho).concurrence
            assert abs(c_basis - c_r) < 1e-8

    def test_type_invariants(self, rng):
        for _ in range(10):
            rho = random_density(rng, 4)
            wd = wootters_basis(rho)
            assert np.abs(wd.reconstruct() - rho.mat).max() < 1e-8
            xs = wd.basis * np.sqrt(wd.lambdas)
            flipped = SPIN_FLIP_OP @ xs.conj()
            gram = xs.conj().T @ flipped  # <x_i | x~_j>
            assert np.abs(gram - np.diag(wd.lambdas)).max() < 1e-8


class TestIConcurrence:
    def test_product_state(self):
        psi = PureState([2, 2], np.array([1.0, 0, 0, 0]))
        assert i_concurrence_pure(psi) == 0.0

    def test_bell(self):
        psi = PureState([2, 2], max_entangled_ket(2))
        assert abs(i_concurrence_pure(psi) - 1.0) < 1e-12

    def test_general_dimension(self):
        for d in (2, 3, 4, 6):
            psi = PureState([d, d], max_entangled_ket(d))
            assert abs(i_concurrence_pure(psi) - np.sqrt(2 * (1 - 1 / d))) < 1e-12

    def test_sides_agree(self, rng):
        from lsdecomp import partial_trace

        for dims in ([2, 3], [3, 2], [2, 4]):
            v, _ = random_pure(rng, dims[0] * dims[1])
            psi = PureState(dims, v)
            rho_b = partial_trace(psi.projector(), 1).mat
            other = np.sqrt(2 * (1 - np.real(np.trace(rho_b @ rho_b))))
            assert abs(i_concurrence_pure(psi) - other) < 1e-10

    def test_wrong_dims(self):
        with pytest.raises(WrongDims):
            i_concurrence_pure(PureState([2, 2, 2], np.eye(8)[0]))


class TestLowerBound2K:
    def test_bd23_restricted_concurrence(self):
        p = np.array([0.7, 0.1, 0.05, 0.05, 0.05, 0.05])
        rho = to_density(BD23Params(p))
        bound, per_pair = concurrence_lower_bound_2k(rho)
        # C(rho^(01)) = max(0, p1 - p2 - sqrt((p3+p4)(p5+p6)))
        assert abs(per_pair[0] - 0.5) < 1e-10
        assert abs(per_pair[1]) < 1e-10 and abs(per_pair[2]) < 1e-10
        assert abs(bound - 0.5) < 1e-10

    def test_separable_uniform(self):
        rho = to_density(BD23Params(np.full(6, 1 / 6)))
        bound, _ = concurrence_lower_bound_2k(rho)
        assert bound < 1e-10

    def test_k2_reduces_to_concurrence(self, rng):
        for _ in range(10):
            rho = random_density(rng, 4)
            bound, per_pair = concurrence_lower_bound_2k(rho)
            assert len(per_pair) == 1
            assert abs(bound - wootters_concurrence(rho).concurrence) < 1e-10

    def test_ppt_states_give_zero(self, rng):
        count = 0
        while count < 20:
            p = rng.dirichlet(np.ones(6))
            params = BD23Params(p)
            if not is_separable(params):
                continue
            count += 1
            bound, _ = concurrence_lower_bound_2k(to_density(params))
            assert bound < 1e-10


class TestIcdLambda:
    def test_bell_limit(self):
        p = np.array([0.7, 0.1, 0.1, 0.1])
        lam = icd_lambda(ICDParams(p, np.pi / 4))
        assert np.allclose(lam, [0.7, 0.1, 0.1, 0.1], atol=1e-12)

    def test_symmetric_pair(self):
        lam = icd_lambda(ICDParams(np.array([0.3, 0.3, 0.25, 0.15]), 0.4))
        assert abs(lam.max() - max(0.3, lam[0])) < 1e-12
        # p1 = p2 collapses the first-pair splitting to sqrt(4 p1^2)/2 = p1
        pair = 0.5 * np.sqrt(4 * 0.3 * 0.3)
        assert np.any(np.abs(lam - pair) < 1e-12)

    def test_matches_numeric_r(self, rng):
        for _ in range(25):
            p = rng.dirichlet(np.ones(4))
            theta = rng.uniform(0.05, np.pi / 4)
            params = ICDParams(p, theta)
            lam = icd_lambda(params)
            numeric = wootters_concurrence(to_density(params)).r_eigenvalues
            assert np.abs(lam - numeric).max() < 1e-8
