import numpy as np
import pytest

from lsdecomp import (
    BD22Params,
    DensityMatrix,
    PureState,
    decompose_bd22,
    hermitian_eigen,
    is_psd,
    kron,
    partial_trace,
    partial_transpose,
    psd_sqrt,
    to_density,
)
from lsdecomp.errors import BadIndex, NotHermitian, NotPSD, ValidationError
from lsdecomp.families import bell_vectors_22
from lsdecomp.measures import SIGMA_Y

from conftest import random_density


def bell_state(k):
    v = bell_vectors_22()[:, k]
    return DensityMatrix([2, 2], np.outer(v, v.conj()))


class TestKron:
    def test_identity(self):
        assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_sigma_y_pair(self):
        # expanding (sigma_y x sigma_y) by hand gives the anti-diagonal (-1, 1, 1, -1)
        expected = np.zeros((4, 4), dtype=complex)
        expected[0, 3], expected[1, 2], expected[2, 1], expected[3, 0] = -1, 1, 1, -1
        assert np.abs(kron(SIGMA_Y, SIGMA_Y) - expected).max() == 0

    def test_projectors(self):
        p = np.diag([1.0, 0.0])
        assert np.array_equal(kron(p, p), np.diag([1.0, 0, 0, 0]))

    def test_mixed_product_property(self, rng):
        for _ in range(10):
            a, b, c, d = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(4))
            lhs = kron(a, b) @ kron(c, d)
            rhs = kron(a @ c, b @ d)
            assert np.abs(lhs - rhs).max() < 1e-10


class TestHermitianEigen:
    def test_diagonal(self):
        w, v = hermitian_eigen(np.diag([1.0, 2.0, 3.0]))
        assert np.allclose(w, [3, 2, 1])
        assert np.abs(v @ v.conj().T - np.eye(3)).max() < 1e-12

    def test_pauli_y(self):
        w, v = hermitian_eigen(SIGMA_Y)
        assert np.allclose(w, [1, -1])
        # eigenvectors are (1, +/- i)/sqrt(2) up to phase; compare projectors
        for k, sign in ((0, 1), (1, -1)):
            expect = np.array([1.0, sign * 1j]) / np.sqrt(2)
            proj = np.outer(v[:, k], v[:, k].conj())
            assert np.abs(proj - np.outer(expect, expect.conj())).max() < 1e-12

    def test_bd_state_spectrum(self):
        rho = to_density(BD22Params(np.array([0.7, 0.1, 0.1, 0.1])))
        w, _ = hermitian_eigen(rho.mat)
        assert np.allclose(w, [0.7, 0.1, 0.1, 0.1], atol=1e-12)

    def test_reconstruction(self, rng):
        for _ in range(20):
            g = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
            m = g + g.conj().T
            w, v = hermitian_eigen(m)
            assert np.abs((v * w) @ v.conj().T - m).max() < 1e-8
            assert np.abs(v @ v.conj().T - np.eye(5)).max() < 1e-9

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            hermitian_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestPsdSqrt:
    def test_diagonal(self):
        assert np.allclose(psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))

    def test_identity_and_projector(self, rng):
        assert np.allclose(psd_sqrt(np.eye(3)), np.eye(3))
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        v /= np.linalg.norm(v)
        p = np.outer(v, v.conj())
        assert np.abs(psd_sqrt(p) - p).max() < 1e-10

    def test_squares_back(self, rng):
        for _ in range(10):
            rho = random_density(rng, 6)
            r = psd_sqrt(rho.mat)
            assert np.abs(r @ r - rho.mat).max() < 1e-8

    def test_rejects_indefinite(self):
        with pytest.raises(NotPSD):
            psd_sqrt(np.diag([1.0, -0.5]))


class TestPartialTranspose:
    def test_product_state_stays_psd(self, rng):
        a = random_density(rng, 2).mat
        b = random_density(rng, 3, dims=[3]).mat
        rho = DensityMatrix([2, 3], kron(a, b))
        for k in (0, 1):
            assert is_psd(partial_transpose(rho, k))

    def test_bell_projector(self):
        pt = partial_transpose(bell_state(0), 1)
        assert abs(np.linalg.eigvalsh(pt).min() + 0.5) < 1e-12

    def test_involution_and_trace(self, rng):
        from lsdecomp.linalg import _pt_array

        rho = random_density(rng, 6, dims=[2, 3])
        pt = partial_transpose(rho, 1)
        assert abs(np.trace(pt) - 1.0) < 1e-12
        assert np.abs(pt - pt.conj().T).max() < 1e-12
        assert np.abs(_pt_array(pt, [2, 3], 1) - rho.mat).max() < 1e-14

    def test_bad_index(self, rng):
        with pytest.raises(BadIndex):
            partial_transpose(random_density(rng, 4), 2)


class TestPartialTrace:
    def test_bell_marginal(self):
        red = partial_trace(bell_state(0), 0)
        assert np.abs(red.mat - np.eye(2) / 2).max() < 1e-12

    def test_product_factors(self, rng):
        a = random_density(rng, 2).mat
        b = random_density(rng, 3, dims=[3]).mat
        rho = DensityMatrix([2, 3], kron(a, b))
        assert np.abs(partial_trace(rho, 0).mat - a).max() < 1e-12
        assert np.abs(partial_trace(rho, 1).mat - b).max() < 1e-12

    def test_max_entangled_qutrit(self):
        from lsdecomp.families import max_entangled_ket

        psi = PureState([3, 3], max_entangled_ket(3))
        red = partial_trace(psi.projector(), 0)
        assert np.abs(red.mat - np.eye(3) / 3).max() < 1e-12

    def test_bad_index(self, rng):
        with pytest.raises(BadIndex):
            partial_trace(random_density(rng, 4), -1)


class TestIsPsd:
    def test_basics(self):
        assert is_psd(np.eye(3))
        assert not is_psd(np.diag([1.0, -0.1]))

    def test_overshoot_breaks_positivity(self):
        params = BD22Params(np.array([0.7, 0.1, 0.1, 0.1]))
        dec = decompose_bd22(params)
        rho = to_density(params)
        bad = rho.mat - 1.01 * dec.lambda_ * dec.rho_s.mat
        assert not is_psd(bad)


class TestValidation:
    def test_density_matrix_invariants(self):
        with pytest.raises(ValidationError):
            DensityMatrix([2, 2], np.eye(4))  # trace 4
        with pytest.raises(NotHermitian):
            m = np.eye(4, dtype=complex) / 4
            m[0, 1] = 0.5
            DensityMatrix([2, 2], m)
        with pytest.raises(NotPSD):
            DensityMatrix([2, 2], np.diag([0.5, 0.6, -0.05, -0.05]))

    def test_pure_state_norm(self):
        with pytest.raises(ValidationError):
            PureState([2, 2], np.array([1.0, 1.0, 0.0, 0.0]))
