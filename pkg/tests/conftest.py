import numpy as np
import pytest

from lsdecomp import DensityMatrix


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_density(rng, dim=4, rank=None, dims=None):
    """Ginibre-random density matrix of the given rank."""
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    m /= np.real(m.trace())
    return DensityMatrix(dims or _split(dim), m)


def random_pure(rng, dim=4, dims=None):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    return v, dims or _split(dim)


def random_unitary(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def _split(dim):
    if dim == 4:
        return [2, 2]
    if dim == 6:
        return [2, 3]
    if dim == 9:
        return [3, 3]
    return [dim]
