import numpy as np
import pytest
from circmark.image import Image


def orthogonal_basis(side, rng):
    """ A random orthogonal matrix whose first column is the constant vector 1/sqrt(side). """
    seed_matrix = rng.normal(size=(side, side))
    seed_matrix[:, 0] = 1.0
    q, r = np.linalg.qr(seed_matrix)
    return q * np.sign(np.diag(r))


def host_with_singular_values(singular_values, seed=0, name='host'):
    """ U * diag(singular_values) * V^t for random orthogonal U and V. """
    singular_values = np.asarray(singular_values, dtype=np.float64)
    side = singular_values.size
    rng = np.random.default_rng(seed)
    U = orthogonal_basis(side, rng)
    V = orthogonal_basis(side, rng)
    return Image((U * singular_values).dot(V.T), name)


def spaced_host(side=64, spacing=1000.0, seed=0):
    """ Singular values spacing * (side, side - 1, ..., 1): every gap is large, so no embedding reorders them. """
    return host_with_singular_values(spacing * np.arange(side, 0, -1), seed)


def grayscale_host(side=64, leading=(600.0, 400.0, 270.0, 130.0), seed=0):
    """
    An image that stays comfortably inside [0, 255]: a flat 128 background (the first singular value is 128 * side)
    plus a few well separated components and a small tail.

    """
    tail = np.linspace(leading[-1] / 2.0, 1.0, side - 1 - len(leading))
    return host_with_singular_values(np.concatenate(([128.0 * side], leading, tail)), seed, 'gray')


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def spaced():
    return spaced_host()


@pytest.fixture
def gray():
    return grayscale_host()
