"""
Circulant blocks and the singular value decomposition they are embedded with.

The Gram matrix C*C^t of a 4x4 circulant C is symmetric positive semidefinite and diagonalized by a basis that does
not depend on C, so its SVD is known in closed form.

"""
from collections import namedtuple
import logging
import numpy as np
import scipy.linalg
from circmark.error import ParameterError

log = logging.getLogger(__name__)

_HALF = 0.5
_ROOT_HALF = np.sqrt(2.0) / 2.0
# columns pair with (delta1, delta2, delta3, delta4) in that order
_U0 = np.array([[_HALF, -_HALF, 0.0, -_ROOT_HALF],
                [_HALF, _HALF, -_ROOT_HALF, 0.0],
                [_HALF, -_HALF, 0.0, _ROOT_HALF],
                [_HALF, _HALF, _ROOT_HALF, 0.0]])
_U0.flags.writeable = False


class CoefficientBlock(namedtuple('CoefficientBlock', ['c1', 'c2', 'c3', 'c4'])):
    """ The generating vector c of one 4x4 circulant watermark block. """
    __slots__ = ()

    def __new__(cls, c1, c2, c3, c4):
        values = (float(c1), float(c2), float(c3), float(c4))
        if not all(np.isfinite(values)):
            raise ParameterError("Coefficient block entries must be finite: %s" % (values,))
        return super(CoefficientBlock, cls).__new__(cls, *values)

    @classmethod
    def from_sequence(cls, values):
        values = list(values)
        if len(values) != 4:
            raise ParameterError("A coefficient block has exactly 4 entries, got %d" % len(values))
        return cls(*values)

    @property
    def vector(self):
        return np.array(self, dtype=np.float64)


class SvdTriple(namedtuple('SvdTriple', ['U', 'S', 'V'])):
    """ A = U * diag(S) * V^t with S non-increasing. """
    __slots__ = ()

    def reconstruct(self):
        return (self.U * self.S).dot(self.V.T)


def _as_block(c):
    return c if isinstance(c, CoefficientBlock) else CoefficientBlock.from_sequence(c)


def circulant(c):
    """ Row 1 is c, every following row is the previous one shifted cyclically one place to the right. """
    vector = _as_block(c).vector
    return np.array([np.roll(vector, shift) for shift in range(4)])


def circulant_spectrum(c):
    """
    Eigenvalues of C*C^t in label order (delta1, delta2, delta3, delta4). They are deliberately not sorted: the
    embedding pairs each label with a fixed column of u0().

    """
    c1, c2, c3, c4 = _as_block(c)
    delta1 = (c1 + c2 + c3 + c4) ** 2
    delta2 = (c1 - c2 + c3 - c4) ** 2
    delta3 = (c1 - c3) ** 2 + (c2 - c4) ** 2
    return delta1, delta2, delta3, delta3


def u0():
    return _U0.copy()


def gram(c):
    matrix = circulant(c)
    return matrix.dot(matrix.T)


def block_matrix(values):
    """ u0() * diag(values) * u0()^t for a length-4 vector of spectral values. """
    return (_U0 * np.asarray(values, dtype=np.float64)).dot(_U0.T)


def svd(matrix):
    """
    Decomposes a real square matrix. Signs are fixed so that the largest-magnitude entry of every column of U is
    nonnegative, which makes the result reproducible across runs.

    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
        raise ParameterError("svd needs a nonempty square matrix, got shape %s" % (matrix.shape,))
    if not np.all(np.isfinite(matrix)):
        raise ParameterError("svd input contains non-finite values")
    try:
        U, S, Vt = scipy.linalg.svd(matrix, lapack_driver='gesdd')
    except np.linalg.LinAlgError:
        # the divide-and-conquer driver occasionally fails to converge where the QR driver does not
        log.debug("gesdd did not converge, retrying with gesvd")
        U, S, Vt = scipy.linalg.svd(matrix, lapack_driver='gesvd')
    pivots = np.argmax(np.abs(U), axis=0)
    signs = np.where(U[pivots, np.arange(U.shape[1])] < 0, -1.0, 1.0)
    U = U * signs
    V = Vt.T * signs
    for array in (U, S, V):
        array.flags.writeable = False
    return SvdTriple(U, S, V)
