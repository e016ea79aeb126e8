"""
Fidelity of watermarked images (MSE, PSNR) and similarity of watermarks (NC).

"""
from collections import namedtuple
import numpy as np
from circmark.error import GeometryError, ZeroEnergyError

PEAK = 255.0
# PSNR of identical images
PSNR_INFINITY = float('inf')

SimilarityScore = namedtuple('SimilarityScore', ['nc_raw', 'nc_norm'])


def _samples(value):
    return value.samples if hasattr(value, 'samples') else np.asarray(value, dtype=np.float64)


def _paired(first, second):
    first, second = _samples(first), _samples(second)
    if first.shape != second.shape:
        raise GeometryError("Cannot compare a %s array with a %s array" % (first.shape, second.shape))
    return first, second


def mse(first, second):
    first, second = _paired(first, second)
    return float(np.mean((first - second) ** 2))


def psnr(first, second):
    """ 10 * log10(255^2 / MSE) in decibels, or PSNR_INFINITY when the images are identical. """
    error = mse(first, second)
    if error == 0:
        return PSNR_INFINITY
    return float(10.0 * np.log10(PEAK ** 2 / error))


def nc(watermark, extracted):
    """
    Returns both the literal correlation, averaged over the matrix area, and the energy-normalized one. The latter is
    undefined when either matrix is all zeros: ZeroEnergyError is raised and carries the literal value.

    """
    watermark, extracted = _paired(watermark, extracted)
    inner = float(np.sum(watermark * extracted))
    nc_raw = inner / watermark.size
    energy = float(np.sqrt(np.sum(watermark ** 2) * np.sum(extracted ** 2)))
    if energy == 0:
        raise ZeroEnergyError("Normalized correlation is undefined for a zero-energy watermark", nc_raw)
    # rounding can push |nc_norm| a hair past 1 for parallel inputs
    return SimilarityScore(nc_raw, float(np.clip(inner / energy, -1.0, 1.0)))
