"""
Embedding, blind detection and extraction.

Embedding adds alpha times the watermark spectrum to the leading singular values of the host. Detection and extraction
only ever see the watermarked image and a WatermarkKey holding alpha and the host's first 4k singular values: the host
image itself is not an argument anywhere in this module.

"""
import logging
import numpy as np
from circmark.constants import ATTACKED_TOLERANCE, SIGNATURE_FLOOR
from circmark.error import GeometryError, ParameterError
from circmark.linalg import svd, block_matrix
from circmark.watermark import WatermarkSpec, watermark_singulars, assemble_watermark

log = logging.getLogger(__name__)


class WatermarkKey(object):
    """
    Everything needed to detect a watermark. The coefficient blocks are optional: detection and extraction never look
    at them, they are only kept so the extracted watermark can be compared with the embedded one.

    """
    def __init__(self, alpha, k, s_prefix, image_side, blocks=None, y_monotone_warning=False):
        self.alpha = float(alpha)
        self.k = int(k)
        self.s_prefix = np.array(s_prefix, dtype=np.float64)
        self.s_prefix.flags.writeable = False
        self.image_side = int(image_side)
        self.blocks = tuple(blocks) if blocks is not None else None
        self.y_monotone_warning = bool(y_monotone_warning)
        self._validate()

    def _validate(self):
        if not self.alpha > 0:
            raise ParameterError("The scaling factor alpha must be positive, got %s" % self.alpha)
        if self.k < 1 or 4 * self.k > self.image_side:
            raise ParameterError("Invalid block count %d for an image side of %d" % (self.k, self.image_side))
        if self.s_prefix.shape != (4 * self.k,):
            raise ParameterError("The key needs %d singular values, got %d" % (4 * self.k, self.s_prefix.size))
        if not np.all(np.isfinite(self.s_prefix)) or np.any(self.s_prefix < 0):
            raise ParameterError("Key singular values must be finite and nonnegative")
        if np.any(np.diff(self.s_prefix) > 0):
            raise ParameterError("Key singular values must be non-increasing")
        if self.blocks is not None and len(self.blocks) != self.k:
            raise ParameterError("The key lists %d blocks but k is %d" % (len(self.blocks), self.k))

    @property
    def has_blocks(self):
        return self.blocks is not None

    def without_blocks(self):
        return WatermarkKey(self.alpha, self.k, self.s_prefix, self.image_side, None, self.y_monotone_warning)

    @property
    def spec(self):
        if self.blocks is None:
            raise ParameterError("This key was loaded without its coefficient blocks.")
        return WatermarkSpec(self.blocks, self.image_side)

    def __eq__(self, other):
        return (isinstance(other, WatermarkKey)
                and self.alpha == other.alpha
                and self.k == other.k
                and np.array_equal(self.s_prefix, other.s_prefix)
                and self.image_side == other.image_side
                and self.blocks == other.blocks
                and self.y_monotone_warning == other.y_monotone_warning)

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def __repr__(self):
        return "<WatermarkKey alpha=%s k=%d side=%d>" % (self.alpha, self.k, self.image_side)


class DetectionReport(object):
    """ The recovered sequence x, whether each block's x[4i-1] == x[4i] signature held, and optionally W*. """
    def __init__(self, x, block_pass, extracted=None):
        self.x = np.asarray(x)
        self.block_pass = tuple(bool(passed) for passed in block_pass)
        self.extracted = extracted

    @property
    def detected(self):
        return all(self.block_pass)

    def __repr__(self):
        return "<DetectionReport detected=%s blocks=%d>" % (self.detected, len(self.block_pass))


def is_strictly_decreasing(values):
    return bool(np.all(np.diff(values) < 0))


def embed(image, spec, alpha):
    """
    Returns the unquantized watermarked image A* = U * diag(S + alpha * spectrum) * V^t and its key.

    If the perturbed singular values stop being strictly decreasing, the SVD of A* will sort them and detection will
    compare against the wrong key entries. That case still embeds, but is logged and flagged on the key.

    """
    if not image.is_normalized:
        raise GeometryError("Embedding needs a square image with a side divisible by 4, got %dx%d"
                            % (image.width, image.height))
    if spec.image_side != image.side:
        raise GeometryError("The watermark is for a side of %d but the image side is %d" % (spec.image_side, image.side))
    if not alpha > 0:
        raise ParameterError("The scaling factor alpha must be positive, got %s" % alpha)
    unordered = spec.unordered_blocks
    if unordered:
        log.warning("Blocks %s do not satisfy delta4 >= delta3 >= delta2 >= delta1" % unordered)

    decomposition = svd(image.samples)
    perturbed = decomposition.S + alpha * watermark_singulars(spec)
    # the modified prefix and the first untouched value must stay in strict order
    prefix_length = 4 * spec.k
    monotone = is_strictly_decreasing(perturbed[:prefix_length + 1])
    if not monotone:
        log.warning("The perturbed singular values of %r are not strictly decreasing with alpha=%s, k=%d. "
                    "Detection will compare misaligned values." % (image, alpha, spec.k))
    watermarked = (decomposition.U * perturbed).dot(decomposition.V.T)
    key = WatermarkKey(alpha, spec.k, decomposition.S[:prefix_length], spec.image_side, spec.blocks,
                       y_monotone_warning=not monotone)
    return image.with_samples(watermarked), key


def _check_dimensions(image, key):
    if image.shape != (key.image_side, key.image_side):
        raise GeometryError("The key is for a %dx%d image but this one is %dx%d"
                            % (key.image_side, key.image_side, image.width, image.height))
    if not key.alpha > 0:
        raise ParameterError("The key's scaling factor must be positive, got %s" % key.alpha)


def recover_sequence(image, key):
    """ x_i = (S*_i - S_i) / alpha for the first 4k singular values. """
    _check_dimensions(image, key)
    singular_values = svd(image.samples).S
    return (singular_values[:4 * key.k] - key.s_prefix) / key.alpha


def signature_holds(left, right, tol):
    """
    The degenerate pair of a block is present: both values are positive, at least SIGNATURE_FLOOR, and equal to
    within the relative tolerance. An image whose leading singular values match the key exactly gives x = 0 and fails.

    """
    if left < SIGNATURE_FLOOR or right < SIGNATURE_FLOOR:
        return False
    return abs(left - right) <= tol * max(left, right)


def extracted_watermark(x, image_side):
    """ Rebuilds W* by conjugating each block's recovered values with u0(). """
    watermark = np.zeros((image_side, image_side))
    for i in range(len(x) // 4):
        offset = 4 * i
        watermark[offset:offset + 4, offset:offset + 4] = block_matrix(x[offset:offset + 4])
    return watermark


def detect(image, key, tol=ATTACKED_TOLERANCE, extract=False):
    x = recover_sequence(image, key)
    block_pass = [signature_holds(x[4 * i + 2], x[4 * i + 3], tol) for i in range(key.k)]
    report = DetectionReport(x, block_pass, extracted_watermark(x, key.image_side) if extract else None)
    log.debug("x = %s, block verdicts = %s" % (x, report.block_pass))
    return report


def extract(image, key):
    return extracted_watermark(recover_sequence(image, key), key.image_side)


def embedded_watermark(key):
    # needs the blocks, so never part of detection
    return assemble_watermark(key.spec)
