"""
Circulant coefficient blocks and the block-diagonal watermark W_k built from them.

"""
import logging
import numpy as np
from circmark.constants import BLOCK_STRENGTH, COEFFICIENT_BOUND
from circmark.error import ParameterError, TooManyBlocksError
from circmark.linalg import CoefficientBlock, circulant_spectrum, gram

log = logging.getLogger(__name__)

# spectra of rescaled blocks are only ordered up to rounding
_ORDERING_SLACK = 1e-12


def satisfies_ordering(block):
    """ The block's spectrum obeys delta4 >= delta3 >= delta2 >= delta1 and has a nonzero detection signature. """
    delta1, delta2, delta3, delta4 = circulant_spectrum(block)
    slack = _ORDERING_SLACK * delta4
    return delta4 >= delta3 and delta3 + slack >= delta2 and delta2 + slack >= delta1 and delta3 > 0


class WatermarkSpec(object):
    """
    An ordered list of k coefficient blocks destined for an image of side 4m. Only the structural requirement
    1 <= k <= side / 4 is enforced here; generate_blocks() is what guarantees the spectral ordering.

    """
    def __init__(self, blocks, image_side):
        self._blocks = tuple(block if isinstance(block, CoefficientBlock) else CoefficientBlock.from_sequence(block)
                             for block in blocks)
        self._image_side = int(image_side)
        if self._image_side < 4 or self._image_side % 4 != 0:
            raise ParameterError("The watermark side must be a positive multiple of 4, got %d" % self._image_side)
        if not self._blocks:
            raise ParameterError("A watermark needs at least one block.")
        if 4 * len(self._blocks) > self._image_side:
            raise TooManyBlocksError("too many blocks: %d blocks of 4 do not fit in a side of %d pixels"
                                     % (len(self._blocks), self._image_side))

    @classmethod
    def generate(cls, seed, k, image_side, bound=COEFFICIENT_BOUND, strength=BLOCK_STRENGTH):
        """
        Draws k blocks with generate_blocks() and rescales them with scale_blocks(). With strength=None the integer
        blocks are used as drawn.

        """
        if 4 * k > image_side:
            raise TooManyBlocksError("too many blocks: %d blocks of 4 do not fit in a side of %d pixels" % (k, image_side))
        blocks = generate_blocks(seed, k, bound)
        if strength is not None:
            blocks = scale_blocks(blocks, image_side, strength)
        return cls(blocks, image_side)

    @property
    def blocks(self):
        return self._blocks

    @property
    def k(self):
        return len(self._blocks)

    @property
    def image_side(self):
        return self._image_side

    @property
    def unordered_blocks(self):
        # indexes of blocks that break the delta ordering
        return [i for i, block in enumerate(self._blocks) if not satisfies_ordering(block)]

    def __eq__(self, other):
        return isinstance(other, WatermarkSpec) and self._blocks == other._blocks and self._image_side == other._image_side

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def __repr__(self):
        return "<WatermarkSpec k=%d side=%d>" % (self.k, self._image_side)


def generate_blocks(seed, k, bound=COEFFICIENT_BOUND):
    """
    Draws k distinct blocks by rejection sampling. Candidates are 4 integers drawn uniformly from [-bound, bound] by
    numpy's PCG64 generator seeded with `seed`, and are kept only if satisfies_ordering() holds and the block is not
    already in the list. The same seed always yields the same blocks.

    The ordering can only be met when (c1 + c3) and (c2 + c4) have opposite signs (or one is zero), which is why
    the range is signed.

    """
    if k < 1:
        raise ParameterError("At least one block is required, got %d" % k)
    if bound < 1:
        raise ParameterError("The coefficient bound must be at least 1, got %d" % bound)
    rng = np.random.default_rng(seed)
    blocks = []
    seen = set()
    attempts = 0
    # (1, 0, -1, 0) is always acceptable, so the loop ends unless k exceeds the distinct acceptable blocks
    max_attempts = 10000 + 1000 * k
    while len(blocks) < k:
        attempts += 1
        if attempts > max_attempts:
            raise ParameterError("Could not draw %d distinct blocks with coefficients bounded by %d" % (k, bound))
        candidate = CoefficientBlock(*rng.integers(-bound, bound + 1, size=4))
        if candidate in seen or not satisfies_ordering(candidate):
            continue
        seen.add(candidate)
        blocks.append(candidate)
    log.debug("Drew %d blocks in %d attempts (seed %s)" % (k, attempts, seed))
    return tuple(blocks)


def block_energy(image_side, index, strength=BLOCK_STRENGTH):
    """ The spectrum norm given to the block at zero-based position `index`. """
    return strength * image_side / np.sqrt(index + 1)


def scale_blocks(blocks, image_side, strength=BLOCK_STRENGTH):
    """
    Multiplies each block by the real factor that brings the norm of its spectrum to block_energy(). The spectrum is
    quadratic in c, so the factor is the square root of the norm ratio, and the delta ordering is unchanged.

    For one block the PSNR of embedding is 20 * log10(255 / (alpha * strength)) whatever the image size. Each further
    block adds less energy than the one before it, so the whole watermark costs about 10 * log10(1 + 1/2 + ... + 1/k)
    dB more than its first block.

    """
    if not strength > 0:
        raise ParameterError("The block strength must be positive, got %s" % strength)
    scaled = []
    for i, block in enumerate(blocks):
        norm = float(np.linalg.norm(circulant_spectrum(block)))
        if norm == 0:
            raise ParameterError("Block %d has an all-zero spectrum and cannot be scaled" % i)
        factor = np.sqrt(block_energy(image_side, i, strength) / norm)
        scaled.append(CoefficientBlock(*(factor * np.asarray(block, dtype=np.float64))))
    return tuple(scaled)


def assemble_watermark(spec):
    """ The image-sized matrix with gram(c_i) on the diagonal at offset 4(i-1) and zeros everywhere else. """
    watermark = np.zeros((spec.image_side, spec.image_side))
    for i, block in enumerate(spec.blocks):
        offset = 4 * i
        watermark[offset:offset + 4, offset:offset + 4] = gram(block)
    return watermark


def watermark_singulars(spec):
    """ The block spectra laid end to end in label order, padded with zeros to the image side. """
    singulars = np.zeros(spec.image_side)
    for i, block in enumerate(spec.blocks):
        singulars[4 * i:4 * i + 4] = circulant_spectrum(block)
    return singulars
