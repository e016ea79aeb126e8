"""
Grayscale images, their 8-bit file formats, and the square 4m x 4m geometry the watermark needs.

"""
import logging
import os
import numpy as np
from PIL import Image as PILImage, UnidentifiedImageError
from circmark.error import ImageFormatError, GeometryError

log = logging.getLogger(__name__)

LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])
# file extension -> Pillow format name. Pillow writes mode "L" images as binary P5 PGM.
SUPPORTED_FORMATS = {'.pgm': 'PPM',
                     '.png': 'PNG'}


class Image(object):
    """
    A grayscale raster with real-valued samples in row-major order. Samples are held in a read-only array, so an
    Image may be shared between attacks and worker processes without copying.

    """
    def __init__(self, samples, name=None):
        samples = np.array(samples, dtype=np.float64)
        if samples.ndim != 2 or samples.size == 0:
            raise GeometryError("An image needs a nonempty two-dimensional sample array, got shape %s" % (samples.shape,))
        if not np.all(np.isfinite(samples)):
            raise ImageFormatError("Image samples must all be finite.")
        samples.flags.writeable = False
        self._samples = samples
        self.name = name

    @property
    def samples(self):
        return self._samples

    @property
    def height(self):
        return self._samples.shape[0]

    @property
    def width(self):
        return self._samples.shape[1]

    @property
    def shape(self):
        return self._samples.shape

    @property
    def side(self):
        if self.height != self.width:
            raise GeometryError("Image is %dx%d, not square." % (self.width, self.height))
        return self.width

    @property
    def is_normalized(self):
        return self.height == self.width and self.width % 4 == 0

    def with_samples(self, samples):
        # new pixels, same identity
        return Image(samples, self.name)

    def __eq__(self, other):
        return isinstance(other, Image) and np.array_equal(self._samples, other._samples)

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def __repr__(self):
        return "<Image %s %dx%d>" % (self.name or '', self.width, self.height)


def round_half_away(values):
    values = np.asarray(values, dtype=np.float64)
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


def quantize(img):
    """ Rounds every sample half away from zero and clamps it to the 8-bit range. """
    return img.with_samples(np.clip(round_half_away(img.samples), 0.0, 255.0))


def to_uint8(img):
    return quantize(img).samples.astype(np.uint8)


def normalize_geometry(img):
    """
    Center-crops an image to the largest square whose side is a multiple of 4. Conforming images come back unchanged.

    """
    if img.is_normalized:
        return img
    side = (min(img.height, img.width) // 4) * 4
    if side < 4:
        raise GeometryError("Image is %dx%d, smaller than the 4x4 minimum." % (img.width, img.height))
    top = (img.height - side) // 2
    left = (img.width - side) // 2
    log.debug("Cropping %r to %dx%d at row %d, column %d" % (img, side, side, top, left))
    return img.with_samples(img.samples[top:top + side, left:left + side])


def _format_for(path):
    extension = os.path.splitext(path)[1].lower()
    try:
        return SUPPORTED_FORMATS[extension]
    except KeyError:
        raise ImageFormatError("Unsupported image format '%s'. Use one of: %s"
                               % (extension, ", ".join(sorted(SUPPORTED_FORMATS))))


def _grayscale_samples(pil_image):
    mode = pil_image.mode
    if mode == 'L':
        return np.asarray(pil_image, dtype=np.float64)
    if mode in ('1', 'LA'):
        return np.asarray(pil_image.convert('L'), dtype=np.float64)
    if mode in ('RGB', 'RGBA', 'P', 'PA'):
        rgb = np.asarray(pil_image.convert('RGB'), dtype=np.float64)
        return round_half_away(rgb.dot(LUMA_WEIGHTS))
    raise ImageFormatError("Only 8-bit images are supported, this one has mode '%s'." % mode)


def load_image(path):
    """ Reads a PGM or PNG file as a grayscale Image. Color files are reduced to luma (0.299R + 0.587G + 0.114B). """
    if not os.path.isfile(path):
        raise ImageFormatError("Image file does not exist: %s" % path)
    try:
        with PILImage.open(path) as pil_image:
            if pil_image.format not in SUPPORTED_FORMATS.values():
                raise ImageFormatError("Unsupported image format '%s' in %s" % (pil_image.format, path))
            pil_image.load()
            samples = _grayscale_samples(pil_image)
    except (UnidentifiedImageError, OSError) as e:
        raise ImageFormatError("Unable to read image %s: %s" % (path, e))
    if samples.size == 0:
        raise ImageFormatError("Image %s has no pixels." % path)
    name = os.path.splitext(os.path.basename(path))[0]
    return Image(samples, name)


def save_image(img, path):
    """ Writes the quantized image. The only place, besides attacks, where samples lose precision. """
    image_format = _format_for(path)
    PILImage.fromarray(to_uint8(img)).save(path, format=image_format)
    log.debug("Wrote %r to %s" % (img, path))
