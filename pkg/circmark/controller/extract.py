import logging
import os
import numpy as np
from circmark import error, keyfile
from circmark.codec import extract
from circmark.error import CircmarkError
from circmark.image import Image, load_image, normalize_geometry, save_image

log = logging.getLogger(__name__)


def rescale_for_viewing(matrix):
    """ Maps the matrix affinely onto [0, 255]. A constant matrix becomes all zeros. """
    low, high = float(matrix.min()), float(matrix.max())
    if high == low:
        return np.zeros_like(matrix)
    return (matrix - low) * (255.0 / (high - low))


def matrix_path(output_path):
    return os.path.splitext(output_path)[0] + '.txt'


def main(clargs):
    try:
        image = normalize_geometry(load_image(clargs.input_path))
        key = keyfile.load(clargs.key_path, detect_only=True)
        extracted = extract(image, key)
        save_image(Image(rescale_for_viewing(extracted), 'extracted'), clargs.output_path)
        np.savetxt(matrix_path(clargs.output_path), extracted, fmt='%.17e')
    except (CircmarkError, IOError) as e:
        error.fail("Unable to extract the watermark: %s" % e)
    log.info("Wrote extracted watermark to %s and %s" % (clargs.output_path, matrix_path(clargs.output_path)))
    return 0
