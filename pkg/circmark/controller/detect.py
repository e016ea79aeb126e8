import logging
from circmark import error, keyfile
from circmark.codec import detect
from circmark.error import CircmarkError
from circmark.image import load_image, normalize_geometry

log = logging.getLogger(__name__)

NOT_DETECTED = 2


def main(clargs):
    try:
        image = normalize_geometry(load_image(clargs.input_path))
        # detection never reads the coefficient blocks
        key = keyfile.load(clargs.key_path, detect_only=True)
        report = detect(image, key, clargs.tolerance)
    except CircmarkError as e:
        error.fail("Unable to run detection: %s" % e)

    print("x: %s" % " ".join("%.6f" % value for value in report.x))
    for i, passed in enumerate(report.block_pass):
        left, right = report.x[4 * i + 2], report.x[4 * i + 3]
        print("block %d: %s (x%d=%.6f, x%d=%.6f)" % (i + 1, "pass" if passed else "fail", 4 * i + 3, left, 4 * i + 4, right))
    if report.detected:
        print("watermark detected")
        return 0
    print("watermark not detected")
    return NOT_DETECTED
