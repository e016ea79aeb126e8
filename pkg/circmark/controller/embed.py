import logging
from circmark import error, keyfile
from circmark.codec import embed
from circmark.error import CircmarkError, TooManyBlocksError
from circmark.image import load_image, normalize_geometry, quantize, save_image
from circmark.metrics import psnr
from circmark.watermark import WatermarkSpec

log = logging.getLogger(__name__)


def main(clargs):
    try:
        original = load_image(clargs.input_path)
        host = normalize_geometry(original)
        if host.shape != original.shape:
            log.info("Cropped %dx%d input to %dx%d" % (original.width, original.height, host.width, host.height))
        spec = WatermarkSpec.generate(clargs.seed, clargs.blocks, host.side, clargs.coefficient_bound)
        watermarked, key = embed(host, spec, clargs.alpha)
        save_image(watermarked, clargs.output_path)
        keyfile.save(key, clargs.key_path)
    except TooManyBlocksError as e:
        error.fail(str(e))
    except (CircmarkError, IOError) as e:
        error.fail("Unable to embed the watermark: %s" % e)

    measured = quantize(watermarked) if clargs.quantized else watermarked
    print("PSNR: %.4f dB" % psnr(host, measured))
    if key.y_monotone_warning:
        print("warning: the watermarked singular values are not strictly decreasing; detection may fail")
    return 0
