import logging
from circmark import attacks, error
from circmark.error import CircmarkError
from circmark.image import load_image, save_image

log = logging.getLogger(__name__)


def main(clargs):
    try:
        spec = attacks.parse_attack_spec(clargs.attack_spec, clargs.seed)
        image = load_image(clargs.input_path)
        attacked = attacks.apply(spec, image)
        save_image(attacked, clargs.output_path)
    except (CircmarkError, IOError) as e:
        error.fail("Unable to apply the attack: %s" % e)
    log.info("Applied %s to %s" % (spec.label, clargs.input_path))
    return 0
