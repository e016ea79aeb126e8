"""
Blind SVD watermarking with circulant blocks

Usage:
  circmark embed --in=IN --out=OUT --key=KEY [--alpha=ALPHA] [--blocks=BLOCKS] [--seed=SEED] [--coefficient-bound=BOUND] [--quantized | --float] [-v | -vv | -vvv]
  circmark detect --in=IN --key=KEY [--tol=TOL] [--quantized | --float] [-v | -vv | -vvv]
  circmark extract --in=IN --key=KEY --out=OUT [--quantized | --float] [-v | -vv | -vvv]
  circmark attack --in=IN --out=OUT --spec=SPEC [--seed=SEED] [--quantized | --float] [-v | -vv | -vvv]
  circmark bench --images=IMAGES --config=CONFIG --report=REPORT [--process-limit=PROCESS_LIMIT] [--make-pdfs] [--quantized | --float] [-v | -vv | -vvv]

Options:
  -h --help     Show this screen.
  --version     Show version.

Commands:
  embed         Watermarks a PGM/PNG image, writes the 8-bit result and the key, and prints the PSNR
  detect        Looks for the watermark using only the image and the key. Exits 0 if found, 2 if not
  extract       Rebuilds the watermark matrix from an image and writes it as an image and a text matrix
  attack        Applies one attack, e.g. "jpeg:quality=50" or "salt_pepper:density=0.02,seed=7"
  bench         Runs a benchmark grid from a YAML configuration and writes a tab-separated report

The default seed comes from the CIRCMARK_SEED environment variable when --seed is not given. --quantized
measures the 8-bit watermarked image instead of the exact one, for embed and bench. Files are always
written in 8 bits, so detect, extract and attack accept --quantized | --float but read the same samples either way.

"""
import logging
import sys
from docopt import docopt
from circmark.config import CommandLineArguments
from circmark.constants import VERSION
from circmark.controller import embed, detect, extract, attack, bench


def main(argv=None):
    docopt_args = docopt(__doc__, argv=argv, version=VERSION)
    arguments = CommandLineArguments(docopt_args)

    log = logging.getLogger()
    handler = logging.StreamHandler()
    formatter = logging.Formatter("%(asctime)s   %(message)s", "%Y-%m-%d %H:%M:%S")
    handler.setFormatter(formatter)
    log.addHandler(handler)
    log.setLevel(arguments.log_level)
    log.debug(docopt_args)

    commands = {'embed': embed,
                'detect': detect,
                'extract': extract,
                'attack': attack,
                'bench': bench}

    try:
        return_code = commands[arguments.command].main(arguments)
    finally:
        log.removeHandler(handler)
    sys.exit(return_code or 0)


if __name__ == '__main__':
    main()
