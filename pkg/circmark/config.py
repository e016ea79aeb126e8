import logging
import os
from circmark.constants import (DEFAULT_ALPHA, DEFAULT_BLOCKS, DEFAULT_SEED, ATTACKED_TOLERANCE, COEFFICIENT_BOUND,
                                SEED_ENVIRONMENT_VARIABLE)
from circmark.error import ParameterError


def _number(cast, option, value):
    try:
        return cast(value)
    except (TypeError, ValueError):
        raise ParameterError("%s must be %s, got '%s'" % (option, "an integer" if cast is int else "a number", value))


class CommandLineArguments(object):
    """
    Wraps the raw arguments provided by docopt. Numeric options that don't parse raise ParameterError.

    """
    def __init__(self, arguments, environment=None):
        self._arguments = arguments
        self._environment = os.environ if environment is None else environment

    @property
    def alpha(self):
        return _number(float, '--alpha', self._arguments.get('--alpha') or DEFAULT_ALPHA)

    @property
    def attack_spec(self):
        return self._arguments['--spec']

    @property
    def blocks(self):
        return _number(int, '--blocks', self._arguments.get('--blocks') or DEFAULT_BLOCKS)

    @property
    def coefficient_bound(self):
        return _number(int, '--coefficient-bound', self._arguments.get('--coefficient-bound') or COEFFICIENT_BOUND)

    @property
    def command(self):
        # We have to do this weird loop to deal with the way docopt stores the command name
        for possible_command in ('embed',
                                 'detect',
                                 'extract',
                                 'attack',
                                 'bench'):
            if self._arguments.get(possible_command):
                return possible_command

    @property
    def config_path(self):
        return self._arguments['--config']

    @property
    def image_directory(self):
        return self._arguments['--images']

    @property
    def input_path(self):
        return self._arguments['--in']

    @property
    def key_path(self):
        return self._arguments['--key']

    @property
    def log_level(self):
        log_level = {0: logging.ERROR,
                     1: logging.WARN,
                     2: logging.INFO,
                     3: logging.DEBUG}
        # default to silent if the user supplies no verbosity setting
        return log_level.get(self._arguments.get('-v'), logging.ERROR)

    @property
    def make_pdfs(self):
        return bool(self._arguments.get('--make-pdfs'))

    @property
    def output_path(self):
        return self._arguments['--out']

    @property
    def process_limit(self):
        # 0 indicates unlimited
        return _number(int, '--process-limit', self._arguments.get('--process-limit') or 0)

    @property
    def quantized(self):
        # None means neither --quantized nor --float was given
        if self._arguments.get('--quantized'):
            return True
        if self._arguments.get('--float'):
            return False
        return None

    @property
    def report_path(self):
        return self._arguments['--report']

    @property
    def seed(self):
        # the flag wins over the environment
        seed = self._arguments.get('--seed')
        if seed is None:
            seed = self._environment.get(SEED_ENVIRONMENT_VARIABLE)
        return _number(int, '--seed', seed) if seed is not None else DEFAULT_SEED

    @property
    def tolerance(self):
        tolerance = _number(float, '--tol', self._arguments.get('--tol') or ATTACKED_TOLERANCE)
        if tolerance < 0:
            raise ParameterError("--tol must be nonnegative, got %s" % tolerance)
        return tolerance
