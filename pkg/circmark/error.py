import sys


class CircmarkError(ValueError):
    pass


class ImageFormatError(CircmarkError):
    pass


class GeometryError(CircmarkError):
    pass


class TooManyBlocksError(CircmarkError):
    pass


class ParameterError(CircmarkError):
    pass


class KeyFileError(CircmarkError):
    pass


class AttackSpecError(CircmarkError):
    pass


class ZeroEnergyError(CircmarkError):
    """ The energy-normalized correlation is undefined, but the literal sum still is. """
    def __init__(self, message, nc_raw):
        super(ZeroEnergyError, self).__init__(message)
        self.nc_raw = nc_raw


def fail(message, return_code=1):
    # Instead of dumping stack traces back the user we provide them a readable message and a composable return code
    print(message, file=sys.stderr)
    sys.exit(return_code)
