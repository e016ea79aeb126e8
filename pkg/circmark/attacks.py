"""
The attack battery used to stress detection: compression, noise, filtering, enhancement and geometric transforms.

Every attack quantizes its input to 8 bits first and returns a quantized Image of the same size. Noise attacks take an
explicit seed so they reproduce bit for bit. Noise variances are in normalized units, i.e. for pixel values scaled to
[0, 1].

"""
from collections import namedtuple
import io
import logging
import numpy as np
from PIL import Image as PILImage
from scipy import ndimage
from skimage import exposure, transform
from circmark.error import AttackSpecError
from circmark.image import quantize, to_uint8

try:
    from scipy.signal import wiener as _wiener
except ImportError:
    _wiener = None

log = logging.getLogger(__name__)

WIENER_AVAILABLE = _wiener is not None


def _finish(img, samples):
    return quantize(img.with_samples(samples))


def _input(img):
    return quantize(img).samples


def identity(img):
    return quantize(img)


def jpeg(img, quality=50):
    """ Baseline JPEG round trip through Pillow's encoder. """
    buffer = io.BytesIO()
    PILImage.fromarray(to_uint8(img)).save(buffer, format='JPEG', quality=int(quality))
    buffer.seek(0)
    with PILImage.open(buffer) as decoded:
        samples = np.asarray(decoded.convert('L'), dtype=np.float64)
    return _finish(img, samples)


def salt_pepper(img, density=0.02, seed=0):
    """ Each pixel independently becomes 0 or 255, with equal odds, with probability `density`. """
    samples = _input(img)
    rng = np.random.default_rng(seed)
    corrupted = rng.random(samples.shape) < density
    salt = rng.integers(0, 2, size=samples.shape) * 255.0
    return _finish(img, np.where(corrupted, salt, samples))


def speckle(img, variance=0.04, seed=0):
    """ out = in * (1 + u) with u uniform, zero mean, and the given variance. """
    samples = _input(img)
    rng = np.random.default_rng(seed)
    half_width = np.sqrt(3.0 * variance)
    noise = rng.uniform(-half_width, half_width, size=samples.shape)
    return _finish(img, samples * (1.0 + noise))


def gaussian_noise(img, mean=0.0, variance=0.01, seed=0):
    samples = _input(img) / 255.0
    rng = np.random.default_rng(seed)
    noise = rng.normal(mean, np.sqrt(variance), size=samples.shape)
    return _finish(img, (samples + noise) * 255.0)


def gaussian_kernel(hsize, sigma):
    # the same kernel as MATLAB's fspecial('gaussian', hsize, sigma)
    offsets = np.arange(hsize) - (hsize - 1) / 2.0
    rows, columns = np.meshgrid(offsets, offsets, indexing='ij')
    kernel = np.exp(-(rows ** 2 + columns ** 2) / (2.0 * sigma ** 2))
    return kernel / kernel.sum()


def gaussian_filter(img, hsize=3, sigma=0.5):
    samples = _input(img)
    return _finish(img, ndimage.correlate(samples, gaussian_kernel(hsize, sigma), mode='reflect'))


def median_filter(img, window=3):
    return _finish(img, ndimage.median_filter(_input(img), size=window, mode='reflect'))


def average_filter(img, window=3):
    return _finish(img, ndimage.uniform_filter(_input(img), size=window, mode='reflect'))


def wiener_filter(img, window=3):
    if not WIENER_AVAILABLE:
        raise AttackSpecError("Wiener filtering is not available in this installation.")
    samples = _input(img)
    # scipy zero-pads, so mirror the border first and crop it off again
    margin = window // 2
    padded = np.pad(samples, margin, mode='symmetric')
    with np.errstate(divide='ignore', invalid='ignore'):
        filtered = _wiener(padded, mysize=window)
    filtered = filtered[margin:margin + samples.shape[0], margin:margin + samples.shape[1]]
    # flat neighbourhoods have zero local variance and come back as NaN
    return _finish(img, np.where(np.isfinite(filtered), filtered, samples))


def sharpen(img, strength=0.8, radius=1.0):
    """ Unsharp masking: in + strength * (in - gaussian_blur(in, radius)). """
    samples = _input(img)
    blurred = ndimage.gaussian_filter(samples, sigma=radius, mode='reflect')
    return _finish(img, samples + strength * (samples - blurred))


def rotate(img, angle=3.0):
    """
    Rotates counter-clockwise about the image center with bilinear interpolation, keeping the original frame.
    Pixels that come from outside the source are 0.

    """
    samples = _input(img)
    if angle % 360.0 == 0:
        return _finish(img, samples)
    # skimage needs a writable buffer
    rotated = transform.rotate(np.array(samples), angle, resize=False, order=1, mode='constant', cval=0.0, preserve_range=True)
    return _finish(img, rotated)


def translate(img, dx=20, dy=35):
    """ Shifts content dx pixels right and dy pixels down, filling the uncovered area with 0. """
    samples = _input(img)
    height, width = samples.shape
    shifted = np.zeros_like(samples)
    if abs(dx) < width and abs(dy) < height:
        source_rows = slice(max(0, -dy), height - max(0, dy))
        source_columns = slice(max(0, -dx), width - max(0, dx))
        target_rows = slice(max(0, dy), height - max(0, -dy))
        target_columns = slice(max(0, dx), width - max(0, -dx))
        shifted[target_rows, target_columns] = samples[source_rows, source_columns]
    return _finish(img, shifted)


def crop_center(img, size=64, fill=0):
    """ Overwrites the centered size x size square with `fill`. """
    samples = _input(img).copy()
    height, width = samples.shape
    if size > min(height, width):
        raise AttackSpecError("Cannot crop %dx%d from a %dx%d image" % (size, size, width, height))
    top = (height - size) // 2
    left = (width - size) // 2
    samples[top:top + size, left:left + size] = fill
    return _finish(img, samples)


def histogram_equalization(img):
    equalized = exposure.equalize_hist(to_uint8(img), nbins=256)
    return _finish(img, equalized * 255.0)


def gamma(img, g=0.7):
    return _finish(img, 255.0 * (_input(img) / 255.0) ** g)


def scale_cycle(img, out_factor=0.5, in_factor=2.0):
    """ Bilinear downscale by out_factor, then back up by in_factor to the original size. """
    samples = _input(img)
    if out_factor == 1 and in_factor == 1:
        return _finish(img, samples)
    height, width = samples.shape
    reduced_shape = (max(1, int(round(height * out_factor))), max(1, int(round(width * out_factor))))
    reduced = transform.resize(np.array(samples), reduced_shape, order=1, mode='edge', anti_aliasing=False, preserve_range=True)
    restored_shape = (int(round(reduced_shape[0] * in_factor)), int(round(reduced_shape[1] * in_factor)))
    if restored_shape != samples.shape:
        log.debug("Scaling back to %s rather than %s to keep the frame" % (samples.shape, restored_shape))
    restored = transform.resize(np.array(reduced), samples.shape, order=1, mode='edge', anti_aliasing=False, preserve_range=True)
    return _finish(img, restored)


Parameter = namedtuple('Parameter', ['name', 'cast', 'default', 'valid', 'description'])


class Attack(object):
    def __init__(self, function, parameters=(), stochastic=False):
        self.function = function
        self.parameters = parameters
        self.stochastic = stochastic

    @property
    def parameter_names(self):
        return [parameter.name for parameter in self.parameters]


def _odd_window(value):
    return value >= 1 and value % 2 == 1


def _unit_interval(value):
    return 0.0 <= value <= 1.0


def _positive(value):
    return value > 0


def _nonnegative(value):
    return value >= 0


def _any(value):
    return True


ATTACKS = {
    'none': Attack(identity),
    'jpeg': Attack(jpeg, (Parameter('quality', int, 50, lambda q: 1 <= q <= 100, 'an integer in [1, 100]'),)),
    'salt_pepper': Attack(salt_pepper, (Parameter('density', float, 0.02, _unit_interval, 'in [0, 1]'),),
                          stochastic=True),
    'speckle': Attack(speckle, (Parameter('variance', float, 0.04, _nonnegative, 'nonnegative'),), stochastic=True),
    'gaussian_noise': Attack(gaussian_noise, (Parameter('mean', float, 0.0, _any, 'any real'),
                                              Parameter('variance', float, 0.01, _nonnegative, 'nonnegative')),
                             stochastic=True),
    'gaussian_filter': Attack(gaussian_filter, (Parameter('hsize', int, 3, _odd_window, 'an odd window size'),
                                                Parameter('sigma', float, 0.5, _positive, 'positive'))),
    'median_filter': Attack(median_filter, (Parameter('window', int, 3, _odd_window, 'an odd window size'),)),
    'average_filter': Attack(average_filter, (Parameter('window', int, 3, _odd_window, 'an odd window size'),)),
    'wiener_filter': Attack(wiener_filter, (Parameter('window', int, 3, _odd_window, 'an odd window size'),)),
    'sharpen': Attack(sharpen, (Parameter('strength', float, 0.8, _nonnegative, 'nonnegative'),
                                Parameter('radius', float, 1.0, _positive, 'positive'))),
    'rotate': Attack(rotate, (Parameter('angle', float, 3.0, _any, 'degrees'),)),
    'translate': Attack(translate, (Parameter('dx', int, 20, _any, 'pixels'),
                                    Parameter('dy', int, 35, _any, 'pixels'))),
    'crop_center': Attack(crop_center, (Parameter('size', int, 64, _nonnegative, 'pixels'),
                                        Parameter('fill', int, 0, lambda f: f in (0, 255), '0 or 255'))),
    'histogram_equalization': Attack(histogram_equalization),
    'gamma': Attack(gamma, (Parameter('g', float, 0.7, _positive, 'positive'),)),
    'scale_cycle': Attack(scale_cycle, (Parameter('out_factor', float, 0.5, _positive, 'positive'),
                                        Parameter('in_factor', float, 2.0, _positive, 'positive'))),
}


class AttackSpec(object):
    """ A named attack with its parameters resolved against the defaults, plus the seed for noise attacks. """
    def __init__(self, kind, params=None, rng_seed=0):
        if kind not in ATTACKS:
            raise AttackSpecError("Unknown attack '%s'. Available attacks: %s" % (kind, ", ".join(sorted(ATTACKS))))
        self.kind = kind
        self.rng_seed = int(rng_seed)
        self.params = self._resolve(ATTACKS[kind], params or {})

    def _resolve(self, attack, params):
        unknown = set(params) - set(attack.parameter_names)
        if unknown:
            raise AttackSpecError("Attack '%s' does not take %s. It takes: %s"
                                  % (self.kind, ", ".join(sorted(unknown)), ", ".join(attack.parameter_names) or "nothing"))
        resolved = {}
        for parameter in attack.parameters:
            raw = params.get(parameter.name, parameter.default)
            try:
                value = parameter.cast(raw)
            except (TypeError, ValueError):
                raise AttackSpecError("%s.%s must be %s, got '%s'" % (self.kind, parameter.name, parameter.description, raw))
            if parameter.cast is int and float(raw) != value:
                raise AttackSpecError("%s.%s must be an integer, got '%s'" % (self.kind, parameter.name, raw))
            if not parameter.valid(value):
                raise AttackSpecError("%s.%s must be %s, got %s" % (self.kind, parameter.name, parameter.description, value))
            resolved[parameter.name] = value
        return resolved

    @property
    def stochastic(self):
        return ATTACKS[self.kind].stochastic

    @property
    def label(self):
        parts = ["%s=%s" % (parameter.name, self.params[parameter.name]) for parameter in ATTACKS[self.kind].parameters]
        if self.stochastic:
            parts.append("seed=%d" % self.rng_seed)
        return "%s:%s" % (self.kind, ",".join(parts)) if parts else self.kind

    def __eq__(self, other):
        return (isinstance(other, AttackSpec) and self.kind == other.kind and self.params == other.params
                and self.rng_seed == other.rng_seed)

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def __repr__(self):
        return "<AttackSpec %s>" % self.label


def parse_attack_spec(text, default_seed=0):
    """
    Parses "kind[:name=value[,name=value...]]", e.g. "jpeg:quality=50" or "salt_pepper:density=0.02,seed=7".

    """
    text = text.strip()
    kind, _, argument_text = text.partition(':')
    params = {}
    seed = default_seed
    for argument in filter(None, (part.strip() for part in argument_text.split(','))):
        name, separator, value = argument.partition('=')
        if not separator or not name.strip() or not value.strip():
            raise AttackSpecError("Malformed attack argument '%s' in '%s'" % (argument, text))
        name, value = name.strip(), value.strip()
        if name == 'seed':
            try:
                seed = int(value)
            except ValueError:
                raise AttackSpecError("The seed must be an integer, got '%s'" % value)
            continue
        if name in params:
            raise AttackSpecError("Attack argument '%s' given twice in '%s'" % (name, text))
        params[name] = value
    return AttackSpec(kind.strip(), params, seed)


def apply(spec, img):
    attack = ATTACKS[spec.kind]
    params = dict(spec.params)
    if attack.stochastic:
        params['seed'] = spec.rng_seed
    log.debug("Applying %s to %r" % (spec.label, img))
    return attack.function(img, **params)
