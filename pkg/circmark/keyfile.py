"""
Key files: a flat YAML document with named fields.

    format_version: 1
    alpha: 5.99999999999999978e-02
    k: 1
    image_side: 512
    s_prefix: [...]            # 4k reals, the host's leading singular values
    blocks: [[c1, c2, c3, c4]] # k coefficient blocks, only read when the embedded watermark is needed
    y_monotone_warning: false

Reals are written as %.17e so that parse(serialize(key)) == key exactly.

"""
import logging
import yaml
from circmark.codec import WatermarkKey
from circmark.constants import KEY_FORMAT_VERSION
from circmark.error import KeyFileError
from circmark.linalg import CoefficientBlock

log = logging.getLogger(__name__)

REQUIRED_FIELDS = ('format_version', 'alpha', 'k', 'image_side', 's_prefix', 'y_monotone_warning')


class _KeyDumper(yaml.SafeDumper):
    pass


def _represent_float(dumper, value):
    return dumper.represent_scalar('tag:yaml.org,2002:float', '%.17e' % value)


_KeyDumper.add_representer(float, _represent_float)


def serialize(key):
    data = {'format_version': KEY_FORMAT_VERSION,
            'alpha': float(key.alpha),
            'k': int(key.k),
            'image_side': int(key.image_side),
            's_prefix': [float(value) for value in key.s_prefix],
            'blocks': [[float(value) for value in block] for block in key.blocks] if key.has_blocks else None,
            'y_monotone_warning': bool(key.y_monotone_warning)}
    return yaml.dump(data, Dumper=_KeyDumper, default_flow_style=None, sort_keys=False)


def _real_list(data, field):
    values = data[field]
    if not isinstance(values, list) or not all(isinstance(value, (int, float)) and not isinstance(value, bool)
                                               for value in values):
        raise KeyFileError("Key field '%s' must be a list of numbers" % field)
    return [float(value) for value in values]


def parse(text, detect_only=False):
    """
    Builds a WatermarkKey from key file text. With detect_only the coefficient blocks are not read at all, which is
    all detection and extraction need.

    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise KeyFileError("The key file is not valid YAML: %s" % e)
    if not isinstance(data, dict):
        raise KeyFileError("The key file must be a document of named fields.")
    missing = [field for field in REQUIRED_FIELDS if field not in data]
    if missing:
        raise KeyFileError("The key file is missing: %s" % ", ".join(missing))
    if data['format_version'] != KEY_FORMAT_VERSION:
        raise KeyFileError("Unsupported key format version %s (expected %d)" % (data['format_version'], KEY_FORMAT_VERSION))
    for field in ('k', 'image_side'):
        if not isinstance(data[field], int) or isinstance(data[field], bool):
            raise KeyFileError("Key field '%s' must be an integer" % field)
    if not isinstance(data['alpha'], (int, float)) or isinstance(data['alpha'], bool):
        raise KeyFileError("Key field 'alpha' must be a number")
    s_prefix = _real_list(data, 's_prefix')
    blocks = None
    if not detect_only:
        if data.get('blocks') is None:
            raise KeyFileError("The key file has no coefficient blocks.")
        if not isinstance(data['blocks'], list):
            raise KeyFileError("Key field 'blocks' must be a list of 4-entry lists")
        try:
            blocks = [CoefficientBlock.from_sequence(block) for block in data['blocks']]
        except (TypeError, ValueError) as e:
            raise KeyFileError("Invalid coefficient block in key file: %s" % e)
    try:
        return WatermarkKey(data['alpha'], data['k'], s_prefix, data['image_side'], blocks,
                            bool(data['y_monotone_warning']))
    except ValueError as e:
        raise KeyFileError("Invalid key: %s" % e)


def save(key, path):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(serialize(key))
    log.debug("Saved %r to %s" % (key, path))


def load(path, detect_only=False):
    try:
        with open(path, encoding='utf-8') as f:
            text = f.read()
    except (IOError, UnicodeDecodeError) as e:
        raise KeyFileError("Unable to read key file %s: %s" % (path, e))
    return parse(text, detect_only)
