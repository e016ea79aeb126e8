VERSION = '0.1.0'
KEY_FORMAT_VERSION = 1
DEFAULT_ALPHA = 0.06
DEFAULT_BLOCKS = 1
DEFAULT_SEED = 0
COEFFICIENT_BOUND = 12
# spectrum norm of the first block per pixel of image side; block i gets BLOCK_STRENGTH * side / sqrt(i)
BLOCK_STRENGTH = 6.2
# relative tolerance on x[4i-1] == x[4i] for attacked images, and for clean verification
ATTACKED_TOLERANCE = 0.05
CLEAN_TOLERANCE = 1e-6
# a present block has x[4i-1] and x[4i] near its delta3, which is at least 1 for any nonzero integer block
SIGNATURE_FLOOR = 0.5
SEED_ENVIRONMENT_VARIABLE = 'CIRCMARK_SEED'
