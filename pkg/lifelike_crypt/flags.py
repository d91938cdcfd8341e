"""This module contains defaults and format constants. Command line
options fall back to these values
"""

#: Password length in bytes (128 bits)
PASSWORD_LENGTH = 16


#: Default grid size (rows, cols)
DEFAULT_GRID_SIZE = (128, 128)


#: Default ciphering rule, "Fredkin"
DEFAULT_RULE = 'B1357/S02468'


#: Default number of raw bytes XOR-composed into one keystream byte
DEFAULT_RHO = 10


#: Default logistic map parameter. Chaotic region is [3.9, 4.0]
DEFAULT_MU = 4.0
MU_MIN = 3.9
MU_MAX = 4.0


#: Default number of logistic map iterations discarded as transient
DEFAULT_ALPHA = 1000


#: Default offset added to the password value to get the first orbit
#: value. Must stay in (0, 2^-40)
DEFAULT_EPSILON = 2.0 ** -53
EPSILON_MAX = 2.0 ** -40


#: Default metric horizons (iterations) used while ranking rules
DEFAULT_ENTROPY_HORIZON = 10000
DEFAULT_LYAPUNOV_HORIZON = 200
DEFAULT_HAMMING_HORIZON = 1000


#: Default number of random seeds each rule is evaluated on
DEFAULT_TRIALS = 5


#: Default seed of the trial seeds generator in statistical commands
DEFAULT_TRIAL_SEED = 0


#: Random passwords per block size in the ENT rho sweep
DEFAULT_SWEEP_SAMPLES = 100


#: Recommended minimum stream length for the ENT battery
ENT_RECOMMENDED_BYTES = 10 * 1024 * 1024


#: Ciphertext container magic bytes and supported format version
ENVELOPE_MAGIC = b'CACR'
ENVELOPE_VERSION = 0x01


#: Only 8-bit grayscale binary PGM is supported
PGM_MAGIC = b'P5'
PGM_MAXVAL = 255
