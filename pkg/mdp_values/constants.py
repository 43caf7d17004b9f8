"""Constants for the mdp-values toolkit."""

import os
from fractions import Fraction

# Exponent bound for the complex-root gadget search - can be overridden via environment variable
GADGET_BOUND = int(os.environ.get("MDP_VALUES_GADGET_BOUND", "200"))

# Pure stationary policy enumeration cap
POLICY_CAP = int(os.environ.get("MDP_VALUES_POLICY_CAP", "4096"))

# Numeric verification
TOLERANCE = float(os.environ.get("MDP_VALUES_TOLERANCE", "1e-9"))
VALUE_ITERATION_EPSILON = float(os.environ.get("MDP_VALUES_EPSILON", "1e-10"))
DEFAULT_GRID = tuple(i / 100 for i in range(1, 100))

# Initial-distribution determinization: joint profiles grow as |A|^|support|
DETERMINIZE_MAX_SUPPORT = int(os.environ.get("MDP_VALUES_DETERMINIZE_SUPPORT", "8"))

# Numeric root diagnostics
ROOT_ITERATION_CAP = 200
ROOT_TOLERANCE = 1e-12
ROOT_RESIDUAL_FACTOR = 1e-8

# Root isolation
SWITCHPOINT_WIDTH = Fraction(1, 10**12)

# Rationalization of numerically factored denominators (--approx-factor)
APPROX_DENOMINATOR_LIMIT = 10**6

# Transition rows are serialized with explicit zeros up to this many states
DENSE_ROW_STATES = 64

# Numeric roots within this distance of the unit circle are reported as lying on it
UNIT_CIRCLE_TOLERANCE = 1e-9
