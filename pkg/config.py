"""
Configuration file for the coherent-error QEC toolkit
"""
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Numerical tolerances
TOLERANCES = {
    "normalization": 1e-10,
    "branch_sum": 1e-9,
    "oracle_equivalence": 1e-9,
    "codespace_residual": 1e-9,
    "branch_drop": 1e-15,
    "angle_merge": 1e-12,
    "state_norm": 1e-12,
}

# Ion-chain coordinates of the distance-3 Shor rows
ION_POSITIONS = {
    "standard": [[-6, -5, -4], [-2, 0, 2], [4, 5, 6]],
    "center_0_m2_p2": [[-6, -5, -4], [0, -2, 2], [4, 5, 6]],
}

# Phase accumulation reference time (ms); angles in noise models are per t_ref
T_REF_MS = 1.0

# Second-order Zeeman coefficient (Hz / G^2)
ZEEMAN_COEFFICIENT_HZ = 310.8

# Default noise for the logical Ramsey experiment: a quasi-static common
# frequency offset plus the static linear field gradient along the chain.
# Angles are radians per millisecond of wait.
DEFAULT_NOISE = {
    "kind": "quasi_static",
    "sigma": 0.0025,
    "gradient": 0.00025,
    "seed": 7,
}

# Two-timescale defaults are tuning choices, not measured values
TWO_TIMESCALE_DEFAULTS = {
    "sigma_fast": 0.02,
    "tau_fast": 2.0,
    "sigma_slow": 0.002,
    "tau_slow": 500.0,
}

# Default experiment grids
DEFAULT_EXPERIMENT = {
    "times_ms": [0.0, 20.0, 40.0, 60.0, 80.0, 100.0, 125.0, 150.0, 200.0, 250.0, 300.0],
    "shots": 200,
    "seed": 7,
    "wait_ms": 20.0,
    "phase_points": 25,
    "distance": 3,
    "mapping": "standard",
}

# Curve fitting
FIT_SETTINGS = {
    "max_iterations": 200,
    "step_tolerance": 1e-10,
    "harmonic": 3,
    "value_bound": 1.05,
}

# Output formatting
OUTPUT_SETTINGS = {
    "float_format": "%.12g",
    "json_indent": 2,
    "encoding": "utf-8",
}

# Runtime settings (thread/process count is the only environment-driven value)
RUNTIME = {
    "workers": int(os.getenv("COHERENT_QEC_WORKERS", "1")),
}
