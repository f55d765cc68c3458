"""High-order strapdown attitude integrators and a coning-motion benchmark harness.

Quaternions are numpy arrays ordered scalar-first ``[s, x, y, z]``.
"""

from strapdown.errors import ConfigError, ConvergenceError, DomainError, FitError
from strapdown.quaternion import (
    IDENTITY,
    attitude_error,
    quat_conj,
    quat_from_rodrigues,
    quat_from_rotvec,
    quat_mul,
    quat_normalize,
)
from strapdown.polynomials import ChebPoly, VecPoly

__all__ = [
    "IDENTITY",
    "ChebPoly",
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "FitError",
    "VecPoly",
    "attitude_error",
    "quat_conj",
    "quat_from_rodrigues",
    "quat_from_rotvec",
    "quat_mul",
    "quat_normalize",
]

__version__ = "0.1.0"
