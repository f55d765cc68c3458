"""Rotation algebra shared by every integrator.

All functions broadcast over leading axes, so an array of shape ``(..., 4)``
is treated as a stack of quaternions and ``(..., 3)`` as a stack of vectors.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

IDENTITY = np.array([1.0, 0.0, 0.0, 0.0])

# below this angle the conversions switch to their series limits
SMALL_ANGLE = 1e-8


def quat_mul(a: ArrayLike, b: ArrayLike) -> NDArray[np.float64]:
    """Quaternion product ``a ∘ b`` (scalar-first, Hamilton convention).

    ``[s1 s2 - η1·η2,  s1 η2 + s2 η1 + η1 × η2]``
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    s1, v1 = a[..., :1], a[..., 1:]
    s2, v2 = b[..., :1], b[..., 1:]
    scalar = s1 * s2 - np.sum(v1 * v2, axis=-1, keepdims=True)
    vector = s1 * v2 + s2 * v1 + np.cross(v1, v2)
    return np.concatenate([scalar, vector], axis=-1)


def pure(v: ArrayLike) -> NDArray[np.float64]:
    """Embed 3-vectors as quaternions with zero scalar part."""
    v = np.asarray(v, dtype=float)
    return np.concatenate([np.zeros(v.shape[:-1] + (1,)), v], axis=-1)


def quat_conj(q: ArrayLike) -> NDArray[np.float64]:
    q = np.asarray(q, dtype=float)
    return np.concatenate([q[..., :1], -q[..., 1:]], axis=-1)


def quat_normalize(q: ArrayLike) -> NDArray[np.float64]:
    q = np.asarray(q, dtype=float)
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def quat_from_rotvec(sigma: ArrayLike) -> NDArray[np.float64]:
    """Unit quaternion ``cos(|σ|/2) + (σ/|σ|) sin(|σ|/2)`` of a rotation vector."""
    sigma = np.asarray(sigma, dtype=float)
    angle = np.linalg.norm(sigma, axis=-1, keepdims=True)
    small = angle < SMALL_ANGLE
    safe = np.where(small, 1.0, angle)
    scale = np.where(small, 0.5 - angle**2 / 48.0, np.sin(safe / 2.0) / safe)
    s = np.where(small, 1.0 - angle**2 / 8.0, np.cos(safe / 2.0))
    return np.concatenate([s, scale * sigma], axis=-1)


def quat_from_rodrigues(g: ArrayLike) -> NDArray[np.float64]:
    """Unit quaternion ``(2 + g)/sqrt(4 + |g|²)`` of a Rodrigues vector ``g = 2 tan(α/2) e``."""
    g = np.asarray(g, dtype=float)
    denom = np.sqrt(4.0 + np.sum(g * g, axis=-1, keepdims=True))
    return np.concatenate([2.0 / denom, g / denom], axis=-1)


def rotvec_from_quat(q: ArrayLike) -> NDArray[np.float64]:
    """Principal rotation vector (angle in [0, π]) of a unit quaternion."""
    q = np.asarray(q, dtype=float)
    q = np.where(q[..., :1] < 0.0, -q, q)
    vnorm = np.linalg.norm(q[..., 1:], axis=-1, keepdims=True)
    angle = 2.0 * np.arctan2(vnorm, q[..., :1])
    small = vnorm < SMALL_ANGLE
    scale = np.where(small, 2.0 / np.where(small, q[..., :1], 1.0), angle / np.where(small, 1.0, vnorm))
    return scale * q[..., 1:]


def attitude_error(q_true: ArrayLike, q_est: ArrayLike) -> float | NDArray[np.float64]:
    """Principal-angle error ``2 |vec(q_true* ∘ q_est)|`` in radians.

    The metric is invariant to the sign of ``q_est`` because only the
    magnitude of the vector part enters; ``q`` and ``-q`` give the same value.
    """
    dq = quat_mul(quat_conj(q_true), q_est)
    err = 2.0 * np.linalg.norm(dq[..., 1:], axis=-1)
    return float(err) if err.ndim == 0 else err
