"""Closed-form 2-sample and 3-sample rotation-vector updates (no coning optimization)."""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray


def classic_two_sample(d1: ArrayLike, d2: ArrayLike) -> NDArray[np.float64]:
    """Rotation vector over ``[0, 2T]`` from two angular increments."""
    d1 = np.asarray(d1, dtype=float)
    d2 = np.asarray(d2, dtype=float)
    return d1 + d2 + (2.0 / 3.0) * np.cross(d1, d2)


def classic_three_sample(d1: ArrayLike, d2: ArrayLike, d3: ArrayLike) -> NDArray[np.float64]:
    """Rotation vector over ``[0, 3T]`` from three angular increments."""
    d1 = np.asarray(d1, dtype=float)
    d2 = np.asarray(d2, dtype=float)
    d3 = np.asarray(d3, dtype=float)
    return d1 + d2 + d3 + 0.4125 * np.cross(d1, d3) + 0.7125 * np.cross(d2, d3 - d1)
