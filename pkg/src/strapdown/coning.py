"""Classical coning motion: analytic truth, gyro synthesis and drift accumulation.

The body rate is ``ω = Ω [-2 sin²(α/2), -sin α sin Ωt, sin α cos Ωt]`` and the
true attitude ``q = cos(α/2) + sin(α/2) [0, cos Ωt, sin Ωt]`` with ``Ω = 2π f_c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from strapdown.algorithms import AlgorithmConfig, integrate_interval
from strapdown.errors import ConvergenceError
from strapdown.fitting import GyroBatch, Kind
from strapdown.quaternion import attitude_error, quat_mul, quat_normalize

# rad/sqrt(s) per deg/sqrt(h)
DEG_PER_SQRT_HOUR = math.radians(1.0) / 60.0

NOISE_BLOCK = 4096


@dataclass(frozen=True)
class ConingParams:
    alpha: float = math.radians(1.0)
    fc: float = 10.0
    fs: float = 1000.0
    N: int = 8
    duration: float = 1.0

    def __post_init__(self):
        if not self.fc > 0 or not self.fs > 0:
            raise ValueError("coning and sampling frequencies must be positive")
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")

    @property
    def Omega(self) -> float:
        return 2.0 * math.pi * self.fc

    @property
    def T(self) -> float:
        return 1.0 / self.fs

    @property
    def relative_frequency(self) -> float:
        return self.fc / self.fs

    @property
    def n_intervals(self) -> int:
        """Whole update intervals that fit in ``duration``."""
        return int(math.floor(self.duration * self.fs / self.N + 1e-9))


@dataclass(frozen=True)
class NoiseParams:
    """Angle random walk ``arw`` in rad/sqrt(s); ``seed`` fixes the noise stream."""

    arw: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.arw < 0:
            raise ValueError(f"arw must be non-negative, got {self.arw}")

    @classmethod
    def from_deg_per_sqrt_hour(cls, arw: float, seed: int = 0) -> NoiseParams:
        return cls(arw * DEG_PER_SQRT_HOUR, seed)


def coning_rate(p: ConingParams, t):
    t = np.asarray(t, dtype=float)
    W, a = p.Omega, p.alpha
    x = np.full(t.shape, -2.0 * W * math.sin(a / 2.0) ** 2)
    return np.stack([x, -W * math.sin(a) * np.sin(W * t), W * math.sin(a) * np.cos(W * t)], axis=-1)


def coning_increment(p: ConingParams, t0, t1):
    """Closed-form ``∫_{t0}^{t1} ω dt``."""
    t0 = np.asarray(t0, dtype=float)
    t1 = np.asarray(t1, dtype=float)
    W, a = p.Omega, p.alpha
    x = -2.0 * math.sin(a / 2.0) ** 2 * W * (t1 - t0)
    y = math.sin(a) * (np.cos(W * t1) - np.cos(W * t0))
    z = math.sin(a) * (np.sin(W * t1) - np.sin(W * t0))
    return np.stack(np.broadcast_arrays(x, y, z), axis=-1)


def coning_true_rotvec(p: ConingParams, t):
    t = np.asarray(t, dtype=float)
    W = p.Omega
    return p.alpha * np.stack([np.zeros_like(t), np.cos(W * t), np.sin(W * t)], axis=-1)


def coning_true_quat(p: ConingParams, t):
    t = np.asarray(t, dtype=float)
    W, h = p.Omega, p.alpha / 2.0
    s = math.sin(h)
    return np.stack(
        [np.full(t.shape, math.cos(h)), np.zeros_like(t), s * np.cos(W * t), s * np.sin(W * t)], axis=-1
    )


@lru_cache(maxsize=64)
def _noise_block(seed: int, block: int) -> NDArray[np.float64]:
    out = np.random.default_rng([seed, block]).standard_normal((NOISE_BLOCK, 3))
    out.setflags(write=False)
    return out


def unit_noise(seed: int, first: int, count: int) -> NDArray[np.float64]:
    """Standard-normal triads for global sample indices ``first .. first+count-1``.

    The stream depends only on ``seed`` and the sample index, so every
    algorithm sees the same noise regardless of how samples are batched.
    """
    idx = np.arange(first, first + count)
    blocks = idx // NOISE_BLOCK
    out = np.empty((count, 3))
    for b in np.unique(blocks):
        sel = blocks == b
        out[sel] = _noise_block(seed, int(b))[idx[sel] % NOISE_BLOCK]
    return out


def synth_batch(
    p: ConingParams,
    interval_start: float | int,
    kind: Kind = "increment",
    noise: NoiseParams = NoiseParams(),
) -> GyroBatch:
    """Gyro samples for the update interval starting at ``interval_start`` seconds.

    An integer ``interval_start`` is read as a global sample index, which
    avoids rounding when stepping many intervals.
    """
    if isinstance(interval_start, (int, np.integer)):
        k0 = int(interval_start)
    else:
        k0 = int(round(interval_start * p.fs))
    k = np.arange(k0, k0 + p.N + 1)
    t = k * p.T
    if kind == "rate":
        samples = coning_rate(p, t[1:])
        sigma = p.T**-0.5
    else:
        samples = coning_increment(p, t[:-1], t[1:])
        sigma = p.T**0.5
    if noise.arw > 0:
        samples = samples + noise.arw * sigma * unit_noise(noise.seed, k0, p.N)
    return GyroBatch(kind, samples, p.T)


def run_interval(batch: GyroBatch, algo: AlgorithmConfig, q_prev) -> NDArray[np.float64]:
    """Attitude at the end of ``batch`` given the attitude ``q_prev`` at its start."""
    return _step(batch, algo, q_prev)[0]


def _step(batch, algo, q_prev):
    if algo.carry_attitude and algo.family == "quat" and algo.engine != "classic":
        res = integrate_interval(batch, algo, q_prev)
        return quat_normalize(res.quat), res
    res = integrate_interval(batch, algo)
    return quat_normalize(quat_mul(q_prev, res.quat)), res


@dataclass(frozen=True)
class DriftResult:
    drift: float
    iters_mean: float
    unconverged: int
    intervals: int
    end_time: float


def simulate(
    p: ConingParams,
    algo: AlgorithmConfig,
    noise: NoiseParams = NoiseParams(),
    kind: Kind = "increment",
) -> DriftResult:
    """Step the algorithm over every whole update interval in ``p.duration``.

    The drift is the principal-angle error against the analytic attitude at
    the end of the last whole interval.
    """
    count = p.n_intervals
    if count < 1:
        raise ValueError(f"duration {p.duration} s is shorter than one update interval")
    q = coning_true_quat(p, 0.0)
    iters = 0
    unconverged = 0
    for i in range(count):
        batch = synth_batch(p, i * p.N, kind, noise)
        try:
            q, res = _step(batch, algo, q)
        except ConvergenceError as exc:
            raise exc.at_interval(i) from None
        iters += res.iterations
        unconverged += not res.converged
    end = count * p.N * p.T
    return DriftResult(attitude_error(coning_true_quat(p, end), q), iters / count, unconverged, count, end)


def accumulate_drift(p: ConingParams, algo: AlgorithmConfig, noise: NoiseParams = NoiseParams()) -> float:
    return simulate(p, algo, noise).drift
