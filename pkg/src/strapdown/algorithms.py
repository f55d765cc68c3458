"""Algorithm registry: maps an algorithm id to its basis, family and defaults.

``integrate_interval`` turns one gyro batch into the incremental attitude
quaternion over that batch, whatever the algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from strapdown.baselines import classic_three_sample, classic_two_sample
from strapdown.errors import ConfigError
from strapdown.fitting import GyroBatch, fit_cheb, fit_normal
from strapdown.picard_cheb import picard_cheb_solve
from strapdown.picard_np import picard_np_solve
from strapdown.quaternion import IDENTITY, quat_from_rodrigues, quat_from_rotvec
from strapdown.stopping import StopRule
from strapdown.taylor import taylor_solve

# id -> (engine, family)
ALGORITHMS: dict[str, tuple[str, str]] = {
    "QuatTaylor": ("taylor", "quat"),
    "RodTaylor": ("taylor", "rod"),
    "RotTaylor": ("taylor", "rot_full"),
    "RotTaylor-T2": ("taylor", "rot_t2"),
    "RotTaylor-T2s": ("taylor", "rot_t2s"),
    "QuatFIter-np": ("np", "quat"),
    "RodFIter-np": ("np", "rod"),
    "RotFIter-np-T2": ("np", "rot_t2"),
    "RotFIter-np-T3": ("np", "rot_t3"),
    "QuatFIter": ("cheb", "quat"),
    "RodFIter": ("cheb", "rod"),
    "RotFIter": ("cheb", "rot_full"),
    "RotFIter-T3": ("cheb", "rot_t3"),
    "RotFIter-T2": ("cheb", "rot_t2"),
    "Classic2": ("classic", "2"),
    "Classic3": ("classic", "3"),
}

# default truncation offsets m_T = N + k
DEFAULT_MT_OFFSET = {"taylor": 9, "np": 9, "cheb": 1}


def check_algorithm(name: str) -> tuple[str, str]:
    try:
        return ALGORITHMS[name]
    except KeyError:
        raise ConfigError("algorithm", f"unknown algorithm {name!r}; expected one of {sorted(ALGORITHMS)}") from None


def fixed_samples(name: str) -> int | None:
    """Sample count forced by a closed-form baseline, else ``None``."""
    engine, family = check_algorithm(name)
    return int(family) if engine == "classic" else None


@dataclass(frozen=True)
class AlgorithmConfig:
    """An algorithm id plus its tuning knobs.

    ``m_t`` and ``n`` default to ``N + 9`` (``N + 1`` for the Chebyshev
    family) and ``N - 1``; ``n_nodes`` is the interpolation node count for
    ``RotFIter``. With ``carry_attitude`` the quaternion families start their
    iteration from the previous attitude instead of the identity.
    """

    name: str
    m_t: int | None = None
    n: int | None = None
    stop: StopRule = field(default_factory=StopRule)
    n_nodes: int | None = None
    carry_attitude: bool = False

    def __post_init__(self):
        check_algorithm(self.name)

    @property
    def engine(self) -> str:
        return ALGORITHMS[self.name][0]

    @property
    def family(self) -> str:
        return ALGORITHMS[self.name][1]

    def resolved_m_t(self, N: int) -> int:
        if self.engine == "classic":
            return 0
        return N + DEFAULT_MT_OFFSET[self.engine] if self.m_t is None else self.m_t

    def resolved_n(self, N: int) -> int:
        return N - 1 if self.n is None else self.n


@dataclass(frozen=True)
class IntervalResult:
    quat: NDArray[np.float64]
    iterations: int
    converged: bool


def _to_quat(family: str, value: NDArray[np.float64]) -> NDArray[np.float64]:
    if family == "quat":
        return value
    if family == "rod":
        return quat_from_rodrigues(value)
    return quat_from_rotvec(value)


def integrate_interval(batch: GyroBatch, algo: AlgorithmConfig, q0: ArrayLike = IDENTITY) -> IntervalResult:
    """Fit ω, run the integrator and return the attitude change over the batch.

    For the quaternion families the returned quaternion is the end value of an
    integration started at ``q0``; for every other family ``q0`` is ignored and
    the incremental rotation (from identity) is returned.
    """
    engine, family = algo.engine, algo.family
    if engine == "classic":
        need = int(family)
        if batch.N != need or batch.kind != "increment":
            raise ConfigError("N", f"{algo.name} needs exactly {need} increment samples, got {batch.N} {batch.kind}")
        inc = batch.samples
        sigma = classic_two_sample(*inc) if need == 2 else classic_three_sample(*inc)
        return IntervalResult(quat_from_rotvec(sigma), 0, True)

    m_t = algo.resolved_m_t(batch.N)
    n = algo.resolved_n(batch.N)
    q0 = np.asarray(q0, dtype=float)
    if engine == "cheb":
        omega = fit_cheb(batch, n)
        res = picard_cheb_solve(omega, family, m_t, algo.stop, q0, algo.n_nodes)
        end = res.poly(1.0)
        return IntervalResult(_to_quat(family, end), res.iterations, res.converged)
    omega = fit_normal(batch, n)
    if engine == "np":
        res = picard_np_solve(omega, family, m_t, algo.stop, q0, span=batch.t_n)
        return IntervalResult(_to_quat(family, res.poly(batch.t_n)), res.iterations, res.converged)
    res = taylor_solve(omega, family, m_t, algo.stop, batch.t_n, q0)
    return IntervalResult(_to_quat(family, res.poly(batch.t_n)), res.order, res.converged)
