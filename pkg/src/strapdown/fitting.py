"""Angular-velocity polynomials fitted to a batch of gyro samples.

Samples sit at ``t_k = k T`` for ``k = 1..N``; the batch time origin is the
start of the update interval. Rate samples are matched pointwise, increment
samples are matched through the integral of the polynomial over each
sampling interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from strapdown.errors import FitError
from strapdown.polynomials import ChebPoly, VecPoly, cheb_basis, cheb_defint

Kind = Literal["rate", "increment"]


@dataclass(frozen=True)
class GyroBatch:
    """``N`` equally spaced gyro samples over one update interval.

    Parameters
    ----------
    kind : {"rate", "increment"}
        Angular rate in rad/s or angular increment in rad.
    samples : array_like, shape (N, 3)
    T : float
        Sampling interval in seconds.
    """

    kind: Kind
    samples: NDArray[np.float64]
    T: float

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float).reshape(-1, 3)
        object.__setattr__(self, "samples", samples)
        if self.kind not in ("rate", "increment"):
            raise ValueError(f"kind must be 'rate' or 'increment', got {self.kind!r}")
        if samples.shape[0] < 1:
            raise ValueError("a batch needs at least one sample")
        if not self.T > 0:
            raise ValueError(f"sampling interval must be positive, got {self.T}")

    @property
    def N(self) -> int:
        return self.samples.shape[0]

    @property
    def t_n(self) -> float:
        return self.N * self.T

    @property
    def times(self) -> NDArray[np.float64]:
        return self.T * np.arange(1, self.N + 1)


def _degree(batch: GyroBatch, n: int | None, kind: Kind) -> int:
    if batch.kind != kind:
        raise FitError(f"expected a {kind} batch, got {batch.kind}")
    n = batch.N - 1 if n is None else n
    if n < 0 or n > batch.N - 1:
        raise FitError(f"degree {n} not in [0, N-1] for N={batch.N}")
    return n


def _lstsq(a: NDArray[np.float64], rhs: NDArray[np.float64]) -> NDArray[np.float64]:
    sol, _, rank, _ = np.linalg.lstsq(a, rhs, rcond=None)
    if rank < a.shape[1]:
        raise FitError(f"fit matrix is rank deficient (rank {rank} < {a.shape[1]})")
    return sol


def fit_normal_rates(batch: GyroBatch, n: int | None = None) -> VecPoly:
    """Least-squares monomial fit ``sum d_i t**i`` through rate samples."""
    n = _degree(batch, n, "rate")
    # work in u = t / t_N so the Vandermonde columns are O(1)
    u = np.arange(1, batch.N + 1) / batch.N
    e = _lstsq(u[:, None] ** np.arange(n + 1), batch.samples)
    return VecPoly(e / batch.t_n ** np.arange(n + 1)[:, None])


def fit_normal_increments(batch: GyroBatch, n: int | None = None) -> VecPoly:
    """Least-squares monomial fit whose integral over each sample interval matches the increments."""
    n = _degree(batch, n, "increment")
    u = np.arange(0, batch.N + 1) / batch.N
    powers = np.arange(1, n + 2)
    prim = u[:, None] ** powers / powers
    e = _lstsq(np.diff(prim, axis=0), batch.samples / batch.t_n)
    return VecPoly(e / batch.t_n ** np.arange(n + 1)[:, None])


def sample_taus(N: int) -> NDArray[np.float64]:
    """Mapped sample instants ``tau_k = 2k/N - 1`` for ``k = 0..N``."""
    return 2.0 * np.arange(N + 1) / N - 1.0


def fit_cheb_rates(batch: GyroBatch, n: int | None = None) -> ChebPoly:
    """Least-squares Chebyshev fit through rate samples on the mapped interval."""
    n = _degree(batch, n, "rate")
    tau = sample_taus(batch.N)[1:]
    return ChebPoly(_lstsq(cheb_basis(n, tau), batch.samples), batch.t_n)


def increment_matrix(N: int, n: int) -> NDArray[np.float64]:
    """``G[k, i] = ∫ F_i`` over the k-th mapped sampling interval."""
    tau = sample_taus(N)
    return np.column_stack([cheb_defint(i, tau[:-1], tau[1:]) for i in range(n + 1)])


def fit_cheb_increments(batch: GyroBatch, n: int | None = None) -> ChebPoly:
    """Least-squares Chebyshev fit matching ``Δθ_k = (t_N/2) sum c_i G_i,k``."""
    n = _degree(batch, n, "increment")
    g = increment_matrix(batch.N, n)
    return ChebPoly(_lstsq(g, 2.0 * batch.samples / batch.t_n), batch.t_n)


def fit_normal(batch: GyroBatch, n: int | None = None) -> VecPoly:
    if batch.kind == "rate":
        return fit_normal_rates(batch, n)
    return fit_normal_increments(batch, n)


def fit_cheb(batch: GyroBatch, n: int | None = None) -> ChebPoly:
    if batch.kind == "rate":
        return fit_cheb_rates(batch, n)
    return fit_cheb_increments(batch, n)


def omega_derivatives(omega: VecPoly, order: int) -> NDArray[np.float64]:
    """Raw derivatives ``ω^(j)(0) = j! d_j`` for ``j = 0..order`` (zero past the degree)."""
    out = np.zeros((order + 1, 3))
    k = min(order, omega.degree)
    fact = np.cumprod(np.r_[1.0, np.arange(1, k + 1)])
    out[: k + 1] = omega.coeffs[: k + 1] * fact[:, None]
    return out


def increments_from_normal(omega: VecPoly, N: int, T: float) -> NDArray[np.float64]:
    """Integrate a monomial rate polynomial over each sampling interval."""
    k = np.arange(1, omega.degree + 2)
    t = T * np.arange(N + 1)
    prim = (t[:, None] ** k / k) @ omega.coeffs
    return np.diff(prim, axis=0)


def increments_from_cheb(omega: ChebPoly, N: int) -> NDArray[np.float64]:
    """Increments ``(t_N/2) sum c_i G_i,k`` implied by a Chebyshev rate series."""
    return 0.5 * omega.t_n * increment_matrix(N, omega.degree) @ omega.coeffs
