"""Vector-valued polynomials in the monomial and Chebyshev bases.

Coefficients are stored as a ``(degree + 1, D)`` array where ``D`` is 3 for
vectors and 4 for quaternions; row ``i`` multiplies ``t**i`` (``VecPoly``)
or ``F_i(tau)`` (``ChebPoly``). A Chebyshev series lives on ``tau ∈ [-1, 1]``
which is tied to interval time by ``t = (1 + tau) * t_n / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from strapdown.errors import DomainError

DOMAIN_SLACK = 1e-12

Bilinear = Callable[[NDArray[np.float64], NDArray[np.float64]], NDArray[np.float64]]


def _as_coeffs(coeffs: ArrayLike) -> NDArray[np.float64]:
    arr = np.array(coeffs, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError(f"coefficients must be a non-empty (degree+1, D) array, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class VecPoly:
    """``sum_i coeffs[i] * t**i`` with vector-valued coefficients."""

    coeffs: NDArray[np.float64]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.coeffs.shape[1]

    def __call__(self, t):
        return eval_normal(self, t)


@dataclass(frozen=True)
class ChebPoly:
    """``sum_i coeffs[i] * F_i(tau)`` over an interval of length ``t_n`` seconds."""

    coeffs: NDArray[np.float64]
    t_n: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))
        if not self.t_n > 0:
            raise ValueError(f"t_n must be positive, got {self.t_n}")

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.coeffs.shape[1]

    def __call__(self, tau):
        return eval_cheb(self, tau)

    def at_time(self, t):
        """Evaluate at interval time ``t ∈ [0, t_n]``."""
        return eval_cheb(self, tau_from_time(t, self.t_n))


def tau_from_time(t, t_n: float):
    return 2.0 * np.asarray(t, dtype=float) / t_n - 1.0


def time_from_tau(tau, t_n: float):
    return (1.0 + np.asarray(tau, dtype=float)) * t_n / 2.0


# -- evaluation ---------------------------------------------------------------


def eval_normal(p: VecPoly, t):
    """Horner evaluation; returns shape ``(D,)`` for scalar ``t`` else ``(len(t), D)``."""
    t = np.asarray(t, dtype=float)
    out = np.broadcast_to(p.coeffs[-1], t.shape + (p.dim,)).copy()
    for c in p.coeffs[-2::-1]:
        out = out * t[..., None] + c
    return out


def _check_domain(tau) -> NDArray[np.float64]:
    tau = np.asarray(tau, dtype=float)
    if np.any(np.abs(tau) > 1.0 + DOMAIN_SLACK):
        raise DomainError(f"Chebyshev argument outside [-1, 1]: {tau[np.abs(tau) > 1.0 + DOMAIN_SLACK]}")
    return np.clip(tau, -1.0, 1.0)


def cheb_basis(degree: int, tau) -> NDArray[np.float64]:
    """Values ``F_0 .. F_degree`` at ``tau``; shape ``tau.shape + (degree + 1,)``.

    Uses ``F_{i+1} = 2 tau F_i - F_{i-1}``.
    """
    tau = np.asarray(tau, dtype=float)
    out = np.empty(tau.shape + (degree + 1,))
    out[..., 0] = 1.0
    if degree >= 1:
        out[..., 1] = tau
    for i in range(1, degree):
        out[..., i + 1] = 2.0 * tau * out[..., i] - out[..., i - 1]
    return out


def eval_cheb(p: ChebPoly, tau):
    tau = _check_domain(tau)
    return cheb_basis(p.degree, tau) @ p.coeffs


# -- integration --------------------------------------------------------------


def _cheb_primitive(i: int, x):
    """An antiderivative of ``F_i`` evaluated at ``x``."""
    if i == 0:
        return np.asarray(x, dtype=float)
    if i == 1:
        return np.asarray(x, dtype=float) ** 2 / 2.0
    f = cheb_basis(i + 1, x)
    return f[..., i + 1] / (2.0 * (i + 1)) - f[..., i - 1] / (2.0 * (i - 1))


def cheb_defint(i: int, a, b):
    """``∫_a^b F_i(tau) dtau`` for ``-1 <= a, b <= 1``."""
    if i < 0:
        raise ValueError(f"degree must be non-negative, got {i}")
    a = _check_domain(a)
    b = _check_domain(b)
    return _cheb_primitive(i, b) - _cheb_primitive(i, a)


@lru_cache(maxsize=256)
def cheb_integral_matrix(degree: int) -> NDArray[np.float64]:
    """Matrix ``M`` with ``(M @ c)`` the coefficients of ``∫_{-1}^{tau} sum c_i F_i``.

    Shape ``(degree + 2, degree + 1)``. Cached and read-only.
    """
    m = np.zeros((degree + 2, degree + 1))
    for i in range(degree + 1):
        if i == 0:
            m[1, 0] = 1.0
        elif i == 1:
            m[2, 1] = 0.25
            m[0, 1] = 0.25
        else:
            m[i + 1, i] = 1.0 / (2.0 * (i + 1))
            m[i - 1, i] = -1.0 / (2.0 * (i - 1))
    # pin the lower limit: subtract the primitive's value at tau = -1
    signs = (-1.0) ** np.arange(degree + 2)
    m[0, :] -= signs @ m
    m.setflags(write=False)
    return m


def cheb_integrate(coeffs: ArrayLike) -> NDArray[np.float64]:
    """Chebyshev coefficients of the running integral from ``-1`` to ``tau``."""
    coeffs = _as_coeffs(coeffs)
    return cheb_integral_matrix(coeffs.shape[0] - 1) @ coeffs


def normal_antiderivative(p: VecPoly) -> VecPoly:
    """``∫_0^t p`` ; the degree grows by one and the constant term is zero."""
    k = np.arange(1, p.degree + 2, dtype=float)[:, None]
    return VecPoly(np.vstack([np.zeros((1, p.dim)), p.coeffs / k]))


def normal_derivative(p: VecPoly) -> VecPoly:
    if p.degree == 0:
        return VecPoly(np.zeros((1, p.dim)))
    k = np.arange(1, p.degree + 1, dtype=float)[:, None]
    return VecPoly(p.coeffs[1:] * k)


# -- products -----------------------------------------------------------------


def normal_product(a: ArrayLike, b: ArrayLike, op: Bilinear) -> NDArray[np.float64]:
    """Monomial coefficients of ``op(a(t), b(t))`` for a bilinear ``op``."""
    a = _as_coeffs(a)
    b = _as_coeffs(b)
    terms = op(a[:, None, :], b[None, :, :])
    ka, kb = np.indices((a.shape[0], b.shape[0]))
    out = np.zeros((a.shape[0] + b.shape[0] - 1, terms.shape[-1]))
    np.add.at(out, (ka + kb).ravel(), terms.reshape(-1, terms.shape[-1]))
    return out


def cheb_product(a: ArrayLike, b: ArrayLike, op: Bilinear) -> NDArray[np.float64]:
    """Chebyshev coefficients of ``op(a(tau), b(tau))`` for a bilinear ``op``.

    Each pair contributes through ``F_k F_i = (F_{k+i} + F_{|k-i|}) / 2``.
    """
    a = _as_coeffs(a)
    b = _as_coeffs(b)
    terms = 0.5 * op(a[:, None, :], b[None, :, :])
    terms = terms.reshape(a.shape[0] * b.shape[0], -1)
    ka, kb = np.indices((a.shape[0], b.shape[0]))
    out = np.zeros((a.shape[0] + b.shape[0] - 1, terms.shape[-1]))
    np.add.at(out, (ka + kb).ravel(), terms)
    np.add.at(out, np.abs(ka - kb).ravel(), terms)
    return out


def cross(a, b):
    return np.cross(a, b)


def dot(a, b):
    return np.sum(a * b, axis=-1, keepdims=True)


def scale(a, b):
    """Scalar-valued ``a`` (shape ``(..., 1)``) times vector ``b``."""
    return a * b


# -- truncation and convergence ------------------------------------------------


def truncate(p, m_t: int):
    """Drop coefficients above degree ``m_t``; returns the same kind of polynomial."""
    if m_t < 0:
        raise ValueError(f"truncation degree must be non-negative, got {m_t}")
    if p.degree <= m_t:
        return p
    if isinstance(p, ChebPoly):
        return ChebPoly(p.coeffs[: m_t + 1], p.t_n)
    return VecPoly(p.coeffs[: m_t + 1])


def _padded(a: NDArray[np.float64], rows: int) -> NDArray[np.float64]:
    return np.vstack([a, np.zeros((rows - a.shape[0], a.shape[1]))]) if a.shape[0] < rows else a


def coeff_discrepancy(p, q, span: float | None = None) -> float:
    """Discrepancy of polynomial coefficients, ``sqrt(sum_k |p_k - q_k|²)``.

    The shorter coefficient list is zero-padded. For monomial polynomials a
    ``span`` may be given, in which case coefficient ``k`` is weighted by
    ``span**k`` (i.e. the comparison is made in the normalized time ``t/span``).
    """
    if type(p) is not type(q):
        raise TypeError(f"basis mismatch: {type(p).__name__} vs {type(q).__name__}")
    rows = max(p.coeffs.shape[0], q.coeffs.shape[0])
    diff = _padded(p.coeffs, rows) - _padded(q.coeffs, rows)
    if span is not None and isinstance(p, VecPoly):
        diff = diff * (float(span) ** np.arange(rows))[:, None]
    return float(np.sqrt(np.sum(diff * diff)))


def cheb_to_normal(p: ChebPoly) -> VecPoly:
    """Re-express a Chebyshev series as monomials in ``tau``."""
    n = p.degree
    basis = np.zeros((n + 1, n + 1))  # basis[i] = monomial coefficients of F_i
    basis[0, 0] = 1.0
    if n >= 1:
        basis[1, 1] = 1.0
    for i in range(1, n):
        basis[i + 1, 1:] = 2.0 * basis[i, :-1]
        basis[i + 1] -= basis[i - 1]
    return VecPoly(basis.T @ p.coeffs)
