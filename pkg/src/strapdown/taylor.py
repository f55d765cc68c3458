"""Taylor-series attitude integrators with recursively computed derivatives.

Derivative tables hold raw values ``y^(j)(0)`` (not divided by ``j!``); the
factorial scaling is applied once when the series polynomial is assembled.
Every recursion is the Leibniz rule ``(uv)^(j-1) = sum_i C(j-1, i) u^(j-1-i) v^(i)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np
from numpy.typing import ArrayLike, NDArray

from strapdown.fitting import omega_derivatives
from strapdown.polynomials import VecPoly, normal_product
from strapdown.quaternion import IDENTITY, pure, quat_mul
from strapdown.stopping import StopRule, hot_check

# A(x) = sum_k A_SERIES[k] x**(2k); A(x) = (1 - (x/2) cot(x/2)) / x**2
A_SERIES = (
    1.0 / 12.0,
    1.0 / 720.0,
    1.0 / 30240.0,
    1.0 / 1209600.0,
    1.0 / 47900160.0,
    691.0 / 1307674368000.0,
)

ROT_VARIANTS = ("full", "t2", "t2s")


def _binomials(j: int) -> NDArray[np.float64]:
    return np.array([comb(j - 1, i) for i in range(j)], dtype=float)


def _leibniz(u: NDArray[np.float64], v: NDArray[np.float64], j: int, op) -> NDArray[np.float64]:
    """``(op(u, v))^(j-1)(0)`` from raw derivative tables ``u``, ``v``."""
    terms = op(u[j - 1 :: -1], v[:j])
    return _binomials(j) @ terms


def _series(derivs: NDArray[np.float64]) -> VecPoly:
    fact = np.array([factorial(j) for j in range(derivs.shape[0])], dtype=float)
    return VecPoly(derivs / fact[:, None])


def quat_derivatives(omega: VecPoly, q0: ArrayLike, m: int) -> NDArray[np.float64]:
    """Raw quaternion derivatives ``q^(j)(0)``, ``j = 0..m``, for ``q' = q ∘ ω / 2``."""
    w = pure(omega_derivatives(omega, m))
    q = np.zeros((m + 1, 4))
    q[0] = q0
    for j in range(1, m + 1):
        q[j] = 0.5 * _leibniz(q, w, j, quat_mul)
    return q


def rod_derivatives(omega: VecPoly, m: int) -> NDArray[np.float64]:
    """Raw Rodrigues-vector derivatives for ``g' = ω + g×ω/2 + g (g·ω)/4`` with ``g(0) = 0``."""
    w = omega_derivatives(omega, m)
    g = np.zeros((m + 1, 3))
    gw = np.zeros((m + 1, 1))  # (g·ω)^(i)
    for j in range(1, m + 1):
        gw[j - 1] = _leibniz(g, w, j, lambda a, b: np.sum(a * b, axis=-1, keepdims=True))
        g[j] = (
            w[j - 1]
            + 0.5 * _leibniz(g, w, j, np.cross)
            + 0.25 * _leibniz(g, gw, j, lambda a, b: a * b)
        )
    return g


# below this angle the truncated series beats the cancelling closed form
A_SERIES_RADIUS = 0.5


def a_coefficient(angle):
    """``A(x) = (1 - x sin x / (2 (1 - cos x))) / x²`` with a series branch near zero."""
    x = np.asarray(angle, dtype=float)
    small = np.abs(x) < A_SERIES_RADIUS
    xs = np.where(small, 1.0, x)
    closed = (1.0 - 0.5 * xs / np.tan(0.5 * xs)) / xs**2
    u = x * x
    series = np.zeros_like(u)
    for a in reversed(A_SERIES):
        series = series * u + a
    return np.where(small, series, closed)


def a_series_compose(sigma: VecPoly, m: int) -> VecPoly:
    """Time polynomial of ``A(|σ(t)|)`` to degree ``m`` by substituting ``u = σ·σ``.

    Requires ``σ(0) = 0`` so ``u`` starts at ``t²`` and the truncated series
    in ``u`` is accurate to the retained degree.
    """
    if np.any(sigma.coeffs[0] != 0.0):
        raise ValueError("a_series_compose needs sigma(0) = 0")
    u = normal_product(sigma.coeffs, sigma.coeffs, lambda a, b: np.sum(a * b, axis=-1, keepdims=True))
    u = u[: m + 1]
    out = np.zeros((m + 1, 1))
    for a in reversed(A_SERIES):
        out = normal_product(out, u, lambda p, q: p * q)[: m + 1]
        out[0] += a
    if out.shape[0] < m + 1:
        out = np.vstack([out, np.zeros((m + 1 - out.shape[0], 1))])
    return VecPoly(out)


def rot_derivatives(omega: VecPoly, m: int, variant: str = "full") -> NDArray[np.float64]:
    """Raw rotation-vector derivatives with ``σ(0) = 0``.

    ``full`` uses the exact rate ``ω + σ×ω/2 + A(|σ|) σ×(σ×ω)``; ``t2`` keeps the
    first two terms; ``t2s`` replaces ``σ`` by ``∫ω`` in the second term.
    """
    if variant not in ROT_VARIANTS:
        raise ValueError(f"unknown rotation-vector variant {variant!r}")
    w = omega_derivatives(omega, m)
    s = np.zeros((m + 1, 3))
    if variant == "t2s":
        # derivatives of ∫ω, with ω^(-1)(0) = 0
        iw = np.vstack([np.zeros((1, 3)), w[:-1]])
        for j in range(1, m + 1):
            s[j] = w[j - 1] + 0.5 * _leibniz(iw, w, j, np.cross)
        return s
    sw = np.zeros((m + 1, 3))  # (σ×ω)^(i)
    ssw = np.zeros((m + 1, 3))  # (σ×(σ×ω))^(i)
    fact = np.array([factorial(k) for k in range(m + 1)], dtype=float)
    for j in range(1, m + 1):
        sw[j - 1] = _leibniz(s, w, j, np.cross)
        s[j] = w[j - 1] + 0.5 * sw[j - 1]
        if variant == "full":
            ssw[j - 1] = _leibniz(s, sw, j, np.cross)
            # A up to degree j-1 only depends on σ up to order j-2, all known here
            a_raw = a_series_compose(_series(s[:j]), j - 1).coeffs * fact[:j, None]
            s[j] += _leibniz(a_raw, ssw, j, lambda a, b: a * b)
    return s


def taylor_quat(omega: VecPoly, q0: ArrayLike = IDENTITY, m: int = 10) -> VecPoly:
    """Quaternion-valued series ``sum_j q^(j)(0) t^j / j!`` of degree ``m``."""
    return _series(quat_derivatives(omega, q0, m))


def taylor_rod(omega: VecPoly, m: int = 10) -> VecPoly:
    return _series(rod_derivatives(omega, m))


def taylor_rot(omega: VecPoly, m: int = 10, variant: str = "full") -> VecPoly:
    return _series(rot_derivatives(omega, m, variant))


@dataclass(frozen=True)
class TaylorResult:
    poly: VecPoly
    order: int
    converged: bool


def taylor_solve(
    omega: VecPoly,
    family: str,
    m_t: int,
    stop: StopRule,
    span: float,
    q0: ArrayLike = IDENTITY,
) -> TaylorResult:
    """Pick the series order by the stop rule, one order per iteration.

    ``family`` is ``"quat"``, ``"rod"``, ``"rot_full"``, ``"rot_t2"`` or ``"rot_t2s"``.
    With a tolerance rule the order grows from ``n + 1`` until the highest
    term over ``span`` drops below ``tol`` or the order reaches ``m_t``.
    """
    if family == "quat":
        derivs = quat_derivatives(omega, q0, m_t)
    elif family == "rod":
        derivs = rod_derivatives(omega, m_t)
    elif family.startswith("rot_"):
        derivs = rot_derivatives(omega, m_t, family[4:])
    else:
        raise ValueError(f"unknown Taylor family {family!r}")
    full = _series(derivs)
    if stop.fixed:
        order = min(stop.max_iter, m_t)
        return TaylorResult(VecPoly(full.coeffs[: order + 1]), order, True)
    for order in range(min(omega.degree + 1, m_t), m_t + 1):
        if hot_check(full, order, stop.tol, span):
            return TaylorResult(VecPoly(full.coeffs[: order + 1]), order, True)
    return TaylorResult(full, m_t, False)
