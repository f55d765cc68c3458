"""Picard iteration carried out on Chebyshev coefficients.

Time is mapped to ``tau ∈ [-1, 1]`` by ``t = (1 + tau) t_N / 2`` so
``∫_0^t f dt = (t_N / 2) ∫_{-1}^{tau} f dtau``. Products of series are expanded
with ``F_k F_i = (F_{k+i} + F_{|k-i|}) / 2`` and integrated term by term.
The exact rotation-vector rate has the transcendental factor ``A(|σ|)``; its
third term is re-expanded each iteration by Chebyshev interpolation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from strapdown.picard_np import PicardResult, add_padded, run_picard
from strapdown.polynomials import (
    ChebPoly,
    cheb_integrate,
    cheb_product,
    coeff_discrepancy,
    cross,
    dot,
    scale,
    truncate,
)
from strapdown.quaternion import IDENTITY, pure, quat_mul
from strapdown.stopping import StopRule
from strapdown.taylor import a_coefficient

CHEB_FAMILIES = ("quat", "rod", "rot_full", "rot_t3", "rot_t2")


@dataclass(frozen=True)
class ChebIterState:
    iterate: ChebPoly
    index: int
    m_t: int
    dpc: float = float("inf")


def chebyshev_nodes(q: int) -> NDArray[np.float64]:
    return np.cos((np.arange(q) + 0.5) * np.pi / q)


def gamma_coeffs(eta: Callable[[NDArray[np.float64]], ArrayLike], p: int, q: int) -> NDArray[np.float64]:
    """Chebyshev interpolation coefficients ``γ_0..γ_p`` of ``eta`` from ``q`` Gauss nodes.

    ``γ_k = (2 - δ_0k)/q * sum_s cos(k (s + 1/2) π / q) eta(cos((s + 1/2) π / q))``,
    exact when ``eta`` is a polynomial of degree below ``q``.
    """
    if q < p + 1:
        raise ValueError(f"need at least p+1={p + 1} nodes, got Q={q}")
    theta = (np.arange(q) + 0.5) * np.pi / q
    values = np.asarray(eta(np.cos(theta)), dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    weights = np.cos(np.outer(np.arange(p + 1), theta)) * (2.0 / q)
    weights[0] *= 0.5
    return weights @ values


def initial_state(family: str, m_t: int, t_n: float, q0: ArrayLike = IDENTITY) -> ChebIterState:
    if family == "quat":
        return ChebIterState(ChebPoly(np.asarray(q0, dtype=float)[None, :], t_n), 0, m_t)
    return ChebIterState(ChebPoly(np.zeros((1, 3)), t_n), 0, m_t)


def _rot_third_term(sigma: ChebPoly, omega: ChebPoly, m_t: int, n_nodes: int | None) -> NDArray[np.float64]:
    """Chebyshev coefficients of ``A(|σ|) σ×(σ×ω)`` by interpolation at Gauss nodes."""
    q = 2 * m_t + 1 if n_nodes is None else n_nodes
    p = min(m_t + 1, q - 1)

    def eta(tau):
        s = sigma(tau)
        w = omega(tau)
        angle = np.linalg.norm(s, axis=-1, keepdims=True)
        return a_coefficient(angle) * np.cross(s, np.cross(s, w))

    return gamma_coeffs(eta, p, q)


def _rate(b: NDArray[np.float64], c: NDArray[np.float64], family: str, third=None) -> NDArray[np.float64]:
    """Chebyshev coefficients of the rate, in units of d/dt."""
    if family == "quat":
        return 0.5 * cheb_product(b, pure(c), quat_mul)
    bxc = cheb_product(b, c, cross)
    if family == "rod":
        third = 0.25 * cheb_product(b, cheb_product(b, c, dot), scale)
    elif family == "rot_t3":
        third = cheb_product(b, bxc, cross) / 12.0
    elif family == "rot_t2":
        third = np.zeros((1, 3))
    elif family != "rot_full":
        raise ValueError(f"unknown Chebyshev Picard family {family!r}")
    return add_padded(c, 0.5 * bxc, third)


def picard_cheb_step(
    state: ChebIterState,
    omega: ChebPoly,
    family: str,
    q0: ArrayLike = IDENTITY,
    n_nodes: int | None = None,
) -> ChebIterState:
    """One Picard update in Chebyshev coefficients, truncated to ``state.m_t``.

    ``n_nodes`` is the interpolation node count ``Q`` for ``rot_full``
    (default ``2 m_T + 1``).
    """
    prev = state.iterate
    third = None
    if family == "rot_full":
        third = _rot_third_term(prev, omega, state.m_t, n_nodes)
    rate = _rate(prev.coeffs, omega.coeffs, family, third)
    new = 0.5 * omega.t_n * cheb_integrate(rate)
    if family == "quat":
        new[0] += np.asarray(q0, dtype=float)
    nxt = truncate(ChebPoly(new, omega.t_n), state.m_t)
    return ChebIterState(nxt, state.index + 1, state.m_t, coeff_discrepancy(nxt, prev))


def picard_cheb_solve(
    omega: ChebPoly,
    family: str,
    m_t: int,
    stop: StopRule = StopRule(),
    q0: ArrayLike = IDENTITY,
    n_nodes: int | None = None,
) -> PicardResult:
    """Iterate the Chebyshev-coefficient update until ``stop`` is met."""
    if family not in CHEB_FAMILIES:
        raise ValueError(f"unknown Chebyshev Picard family {family!r}")
    if m_t < omega.degree + 1:
        raise ValueError(f"m_T={m_t} must be at least n+1={omega.degree + 1}")
    state = initial_state(family, m_t, omega.t_n, q0)
    return run_picard(
        state,
        lambda s: picard_cheb_step(s, omega, family, q0, n_nodes),
        stop,
        f"{family} (Chebyshev basis)",
    )
