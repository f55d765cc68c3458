"""Picard (functional) iteration over monomial polynomials.

Each step substitutes the previous iterate into the kinematic rate equation,
integrates the resulting polynomial exactly from 0 to t and truncates the
result to degree ``m_T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from strapdown.errors import ConvergenceError
from strapdown.polynomials import (
    VecPoly,
    coeff_discrepancy,
    cross,
    dot,
    normal_antiderivative,
    normal_product,
    scale,
    truncate,
)
from strapdown.quaternion import IDENTITY, pure, quat_mul
from strapdown.stopping import StopRule

NP_FAMILIES = ("quat", "rod", "rot_t3", "rot_t2")


def add_padded(*arrays: NDArray[np.float64]) -> NDArray[np.float64]:
    rows = max(a.shape[0] for a in arrays)
    out = np.zeros((rows, arrays[0].shape[1]))
    for a in arrays:
        out[: a.shape[0]] += a
    return out


@dataclass(frozen=True)
class NpIterState:
    iterate: VecPoly
    index: int
    m_t: int
    dpc: float = float("inf")


def initial_state(family: str, m_t: int, q0: ArrayLike = IDENTITY) -> NpIterState:
    """Constant starting iterate: ``q(0)`` for quaternions, zero vector otherwise."""
    if family == "quat":
        return NpIterState(VecPoly(np.asarray(q0, dtype=float)[None, :]), 0, m_t)
    return NpIterState(VecPoly(np.zeros((1, 3))), 0, m_t)


def _integrand(b: NDArray[np.float64], d: NDArray[np.float64], family: str) -> NDArray[np.float64]:
    if family == "quat":
        return 0.5 * normal_product(b, pure(d), quat_mul)
    bxd = normal_product(b, d, cross)
    if family == "rod":
        third = 0.25 * normal_product(b, normal_product(b, d, dot), scale)
    elif family == "rot_t3":
        third = normal_product(b, bxd, cross) / 12.0
    elif family == "rot_t2":
        third = np.zeros((1, 3))
    else:
        raise ValueError(f"unknown normal-polynomial Picard family {family!r}")
    return add_padded(d, 0.5 * bxd, third)


def picard_np_step(
    state: NpIterState,
    omega: VecPoly,
    family: str,
    q0: ArrayLike = IDENTITY,
    span: float | None = None,
) -> NpIterState:
    """One Picard update followed by truncation to ``state.m_t``.

    ``span`` (interval length) weights the DPC in normalized time; see
    :func:`coeff_discrepancy`.
    """
    b = state.iterate.coeffs
    m_prev, n = state.iterate.degree, omega.degree
    new = normal_antiderivative(VecPoly(_integrand(b, omega.coeffs, family))).coeffs
    if family == "quat":
        new[0] += np.asarray(q0, dtype=float)
        expected = m_prev + n + 1
    elif family == "rot_t2":
        expected = m_prev + n + 1
    else:
        expected = 2 * m_prev + n + 1
    assert new.shape[0] - 1 == expected, (new.shape[0] - 1, expected)
    nxt = truncate(VecPoly(new), state.m_t)
    return NpIterState(nxt, state.index + 1, state.m_t, coeff_discrepancy(nxt, state.iterate, span))


@dataclass
class PicardResult:
    poly: object
    iterations: int
    converged: bool
    dpc_history: list[float] = field(default_factory=list)


def run_picard(state, step, stop: StopRule, label: str) -> PicardResult:
    """Drive ``step`` from ``state`` until the stop rule fires."""
    history: list[float] = []
    limit = stop.max_iter
    converged = False
    while state.index < limit:
        state = step(state)
        history.append(state.dpc)
        if not stop.fixed and state.dpc < stop.tol:
            converged = True
            break
    if stop.fixed:
        converged = True
    elif not converged and stop.strict:
        raise ConvergenceError(
            f"{label}: DPC {state.dpc:.3e} above {stop.tol:g} after {state.index} iterations",
            iterations=state.index,
            dpc=state.dpc,
        )
    return PicardResult(state.iterate, state.index, converged, history)


def picard_np_solve(
    omega: VecPoly,
    family: str,
    m_t: int,
    stop: StopRule = StopRule(),
    q0: ArrayLike = IDENTITY,
    span: float | None = None,
) -> PicardResult:
    """Iterate from the constant initial function until ``stop`` is met.

    Raises
    ------
    ConvergenceError
        If ``stop.strict`` and the DPC is still above tolerance at ``stop.max_iter``.
    """
    if family not in NP_FAMILIES:
        raise ValueError(f"unknown normal-polynomial Picard family {family!r}")
    if m_t < omega.degree + 1:
        raise ValueError(f"m_T={m_t} must be at least n+1={omega.degree + 1}")
    state = initial_state(family, m_t, q0)
    return run_picard(
        state,
        lambda s: picard_np_step(s, omega, family, q0, span),
        stop,
        f"{family} (normal basis)",
    )

