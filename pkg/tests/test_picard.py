import math

import numpy as np
import pytest
from oracles import integrate, quat_rhs

from strapdown.coning import ConingParams, synth_batch
from strapdown.errors import ConvergenceError
from strapdown.fitting import fit_cheb, fit_normal
from strapdown.picard_cheb import (
    ChebIterState,
    chebyshev_nodes,
    gamma_coeffs,
    picard_cheb_solve,
    picard_cheb_step,
)
from strapdown.picard_cheb import initial_state as cheb_initial
from strapdown.picard_np import NpIterState, picard_np_solve, picard_np_step
from strapdown.picard_np import initial_state as np_initial
from strapdown.polynomials import ChebPoly, VecPoly, cheb_integrate, normal_antiderivative
from strapdown.quaternion import IDENTITY, quat_from_rodrigues, quat_from_rotvec, quat_mul
from strapdown.stopping import StopRule
from strapdown.taylor import taylor_quat

Q0 = np.array([0.9, 0.1, -0.3, 0.2]) / math.sqrt(0.95)
TIGHT = StopRule(tol=1e-15, max_iter=60)


def _coning(fc=10.0, N=8, kind="increment"):
    batch = synth_batch(ConingParams(fc=fc, N=N), 5 * N, kind)
    return batch, fit_normal(batch), fit_cheb(batch)


# -- normal basis


def test_np_first_quat_iterate():
    omega = VecPoly([[0.1, 0.2, 0.3], [1.0, -1.0, 0.5]])
    s = picard_np_step(np_initial("quat", 10, Q0), omega, "quat", Q0)
    anti = normal_antiderivative(omega).coeffs
    ref = np.vstack([Q0, 0.5 * quat_mul(Q0, np.c_[np.zeros(2), anti[1:]])])
    np.testing.assert_allclose(s.iterate.coeffs, ref, atol=1e-16)


def test_np_first_rod_iterate_is_integral_of_rate():
    omega = VecPoly([[0.1, 0.2, 0.3], [1.0, -1.0, 0.5]])
    s = picard_np_step(np_initial("rod", 10), omega, "rod")
    np.testing.assert_allclose(s.iterate.coeffs, normal_antiderivative(omega).coeffs, atol=1e-17)


@pytest.mark.parametrize("family", ["quat", "rod", "rot_t3", "rot_t2"])
def test_np_zero_rate_is_a_fixed_point(family):
    s0 = np_initial(family, 6, Q0)
    s1 = picard_np_step(s0, VecPoly(np.zeros((1, 3))), family, Q0)
    assert s1.dpc == 0.0


def test_np_truncation_applied():
    omega = VecPoly(np.ones((4, 3)))
    s = np_initial("rod", 5)
    for _ in range(4):
        s = picard_np_step(s, omega, "rod")
        assert s.iterate.degree <= 5


def test_np_constant_rate_quat_matches_closed_form():
    res = picard_np_solve(VecPoly([[0, 0, 1.0]]), "quat", 12, TIGHT, IDENTITY, span=0.1)
    t = np.linspace(0, 0.1, 11)
    ref = np.c_[np.cos(t / 2), np.zeros((11, 2)), np.sin(t / 2)]
    np.testing.assert_allclose(res.poly(t), ref, atol=1e-12)


def test_np_requires_room_for_the_rate_integral():
    with pytest.raises(ValueError):
        picard_np_solve(VecPoly(np.ones((4, 3))), "quat", 3)


def test_np_strict_mode_raises_with_diagnostics():
    _, omega, _ = _coning(fc=100.0)
    with pytest.raises(ConvergenceError) as info:
        picard_np_solve(omega, "quat", 9, StopRule(tol=1e-30, max_iter=4, strict=True), span=0.008)
    assert info.value.iterations == 4 and info.value.dpc > 0


def test_np_fixed_iteration_count():
    _, omega, _ = _coning()
    res = picard_np_solve(omega, "rod", 17, StopRule(kind="maxiter", max_iter=3), span=0.008)
    assert res.iterations == 3 and len(res.dpc_history) == 3


def test_np_agrees_with_taylor_when_both_converge():
    batch, omega, _ = _coning()
    m = 40
    pic = picard_np_solve(omega, "quat", m, TIGHT, span=batch.t_n).poly
    tay = taylor_quat(omega, IDENTITY, m)
    # compare in normalized time u = t / t_N
    w = batch.t_n ** np.arange(m + 1)[:, None]
    k = min(pic.degree, tay.degree) + 1
    np.testing.assert_allclose(pic.coeffs[:k] * w[:k], tay.coeffs[:k] * w[:k], atol=1e-10)


def test_np_dpc_contracts_after_second_iteration():
    batch, omega, _ = _coning()
    res = picard_np_solve(omega, "quat", 17, StopRule(kind="maxiter", max_iter=6), span=batch.t_n)
    h = np.array(res.dpc_history)
    assert batch.t_n * np.abs(omega(batch.times)).max() < 1
    assert np.all(h[3:] < h[2:-1])


def test_np_norm_approaches_unity():
    batch, omega, _ = _coning()
    t = np.linspace(0, batch.t_n, 9)
    errs = []
    for k in range(1, 7):
        res = picard_np_solve(omega, "quat", 17, StopRule(kind="maxiter", max_iter=k), span=batch.t_n)
        errs.append(np.abs(np.linalg.norm(res.poly(t), axis=1) - 1).max())
    assert all(b <= a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-12


def test_np_quat_and_rod_agree_on_coning():
    batch, omega, _ = _coning()
    q = picard_np_solve(omega, "quat", 17, TIGHT, span=batch.t_n).poly
    g = picard_np_solve(omega, "rod", 17, TIGHT, span=batch.t_n).poly
    t = np.linspace(0, batch.t_n, 9)
    np.testing.assert_allclose(quat_from_rodrigues(g(t)), q(t), atol=1e-10)


# -- Chebyshev basis


def test_gamma_of_constant():
    g = gamma_coeffs(lambda tau: np.tile([1.0, -2.0, 3.0], (tau.size, 1)), 5, 8)
    np.testing.assert_allclose(g[0], [1, -2, 3], atol=1e-14)
    np.testing.assert_allclose(g[1:], 0, atol=1e-14)


@pytest.mark.parametrize("k", [1, 3])
def test_gamma_recovers_basis_functions(k):
    g = gamma_coeffs(lambda tau: np.cos(k * np.arccos(tau)), 7, 8)
    expect = np.zeros((8, 1))
    expect[k] = 1.0
    np.testing.assert_allclose(g, expect, atol=1e-14)


def test_gamma_rejects_too_few_nodes():
    with pytest.raises(ValueError):
        gamma_coeffs(lambda tau: tau, 5, 5)


def test_chebyshev_nodes_are_roots():
    x = chebyshev_nodes(9)
    np.testing.assert_allclose(np.cos(9 * np.arccos(x)), 0, atol=1e-14)


def test_cheb_first_rod_iterate_is_integral_of_rate():
    omega = ChebPoly([[0.1, 0.2, 0.3], [1.0, -1.0, 0.5], [0.3, 0.0, -0.2]], 0.01)
    s = picard_cheb_step(cheb_initial("rod", 8, 0.01), omega, "rod")
    np.testing.assert_allclose(s.iterate.coeffs, 0.005 * cheb_integrate(omega.coeffs), atol=1e-18)


def test_cheb_zero_rate_keeps_initial_quaternion():
    s = picard_cheb_step(cheb_initial("quat", 6, 0.01, Q0), ChebPoly(np.zeros((1, 3)), 0.01), "quat", Q0)
    assert s.dpc == 0.0
    np.testing.assert_allclose(s.iterate(np.linspace(-1, 1, 5)), np.tile(Q0, (5, 1)), atol=1e-16)


@pytest.mark.parametrize("family", ["rot_full", "rot_t3", "rot_t2", "rod"])
def test_cheb_constant_rate_vector_families(family):
    w = np.array([0.3, -0.4, 1.2])
    t_n = 0.05
    m = 6
    res = picard_cheb_solve(ChebPoly([w], t_n), family, m, TIGHT, n_nodes=m + 1 if family == "rot_full" else None)
    tau = np.linspace(-1, 1, 21)
    t = (1 + tau) * t_n / 2
    if family == "rod":
        ang = np.linalg.norm(w) * t
        ref = (2 * np.tan(ang / 2) / np.linalg.norm(w))[:, None] * w
        np.testing.assert_allclose(res.poly(tau), ref, atol=1e-12)
    else:
        np.testing.assert_allclose(res.poly(tau), t[:, None] * w, atol=1e-12)


def test_cheb_constant_rate_quat():
    res = picard_cheb_solve(ChebPoly([[0, 0, 1.0]], 0.1), "quat", 12, TIGHT, IDENTITY)
    tau = np.linspace(-1, 1, 11)
    t = (1 + tau) * 0.05
    np.testing.assert_allclose(res.poly(tau), np.c_[np.cos(t / 2), np.zeros((11, 2)), np.sin(t / 2)], atol=1e-12)


def test_cheb_quat_matches_ode_solution_from_arbitrary_start():
    batch, _, omega = _coning(fc=30.0)
    res = picard_cheb_solve(omega, "quat", 12, TIGHT, Q0)
    t = np.linspace(0, batch.t_n, 7)
    ref = integrate(quat_rhs(omega.at_time), Q0, t)
    np.testing.assert_allclose(res.poly.at_time(t), ref, atol=1e-13)


def test_cheb_norm_preserved_at_convergence():
    _, _, omega = _coning(fc=50.0)
    res = picard_cheb_solve(omega, "quat", 9, TIGHT)
    assert res.converged
    assert np.abs(np.linalg.norm(res.poly(np.linspace(-1, 1, 201)), axis=1) - 1).max() < 1e-10


def test_cheb_families_agree_on_coning():
    _, _, omega = _coning()
    tau = np.linspace(-1, 1, 9)
    q = picard_cheb_solve(omega, "quat", 9, TIGHT).poly(tau)
    g = quat_from_rodrigues(picard_cheb_solve(omega, "rod", 9, TIGHT).poly(tau))
    s = quat_from_rotvec(picard_cheb_solve(omega, "rot_full", 9, TIGHT).poly(tau))
    np.testing.assert_allclose(g, q, atol=1e-10)
    np.testing.assert_allclose(s, q, atol=1e-10)


def test_cheb_coefficients_decay_on_coning():
    _, _, omega = _coning(fc=30.0)
    b = picard_cheb_solve(omega, "quat", 14, TIGHT).poly.coeffs
    mags = np.linalg.norm(b[1:], axis=1)
    assert np.all(mags[1:] < mags[:-1])


def test_cheb_strict_mode_raises():
    _, _, omega = _coning(fc=100.0)
    with pytest.raises(ConvergenceError):
        picard_cheb_solve(omega, "quat", 9, StopRule(tol=1e-40, max_iter=3, strict=True))


def test_cheb_requires_room_for_the_rate_integral():
    with pytest.raises(ValueError):
        picard_cheb_solve(ChebPoly(np.ones((5, 3))), "quat", 4)
    with pytest.raises(ValueError):
        picard_cheb_solve(ChebPoly(np.ones((2, 3))), "dcm", 4)


def test_state_types_are_immutable():
    s = np_initial("rod", 4)
    c = cheb_initial("rod", 4, 1.0)
    assert isinstance(s, NpIterState) and isinstance(c, ChebIterState)
    with pytest.raises(AttributeError):
        s.index = 3
