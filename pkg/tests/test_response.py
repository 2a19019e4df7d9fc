"""Linearized sideband response: closed forms, symmetries, conditioning."""
import math

import numpy as np
import pytest

from optoring import (ProbePort, SidebandMode, assemble_sideband_system,
                      build_params, default_config, make_drives,
                      sideband_response, solve_steady_state)


def _params(**over):
    raw = default_config()
    raw.update(over)
    return build_params(raw)


def _steady(p, delta, P_a, P_c):
    return solve_steady_state(p, make_drives(p, delta, P_a, P_c))


def test_bare_cavity_closed_form():
    # g = J = 0: eta = 1 / (i*(Delta - delta) + kappa_t)
    p = _params(g_rad_s=0.0, J_hz=0.0)
    st = _steady(p, p.omega_m, 100e-9, 100e-9)
    for d in (0.97 * p.omega_m, p.omega_m, 1.03 * p.omega_m):
        eta = sideband_response(p, st, d, ProbePort.A).eta_or_xi
        want = 1.0 / (1j * (p.omega_m - d) + p.kappa_t)
        assert abs(eta - want) <= 1e-10 * abs(want)


def test_ring_coupling_closed_form():
    # g = 0, J > 0: eta = Omega / (Omega^2 + J^2) with Omega = i(Delta-delta)+kappa_t
    p = _params(g_rad_s=0.0, J_hz=5e5)
    st = _steady(p, p.omega_m, 100e-9, 100e-9)
    for d in (0.95 * p.omega_m, 1.001 * p.omega_m):
        omega = 1j * (p.omega_m - d) + p.kappa_t
        want = omega / (omega * omega + p.J ** 2)
        eta = sideband_response(p, st, d, ProbePort.A).eta_or_xi
        assert abs(eta - want) <= 1e-10 * abs(want)
        # the cross response picks up the -iJ path
        xi_cross = sideband_response(p, st, d, ProbePort.A).amplitudes[2]
        want_cross = -1j * p.J / (omega * omega + p.J ** 2)
        assert abs(xi_cross - want_cross) <= 1e-10 * abs(want_cross)


def test_probe_port_selects_rhs_row():
    p = _params()
    st = _steady(p, p.omega_m, 1e-5, 100e-9)
    sa = assemble_sideband_system(p, st, p.omega_m, ProbePort.A)
    sc = assemble_sideband_system(p, st, p.omega_m, ProbePort.C)
    assert sa.rhs[0] == 1.0 and sa.rhs[2] == 0.0
    assert sc.rhs[2] == 1.0 and sc.rhs[0] == 0.0


def test_matrix_diagonal_terms():
    p = _params()
    st = _steady(p, p.omega_m, 1e-5, 100e-9)
    d = 1.01 * p.omega_m
    m = assemble_sideband_system(p, st, d, ProbePort.A).matrix
    assert m[0, 0] == pytest.approx(1j * (st.delta_eff - d) + p.kappa_t, rel=1e-12)
    assert m[1, 1] == pytest.approx(p.kappa_t - 1j * (st.delta_eff + d), rel=1e-12)
    assert m[4, 4] == pytest.approx(1j * (p.omega_m - d) + p.gamma, rel=1e-12)
    assert m[5, 5] == pytest.approx(p.gamma - 1j * (p.omega_m + d), rel=1e-12)


def test_pump_swap_swaps_eta_xi():
    p = _params()
    d1 = make_drives(p, -p.omega_m, 1e-5, 100e-9)
    d2 = make_drives(p, -p.omega_m, 100e-9, 1e-5)
    s1 = solve_steady_state(p, d1)
    s2 = solve_steady_state(p, d2)
    for d in (-1.015 * p.omega_m, -0.99 * p.omega_m):
        eta = sideband_response(p, s1, d, ProbePort.A).eta_or_xi
        xi = sideband_response(p, s2, d, ProbePort.C).eta_or_xi
        assert eta == pytest.approx(xi, rel=1e-10)


def test_solution_solves_system():
    p = _params()
    st = _steady(p, p.omega_m, 1e-3, 100e-9)
    sys_ = assemble_sideband_system(p, st, 0.999 * p.omega_m, ProbePort.A)
    sol = sideband_response(p, st, 0.999 * p.omega_m, ProbePort.A)
    res = sys_.matrix @ sol.amplitudes - sys_.rhs
    assert np.max(np.abs(res)) <= 1e-10


def test_literal_mode_matches_far_detuned():
    # with the probe far from all resonances the counter-rotating closure
    # barely matters
    p = _params()
    st = _steady(p, p.omega_m, 1e-5, 100e-9)
    d = p.omega_m + 1e3 * p.kappa_t
    two = sideband_response(p, st, d, ProbePort.A, SidebandMode.TWO).eta_or_xi
    lit = sideband_response(p, st, d, ProbePort.A, SidebandMode.LITERAL).eta_or_xi
    assert abs(two - lit) / abs(two) < 1e-3


def test_literal_mode_differs_near_resonance():
    p = _params()
    st = _steady(p, p.omega_m, 1e-3, 100e-9)
    d = st.delta_eff
    two = sideband_response(p, st, d, ProbePort.A, SidebandMode.TWO).eta_or_xi
    lit = sideband_response(p, st, d, ProbePort.A, SidebandMode.LITERAL).eta_or_xi
    assert two != lit


def test_stale_steady_state_rejected():
    import dataclasses
    p = _params()
    st = _steady(p, p.omega_m, 1e-5, 100e-9)
    bad = dataclasses.replace(st, residual=1e-6)
    with pytest.raises(ValueError, match="residual"):
        assemble_sideband_system(p, bad, p.omega_m, ProbePort.A)


def test_response_linear_in_probe():
    # system is assembled per unit probe, so eta is probe-independent;
    # doubling the rhs must double the solution
    p = _params()
    st = _steady(p, p.omega_m, 1e-5, 100e-9)
    sys_ = assemble_sideband_system(p, st, p.omega_m, ProbePort.A)
    x1 = np.linalg.solve(sys_.matrix, sys_.rhs)
    x2 = np.linalg.solve(sys_.matrix, 2.0 * sys_.rhs)
    assert np.allclose(x2, 2.0 * x1, rtol=1e-12, atol=0.0)
