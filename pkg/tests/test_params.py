"""Unit construction, config parsing and derived quantities."""
import math

import pytest

from optoring import (C_LIGHT, HBAR, Sideband, build_drives, build_params,
                      coupling_from_geometry, default_config,
                      detuning_for_sideband, make_drives, pump_amplitude)


def test_default_config_builds():
    raw = default_config()
    p = build_params(raw)
    d = build_drives(raw, p)
    assert p.omega_m == 2.0 * math.pi * 1e7
    assert p.gamma == 2.0 * math.pi * 1e2
    assert p.kappa == 2.0 * math.pi * 1e6
    assert p.kappa_in == 2.0 * math.pi * 1e6
    assert d.P_a == d.P_c == 100e-9


def test_kappa_t_is_exact_sum():
    p = build_params(default_config())
    assert p.kappa_t == p.kappa + p.kappa_in  # identity, not approximate


def test_hz_keys_scaled_by_two_pi():
    raw = default_config()
    raw["J_hz"] = 123.0
    p = build_params(raw)
    assert p.J == pytest.approx(2.0 * math.pi * 123.0, rel=1e-15)


def test_pump_amplitude_value():
    # 100 nW into kappa = 2pi MHz at lambda = 1064 nm
    omega_c = 2.0 * math.pi * C_LIGHT / 1.064e-6
    eps = pump_amplitude(100e-9, 2.0 * math.pi * 1e6, omega_c)
    assert eps == pytest.approx(math.sqrt(2.0 * 2.0 * math.pi * 1e6 * 100e-9
                                          / (HBAR * omega_c)), rel=1e-15)
    assert eps == pytest.approx(2.5944026540e9, rel=1e-9)


def test_pump_amplitude_scales_sqrt_power():
    omega_c = 2.0 * math.pi * C_LIGHT / 1.064e-6
    e1 = pump_amplitude(1e-7, 1e6, omega_c)
    e4 = pump_amplitude(4e-7, 1e6, omega_c)
    assert e4 == pytest.approx(2.0 * e1, rel=1e-14)
    assert pump_amplitude(0.0, 1e6, omega_c) == 0.0


def test_pump_amplitude_rejects_bad_inputs():
    with pytest.raises(ValueError):
        pump_amplitude(-1e-9, 1e6, 1e15)
    with pytest.raises(ValueError):
        pump_amplitude(1e-9, 0.0, 1e15)
    with pytest.raises(ValueError):
        pump_amplitude(1e-9, 1e6, -1e15)


def test_coupling_from_geometry_value():
    # (omega_c/l) * sqrt(hbar / (2 m omega_m))
    omega_m = 2.0 * math.pi * 1e7
    g = coupling_from_geometry(5e-12, 1e-3, 1.064e-6, omega_m)
    omega_c = 2.0 * math.pi * C_LIGHT / 1.064e-6
    x_zpf = math.sqrt(HBAR / (2.0 * 5e-12 * omega_m))
    assert g == pytest.approx(omega_c / 1e-3 * x_zpf, rel=1e-15)
    assert g == pytest.approx(725.2823177186, rel=1e-10)


def test_default_g_comes_from_geometry():
    p = build_params(default_config())
    assert p.g == pytest.approx(725.2823177186, rel=1e-10)


def test_g_override_key():
    raw = default_config()
    raw["g_rad_s"] = 1234.5
    assert build_params(raw).g == 1234.5
    raw["g_rad_s"] = 0.0  # bare cavity allowed
    assert build_params(raw).g == 0.0
    raw["g_rad_s"] = -1.0
    with pytest.raises(ValueError):
        build_params(raw)


def test_missing_key_is_named():
    raw = default_config()
    del raw["mass_kg"]
    with pytest.raises(ValueError, match="mass_kg"):
        build_params(raw)


def test_bad_value_is_named():
    raw = default_config()
    raw["kappa_hz"] = -1e6
    with pytest.raises(ValueError, match="kappa_hz"):
        build_params(raw)


def test_sideband_detuning_signs():
    omega_m = 2.0 * math.pi * 1e7
    assert detuning_for_sideband(Sideband.RED, omega_m) == omega_m
    assert detuning_for_sideband(Sideband.BLUE, omega_m) == -omega_m


def test_drive_sideband_selection():
    raw = default_config()
    p = build_params(raw)
    raw["delta_sideband"] = "red"
    assert build_drives(raw, p).delta == p.omega_m
    raw["delta_sideband"] = "blue"
    assert build_drives(raw, p).delta == -p.omega_m
    del raw["delta_sideband"]
    raw["delta_rad_s"] = 0.5 * p.omega_m
    assert build_drives(raw, p).delta == 0.5 * p.omega_m


def test_drive_rejects_unknown_sideband():
    raw = default_config()
    p = build_params(raw)
    raw["delta_sideband"] = "sideways"
    with pytest.raises(ValueError, match="delta_sideband"):
        build_drives(raw, p)


def test_make_drives_amplitudes():
    p = build_params(default_config())
    d = make_drives(p, p.omega_m, 400e-9, 100e-9)
    assert d.eps_a == pytest.approx(2.0 * d.eps_c, rel=1e-14)
    assert d.eps_c == pytest.approx(2.5944026540e9, rel=1e-9)


def test_system_params_validation():
    p = build_params(default_config())
    with pytest.raises(ValueError):
        type(p)(**{**p.__dict__, "kappa_t": p.kappa_t * (1 + 1e-15)})
    with pytest.raises(ValueError):
        type(p)(**{**p.__dict__, "gamma": 0.0})
