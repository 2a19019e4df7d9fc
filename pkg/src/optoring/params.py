"""Physical parameters and drive configuration for the two-mode ring cavity.

All frequencies and rates are stored as angular quantities (rad/s).  Config
files quote laboratory-style values in Hz; `build_params` applies the 2*pi.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

HBAR = 1.054571817e-34  # J s
C_LIGHT = 2.99792458e8  # m/s

# Config keys quoted in Hz; converted to rad/s on ingest.
_HZ_KEYS = ("omega_m_hz", "gamma_hz", "kappa_hz", "kappa_in_hz", "J_hz")
_REQUIRED_PARAM_KEYS = _HZ_KEYS + ("mass_kg", "length_m", "lambda_m")


class Sideband(Enum):
    RED = "red"
    BLUE = "blue"


@dataclass(frozen=True)
class SystemParams:
    """Static parameters of the cavity-mechanics model.

    omega_m, gamma: mechanical resonance and damping (rad/s).
    kappa, kappa_in, kappa_t: external, intrinsic and total optical loss (rad/s),
        with kappa_t = kappa + kappa_in by construction.
    g: single-photon optomechanical coupling (rad/s).
    J: coupling between the clockwise and counter-clockwise modes (rad/s).
    mass, length, lambda_pump: geometry (kg, m, m).
    omega_c: optical angular frequency of the pump/cavity (rad/s).
    """

    omega_m: float
    gamma: float
    kappa: float
    kappa_in: float
    kappa_t: float
    g: float
    J: float
    mass: float
    length: float
    lambda_pump: float
    omega_c: float

    def __post_init__(self) -> None:
        for name in ("omega_m", "gamma", "kappa"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.kappa_in < 0:
            raise ValueError(f"kappa_in must be nonnegative, got {self.kappa_in!r}")
        # exact identity, not a tolerance check
        if self.kappa_t != self.kappa_in + self.kappa:
            raise ValueError("kappa_t must equal kappa_in + kappa exactly")
        for name in ("g", "J"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative, got {getattr(self, name)!r}")
        for name in ("mass", "length", "lambda_pump", "omega_c"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")


@dataclass(frozen=True)
class DriveSetup:
    """Pump configuration: detuning, powers and derived amplitudes.

    delta: pump-cavity detuning Delta (rad/s, signed).
    P_a, P_c: pump powers into each propagation direction (W).
    eps_a, eps_c: pump amplitudes sqrt(2*kappa*P/(hbar*omega_c)) (1/s).
    """

    delta: float
    P_a: float
    P_c: float
    eps_a: float
    eps_c: float

    def __post_init__(self) -> None:
        if self.P_a < 0:
            raise ValueError(f"P_a must be nonnegative, got {self.P_a!r}")
        if self.P_c < 0:
            raise ValueError(f"P_c must be nonnegative, got {self.P_c!r}")
        if self.eps_a < 0 or self.eps_c < 0:
            raise ValueError("pump amplitudes must be nonnegative")


def pump_amplitude(power: float, kappa: float, omega: float) -> float:
    """Convert pump power (W) to a drive amplitude sqrt(2*kappa*P/(hbar*omega))."""
    if power < 0:
        raise ValueError(f"power must be nonnegative, got {power!r}")
    if kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa!r}")
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega!r}")
    return math.sqrt(2.0 * kappa * power / (HBAR * omega))


def coupling_from_geometry(mass: float, length: float, lambda_pump: float,
                           omega_m: float) -> float:
    """Optomechanical coupling g = (omega_c/l)*x_zpf for a cavity of length l.

    x_zpf = sqrt(hbar/(2*m*omega_m)) is the zero-point displacement.
    """
    for name, val in (("mass", mass), ("length", length),
                      ("lambda_pump", lambda_pump), ("omega_m", omega_m)):
        if val <= 0:
            raise ValueError(f"{name} must be positive, got {val!r}")
    omega_c = 2.0 * math.pi * C_LIGHT / lambda_pump
    x_zpf = math.sqrt(HBAR / (2.0 * mass * omega_m))
    return (omega_c / length) * x_zpf


def detuning_for_sideband(side: Sideband, omega_m: float) -> float:
    """Pump detuning for red (+omega_m) or blue (-omega_m) sideband operation."""
    if omega_m <= 0:
        raise ValueError(f"omega_m must be positive, got {omega_m!r}")
    return omega_m if side is Sideband.RED else -omega_m


def build_params(raw: dict) -> SystemParams:
    """Construct SystemParams from a raw config mapping.

    Frequencies under *_hz keys are plain Hz and get multiplied by 2*pi.
    g is taken from the optional g_rad_s key, or derived from geometry.
    """
    for key in _REQUIRED_PARAM_KEYS:
        if key not in raw:
            raise ValueError(f"missing config key: {key}")
    two_pi = 2.0 * math.pi
    omega_m = two_pi * float(raw["omega_m_hz"])
    gamma = two_pi * float(raw["gamma_hz"])
    kappa = two_pi * float(raw["kappa_hz"])
    kappa_in = two_pi * float(raw["kappa_in_hz"])
    J = two_pi * float(raw["J_hz"])
    mass = float(raw["mass_kg"])
    length = float(raw["length_m"])
    lambda_pump = float(raw["lambda_m"])
    if omega_m <= 0:
        raise ValueError(f"omega_m_hz must be positive, got {raw['omega_m_hz']!r}")
    if gamma <= 0:
        raise ValueError(f"gamma_hz must be positive, got {raw['gamma_hz']!r}")
    if kappa <= 0:
        raise ValueError(f"kappa_hz must be positive, got {raw['kappa_hz']!r}")
    if kappa_in < 0:
        raise ValueError(f"kappa_in_hz must be nonnegative, got {raw['kappa_in_hz']!r}")
    if "g_rad_s" in raw and raw["g_rad_s"] is not None:
        g = float(raw["g_rad_s"])
        if g < 0:
            raise ValueError(f"g_rad_s must be nonnegative, got {raw['g_rad_s']!r}")
    else:
        g = coupling_from_geometry(mass, length, lambda_pump, omega_m)
    omega_c = two_pi * C_LIGHT / lambda_pump
    return SystemParams(
        omega_m=omega_m, gamma=gamma, kappa=kappa, kappa_in=kappa_in,
        kappa_t=kappa + kappa_in, g=g, J=J, mass=mass, length=length,
        lambda_pump=lambda_pump, omega_c=omega_c,
    )


def make_drives(params: SystemParams, delta: float, P_a: float, P_c: float) -> DriveSetup:
    """Build a DriveSetup, deriving the pump amplitudes from the powers."""
    return DriveSetup(
        delta=delta, P_a=P_a, P_c=P_c,
        eps_a=pump_amplitude(P_a, params.kappa, params.omega_c),
        eps_c=pump_amplitude(P_c, params.kappa, params.omega_c),
    )


def build_drives(raw: dict, params: SystemParams) -> DriveSetup:
    """Construct the drive setup from a raw config mapping.

    Detuning comes either from delta_sideband ("red"/"blue") or an explicit
    delta_rad_s; powers from P_a_w and P_c_w.
    """
    if "delta_rad_s" in raw and raw["delta_rad_s"] is not None:
        delta = float(raw["delta_rad_s"])
    elif "delta_sideband" in raw and raw["delta_sideband"] is not None:
        label = str(raw["delta_sideband"]).lower()
        if label not in ("red", "blue"):
            raise ValueError(f"delta_sideband must be 'red' or 'blue', got {raw['delta_sideband']!r}")
        delta = detuning_for_sideband(Sideband(label), params.omega_m)
    else:
        raise ValueError("missing config key: delta_sideband or delta_rad_s")
    for key in ("P_a_w", "P_c_w"):
        if key not in raw:
            raise ValueError(f"missing config key: {key}")
    return make_drives(params, delta, float(raw["P_a_w"]), float(raw["P_c_w"]))


def load_config(path: str) -> tuple[SystemParams, DriveSetup]:
    """Read a JSON config file and build (SystemParams, DriveSetup)."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError("config file must contain a JSON object")
    params = build_params(raw)
    drives = build_drives(raw, params)
    return params, drives


def default_config() -> dict:
    """Raw config mapping with the baseline experimental parameter set."""
    return {
        "omega_m_hz": 1e7,
        "gamma_hz": 1e2,
        "kappa_hz": 1e6,
        "kappa_in_hz": 1e6,
        "J_hz": 1e3,
        "mass_kg": 5e-12,
        "length_m": 1e-3,
        "lambda_m": 1.064e-6,
        "delta_sideband": "red",
        "P_a_w": 100e-9,
        "P_c_w": 100e-9,
    }
