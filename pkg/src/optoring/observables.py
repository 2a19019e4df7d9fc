"""Transmission amplitudes, phase spectra and group delays.

The output field of the probed port is input minus the leaked intracavity
tone, t = 1 - 2*kappa*eta, so T = |t|^2 is the normalized transmissivity.
The group delay is the detuning derivative of the transmission phase,
evaluated by a central difference with automatic step halving.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import DriveSetup, SystemParams
from .response import ProbePort, SidebandMode, sideband_response
from .steady import SteadyState, solve_steady_state

_TAU_REL_TOL = 1e-3
_TAU_MAX_HALVINGS = 30


@dataclass(frozen=True)
class SpectrumRow:
    """One sweep point: transmissions, unwrapped phases and delays per port."""

    delta_over_omega_m: float
    t_a: complex
    t_c: complex
    T_a: float
    T_c: float
    phi_a: float
    phi_c: float
    tau_a: float
    tau_c: float
    status: str = "ok"


def transmission_amplitude(response: complex, kappa: float) -> complex:
    """Output amplitude of the probed port, t = 1 - 2*kappa*response."""
    return 1.0 - 2.0 * kappa * response


def phase_spectrum(amplitudes) -> np.ndarray:
    """Unwrapped phases of a detuning-ordered list of complex amplitudes.

    The first phase lies in (-pi, pi]; each successive phase is shifted by
    multiples of 2*pi to keep steps below pi in magnitude.
    """
    amps = np.asarray(amplitudes, dtype=complex)
    if amps.size == 0:
        raise ValueError("phase_spectrum needs at least one amplitude")
    return np.unwrap(np.angle(amps))


def _wrapped_phase_step(t_plus: complex, t_minus: complex) -> float:
    """Phase increment arg(t+) - arg(t-) mapped to (-pi, pi]."""
    d = np.angle(t_plus) - np.angle(t_minus)
    return float((d + math.pi) % (2.0 * math.pi) - math.pi)


class _StepTooLarge(Exception):
    pass


def group_delay_at(params: SystemParams, steady: SteadyState, delta: float,
                   port: ProbePort, h: float | None = None,
                   mode: SidebandMode = SidebandMode.TWO) -> float:
    """Group delay d(arg t)/d(delta) at one detuning, reusing a steady state.

    Central difference with step halving until two consecutive estimates agree
    to a relative 10^-3; a phase step above pi/2 also triggers halving since
    the unwrapped increment would be ambiguous at pi.
    """
    if h is None:
        h = 1e-6 * params.omega_m
    if h <= 0:
        raise ValueError(f"finite-difference step must be positive, got {h!r}")

    def tau_of(step: float) -> float:
        t_plus = transmission_amplitude(
            sideband_response(params, steady, delta + step, port, mode).eta_or_xi,
            params.kappa)
        t_minus = transmission_amplitude(
            sideband_response(params, steady, delta - step, port, mode).eta_or_xi,
            params.kappa)
        if t_plus == 0 or t_minus == 0:
            raise RuntimeError(f"vanishing transmission at stencil point delta = {delta!r}")
        d = _wrapped_phase_step(t_plus, t_minus)
        if abs(d) > 0.5 * math.pi:
            raise _StepTooLarge()
        return d / (2.0 * step)

    prev = None
    for _ in range(_TAU_MAX_HALVINGS):
        try:
            cur = tau_of(h)
        except _StepTooLarge:
            h *= 0.5
            prev = None
            continue
        if prev is not None:
            if abs(prev - cur) / max(abs(cur), 1e-12) < _TAU_REL_TOL:
                return cur
        prev = cur
        h *= 0.5
    raise RuntimeError(
        f"group delay did not converge at delta = {delta!r} (last h = {h!r})")


def group_delay(params: SystemParams, drives: DriveSetup, delta: float,
                port: ProbePort, h: float | None = None,
                mode: SidebandMode = SidebandMode.TWO) -> float:
    """Group delay at one detuning, solving the steady state first."""
    steady = solve_steady_state(params, drives)
    return group_delay_at(params, steady, delta, port, h, mode)
