"""Independent time-domain check of the frequency-domain pipeline.

Integrates the three mean-field ODEs with a fixed-step classical RK4 from
zero initial conditions, probe tone included, then extracts the probe-port
sideband amplitude by projecting the settled tail of the trajectory onto
exp(+i*delta*t).  No linearization is involved, so agreement with the 6x6
sideband solve validates both the steady state and the response matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .params import DriveSetup, SystemParams
from .response import ProbePort
from .steady import solve_steady_state

_STEPS_PER_MECH_PERIOD = 100
_DIVERGENCE_FACTOR = 1e3


class DivergenceError(RuntimeError):
    """The trajectory left the neighborhood of the steady state (unstable point)."""


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled tail of an integration run.

    times: sample instants (s), uniform spacing dt.
    A, C, B: complex mode amplitudes at those instants.
    dt: sample spacing (s); equals the integrator step times the store stride.
    """

    times: np.ndarray
    A: np.ndarray
    C: np.ndarray
    B: np.ndarray
    dt: float

    def __post_init__(self) -> None:
        if not (np.all(np.isfinite(self.A)) and np.all(np.isfinite(self.C))
                and np.all(np.isfinite(self.B))):
            raise ValueError("trajectory contains non-finite samples")


@njit(cache=True)
def _rk4(n_steps, dt, delta, kt, g, J, wm, gam, eps_a, eps_c,
         eps_sa, eps_sc, delta_s, amp_limit, store_from, stride,
         outA, outC, outB):  # pragma: no cover - jitted
    A = 0.0 + 0.0j
    C = 0.0 + 0.0j
    B = 0.0 + 0.0j
    idx = 0
    for n in range(n_steps):
        t = n * dt
        # probe tone carries the explicit time dependence
        ph1 = np.exp(-1j * delta_s * t)
        ph2 = np.exp(-1j * delta_s * (t + 0.5 * dt))
        ph4 = np.exp(-1j * delta_s * (t + dt))

        bs = B + np.conj(B)
        k1A = -(1j * delta + kt) * A - 1j * g * A * bs - 1j * J * C + eps_a + eps_sa * ph1
        k1C = -(1j * delta + kt) * C - 1j * g * C * bs - 1j * J * A + eps_c + eps_sc * ph1
        k1B = -(1j * wm + gam) * B - 1j * g * (abs(A) ** 2 + abs(C) ** 2)

        A2 = A + 0.5 * dt * k1A
        C2 = C + 0.5 * dt * k1C
        B2 = B + 0.5 * dt * k1B
        bs = B2 + np.conj(B2)
        k2A = -(1j * delta + kt) * A2 - 1j * g * A2 * bs - 1j * J * C2 + eps_a + eps_sa * ph2
        k2C = -(1j * delta + kt) * C2 - 1j * g * C2 * bs - 1j * J * A2 + eps_c + eps_sc * ph2
        k2B = -(1j * wm + gam) * B2 - 1j * g * (abs(A2) ** 2 + abs(C2) ** 2)

        A3 = A + 0.5 * dt * k2A
        C3 = C + 0.5 * dt * k2C
        B3 = B + 0.5 * dt * k2B
        bs = B3 + np.conj(B3)
        k3A = -(1j * delta + kt) * A3 - 1j * g * A3 * bs - 1j * J * C3 + eps_a + eps_sa * ph2
        k3C = -(1j * delta + kt) * C3 - 1j * g * C3 * bs - 1j * J * A3 + eps_c + eps_sc * ph2
        k3B = -(1j * wm + gam) * B3 - 1j * g * (abs(A3) ** 2 + abs(C3) ** 2)

        A4 = A + dt * k3A
        C4 = C + dt * k3C
        B4 = B + dt * k3B
        bs = B4 + np.conj(B4)
        k4A = -(1j * delta + kt) * A4 - 1j * g * A4 * bs - 1j * J * C4 + eps_a + eps_sa * ph4
        k4C = -(1j * delta + kt) * C4 - 1j * g * C4 * bs - 1j * J * A4 + eps_c + eps_sc * ph4
        k4B = -(1j * wm + gam) * B4 - 1j * g * (abs(A4) ** 2 + abs(C4) ** 2)

        A = A + (dt / 6.0) * (k1A + 2.0 * k2A + 2.0 * k3A + k4A)
        C = C + (dt / 6.0) * (k1C + 2.0 * k2C + 2.0 * k3C + k4C)
        B = B + (dt / 6.0) * (k1B + 2.0 * k2B + 2.0 * k3B + k4B)

        if n % 1024 == 0:
            if abs(A) > amp_limit or abs(C) > amp_limit or not (
                    np.isfinite(A.real) and np.isfinite(C.real) and np.isfinite(B.real)):
                return n, -1  # diverged
        m = n + 1
        if m >= store_from and (m - store_from) % stride == 0:
            outA[idx] = A
            outC[idx] = C
            outB[idx] = B
            idx = idx + 1
    return n_steps, idx


def integrate_mean_field(params: SystemParams, drives: DriveSetup,
                         probe: tuple[ProbePort, float, float] | None,
                         t_final: float, dt: float | None = None,
                         store_last: float | None = None,
                         stride: int = 4) -> Trajectory:
    """RK4 integration of the mean-field equations from zero initial conditions.

    probe is (port, eps_s, delta) or None for an unprobed run.  The returned
    trajectory holds the final store_last seconds (default 2/gamma) sampled
    every stride integrator steps.
    """
    mech_period = 2.0 * math.pi / params.omega_m
    if dt is None:
        dt = mech_period / _STEPS_PER_MECH_PERIOD
    if dt > mech_period / 50.0:
        raise ValueError(f"dt too coarse: {dt!r} > {mech_period / 50.0!r}")
    if t_final < 10.0 / params.gamma:
        raise ValueError(f"t_final {t_final!r} below settling time {10.0 / params.gamma!r}")
    if store_last is None:
        store_last = 2.0 / params.gamma
    if stride < 1:
        raise ValueError(f"stride must be at least 1, got {stride!r}")

    n_steps = int(round(t_final / dt))
    n_tail_steps = min(n_steps, int(round(store_last / dt)))
    store_from = n_steps - n_tail_steps + 1
    n_store = (n_tail_steps - 1) // stride + 1

    eps_sa = eps_sc = 0.0
    delta_s = 0.0
    if probe is not None:
        port, eps_s, delta_s = probe
        if port is ProbePort.A:
            eps_sa = eps_s
        else:
            eps_sc = eps_s

    # divergence threshold from the undamped single-mode amplitude scale
    amp_scale = max(drives.eps_a, drives.eps_c, eps_sa, eps_sc) / params.kappa_t
    amp_limit = _DIVERGENCE_FACTOR * max(amp_scale, 1.0)

    outA = np.zeros(n_store, dtype=np.complex128)
    outC = np.zeros(n_store, dtype=np.complex128)
    outB = np.zeros(n_store, dtype=np.complex128)
    n_done, idx = _rk4(n_steps, dt, drives.delta, params.kappa_t, params.g,
                       params.J, params.omega_m, params.gamma, drives.eps_a,
                       drives.eps_c, eps_sa, eps_sc, delta_s, amp_limit,
                       store_from, stride, outA, outC, outB)
    if idx < 0:
        raise DivergenceError(
            f"trajectory diverged at t = {n_done * dt:.3e} s "
            f"(|amplitude| exceeded {amp_limit:.3e})")
    if idx != n_store:
        raise RuntimeError(f"sample bookkeeping error: stored {idx} of {n_store}")
    times = (store_from + stride * np.arange(n_store)) * dt
    return Trajectory(times=times, A=outA, C=outC, B=outB, dt=dt * stride)


def _trapz(values: np.ndarray, dt: float) -> complex:
    if values.size < 2:
        raise ValueError("window too short for quadrature")
    return complex(dt * (values.sum() - 0.5 * (values[0] + values[-1])))


def demodulate(traj: Trajectory, delta: float, window: float,
               component: str = "A") -> complex:
    """Coefficient of exp(-i*delta*t) in a trajectory component.

    Projects the final `window` seconds onto exp(+i*delta*t) with trapezoidal
    quadrature after removing the window mean (DC rejection).  The window must
    be an integer number of probe periods and close to an integer number of
    mechanical periods so both leakage terms cancel.
    """
    if component not in ("A", "C", "B"):
        raise ValueError(f"unknown trajectory component {component!r}")
    x = getattr(traj, component)
    t = traj.times
    span = t[-1] - t[0]
    if window > span + 0.5 * traj.dt:
        raise ValueError(f"window {window!r} longer than stored trajectory {span!r}")
    period = 2.0 * math.pi / abs(delta)
    n_periods = window / period
    if abs(n_periods - round(n_periods)) > 1e-6 * max(n_periods, 1.0):
        raise ValueError(f"window is not an integer number of probe periods "
                         f"({n_periods!r} periods)")

    n_win = int(round(window / traj.dt)) + 1
    xs = x[-n_win:]
    ts = t[-n_win:]
    w = ts[-1] - ts[0]

    # settled check: mean |A| over the first and last probe period of the window
    # catches growth, limit cycles and unfinished ring-down; ppm residuals pass
    n_per = max(2, int(round(period / traj.dt)))
    head = np.abs(traj.A[-n_win:-n_win + n_per]).mean()
    tail = np.abs(traj.A[-n_per:]).mean()
    drift = abs(tail - head) / max(head, 1e-300)
    if drift > 1e-4:
        raise DivergenceError(
            f"trajectory not settled over the window (drift {drift:.3e})")

    dc = _trapz(xs, traj.dt) / w
    phase = np.exp(1j * delta * ts)
    return _trapz((xs - dc) * phase, traj.dt) / w


def oracle_response(params: SystemParams, drives: DriveSetup, delta: float,
                    port: ProbePort = ProbePort.A,
                    eps_s: float | None = None,
                    t_final: float | None = None,
                    dt: float | None = None) -> complex:
    """Probe-port sideband amplitude per unit probe drive, from time domain.

    The probe amplitude defaults to 10^-3 of the dominant rate so the response
    stays in the linear regime; the result is the demodulated amplitude
    divided by eps_s and is directly comparable to the 6x6 response.
    """
    if eps_s is None:
        eps_s = 1e-3 * max(drives.eps_a, drives.eps_c, params.kappa_t)
    if t_final is None:
        t_final = 10.0 / params.gamma
    traj = integrate_mean_field(params, drives, (port, eps_s, delta),
                                t_final, dt=dt)
    window = _pick_window(traj, delta, params.omega_m)
    comp = "A" if port is ProbePort.A else "C"
    return demodulate(traj, delta, window, component=comp) / eps_s


def _pick_window(traj: Trajectory, delta: float, omega_m: float) -> float:
    """Longest integer-period window within ~60% of the stored tail whose
    length is also within 1% of an integer number of mechanical periods."""
    span = traj.times[-1] - traj.times[0]
    period = 2.0 * math.pi / abs(delta)
    mech_period = 2.0 * math.pi / omega_m
    m_max = int(math.floor(0.6 * span / period))
    if m_max < 2:
        raise ValueError("stored trajectory too short for demodulation")
    for m in range(m_max, max(1, m_max - 200), -1):
        w = m * period
        n_mech = w / mech_period
        if abs(n_mech - round(n_mech)) <= 0.01:
            return w
    return m_max * period  # detuning-period grid never aligns; accept leakage
