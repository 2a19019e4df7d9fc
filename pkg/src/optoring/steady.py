"""Nonlinear steady state of the pumped two-mode cavity.

The three mean-field equations reduce to a scalar self-consistency in the
total photon number N = |A0|^2 + |C0|^2: the mechanical displacement only
enters the optical equations through the effective detuning, which depends
on the fields only through N.  Given N, (A0, C0) solve a linear 2x2 system.
"""
from __future__ import annotations

from dataclasses import dataclass

from .params import DriveSetup, SystemParams

_FP_TOL = 1e-12
_FP_MAX_ITER = 10_000
_FP_ALPHA = 0.5  # damping of the fixed-point update
_CONTINUATION_STEPS = 20


@dataclass(frozen=True)
class SteadyState:
    """Converged mean fields and diagnostics.

    A0, C0: complex optical amplitudes (sqrt photons).
    B0: complex mechanical amplitude.
    N: total photon number |A0|^2 + |C0|^2.
    delta_eff: pump detuning shifted by the static mechanical displacement.
    residual: normalized max residual of the three steady-state equations.
    used_bisection: True if the damped fixed-point iteration failed to
        converge at some continuation step and the bracketed fallback ran.
    """

    A0: complex
    C0: complex
    B0: complex
    N: float
    delta_eff: float
    residual: float
    used_bisection: bool = False


def effective_detuning(N: float, params: SystemParams, delta: float) -> float:
    """Detuning including the static spring shift, Delta - 2 g^2 N wm/(wm^2+gamma^2)."""
    if N < 0:
        raise ValueError(f"N must be nonnegative, got {N!r}")
    wm, gam = params.omega_m, params.gamma
    return delta - 2.0 * params.g * params.g * N * wm / (wm * wm + gam * gam)


def _fields_at(N: float, params: SystemParams, delta: float,
               eps_a: float, eps_c: float) -> tuple[complex, complex, float]:
    """Solve the linear 2x2 optical system at fixed photon number N."""
    de = effective_detuning(N, params, delta)
    D = 1j * de + params.kappa_t
    det = D * D + params.J * params.J  # never 0 while kappa_t > 0
    A0 = (D * eps_a - 1j * params.J * eps_c) / det
    C0 = (D * eps_c - 1j * params.J * eps_a) / det
    return A0, C0, de


def _photon_map(N: float, params: SystemParams, delta: float,
                eps_a: float, eps_c: float) -> float:
    A0, C0, _ = _fields_at(N, params, delta, eps_a, eps_c)
    return abs(A0) ** 2 + abs(C0) ** 2


def _solve_fixed_point(params: SystemParams, delta: float, eps_a: float,
                       eps_c: float, N_start: float) -> tuple[float, bool]:
    """Damped iteration N <- (1-a)N + a f(N); bracketed bisection fallback.

    Returns (N, used_bisection).
    """
    N = N_start
    for _ in range(_FP_MAX_ITER):
        fN = _photon_map(N, params, delta, eps_a, eps_c)
        if abs(N - fN) / max(N, 1.0) < _FP_TOL:
            return N, False
        N = (1.0 - _FP_ALPHA) * N + _FP_ALPHA * fN

    # Fixed point did not settle (oscillation between branches); fall back to
    # bisection of N - f(N) on [0, upper] where f is bounded by the undamped
    # photon number.
    lo = 0.0
    hi = (eps_a * eps_a + eps_c * eps_c) / (params.kappa_t * params.kappa_t)
    g_lo = lo - _photon_map(lo, params, delta, eps_a, eps_c)  # <= 0
    g_hi = hi - _photon_map(hi, params, delta, eps_a, eps_c)
    grow = 0
    while g_lo * g_hi > 0 and grow < 60:
        hi *= 2.0
        g_hi = hi - _photon_map(hi, params, delta, eps_a, eps_c)
        grow += 1
    if g_lo * g_hi > 0:
        raise RuntimeError(
            f"steady state did not converge: no bracket for N - f(N), last N = {N:.6e}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        g_mid = mid - _photon_map(mid, params, delta, eps_a, eps_c)
        if g_lo * g_mid <= 0:
            hi = mid
        else:
            lo, g_lo = mid, g_mid
        if hi - lo < _FP_TOL * max(hi, 1.0):
            break
    return 0.5 * (lo + hi), True


def steady_residual(state: SteadyState, params: SystemParams,
                    drives: DriveSetup) -> float:
    """Max residual of the three steady-state equations, normalized.

    Normalization is max(eps_a, eps_c, omega_m*|B0|, 1) so the value is
    meaningful for both driven and undriven configurations.
    """
    A0, C0, B0 = state.A0, state.C0, state.B0
    bsum = B0 + B0.conjugate()
    r1 = (-(1j * drives.delta + params.kappa_t) * A0
          - 1j * params.g * A0 * bsum - 1j * params.J * C0 + drives.eps_a)
    r2 = (-(1j * drives.delta + params.kappa_t) * C0
          - 1j * params.g * C0 * bsum - 1j * params.J * A0 + drives.eps_c)
    n_phot = abs(A0) ** 2 + abs(C0) ** 2
    r3 = -(1j * params.omega_m + params.gamma) * B0 - 1j * params.g * n_phot
    scale = max(drives.eps_a, drives.eps_c, params.omega_m * abs(B0), 1.0)
    return max(abs(r1), abs(r2), abs(r3)) / scale


def solve_steady_state(params: SystemParams, drives: DriveSetup) -> SteadyState:
    """Solve the steady-state equations on the branch continuous from zero drive.

    Power continuation: both pump amplitudes are ramped from 10^-3 of their
    final value in log-spaced steps, warm-starting the photon number at each
    step, so a multistable configuration lands on the branch connected to the
    undriven solution.
    """
    if drives.eps_a == 0.0 and drives.eps_c == 0.0:
        state = SteadyState(A0=0j, C0=0j, B0=0j, N=0.0, delta_eff=drives.delta,
                            residual=0.0)
        return state

    N = 0.0
    used_bisection = False
    for k in range(1, _CONTINUATION_STEPS + 1):
        frac = 10.0 ** (-3.0 * (1.0 - k / _CONTINUATION_STEPS))
        N, fell_back = _solve_fixed_point(
            params, drives.delta, frac * drives.eps_a, frac * drives.eps_c, N)
        used_bisection = used_bisection or fell_back

    A0, C0, de = _fields_at(N, params, drives.delta, drives.eps_a, drives.eps_c)
    N_final = abs(A0) ** 2 + abs(C0) ** 2
    B0 = -1j * params.g * N_final / (1j * params.omega_m + params.gamma)
    state = SteadyState(A0=A0, C0=C0, B0=B0, N=N_final,
                        delta_eff=effective_detuning(N_final, params, drives.delta),
                        residual=0.0, used_bisection=used_bisection)
    res = steady_residual(state, params, drives)
    state = SteadyState(A0=A0, C0=C0, B0=B0, N=N_final, delta_eff=state.delta_eff,
                        residual=res, used_bisection=used_bisection)
    if res > 1e-10:
        raise RuntimeError(
            f"steady state residual {res:.3e} above tolerance (N = {N_final:.6e})")
    return state
