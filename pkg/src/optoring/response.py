"""Linearized sideband response around a steady operating point.

A weak probe at detuning delta from the pump adds small tones on top of the
steady fields.  Collecting terms oscillating as exp(-i*delta*t) and
exp(+i*delta*t) and conjugating the latter yields a closed 6x6 complex linear
system in (A+, conj(A-), C+, conj(C-), B+, conj(B-)).

Two closures are provided:
  - TWO (default): the upper sideband couples to the conjugate of the lower
    sideband, the standard two-tone linearization.
  - LITERAL: the conjugated equations are evaluated at the probe frequency
    itself (single-tone closure), with the probe drive appearing in both the
    direct and the conjugated probed-port rows.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .params import SystemParams
from .steady import SteadyState

_COND_LIMIT = 1e12
_RESIDUAL_TOL = 1e-10


class ProbePort(Enum):
    A = "a"  # clockwise
    C = "c"  # counter-clockwise


class SidebandMode(Enum):
    TWO = "two"
    LITERAL = "literal"


@dataclass(frozen=True)
class SidebandSystem:
    """Assembled 6x6 system for one probe detuning.

    Unknown ordering: (A+, conj(A-), C+, conj(C-), B+, conj(B-)).
    """

    matrix: np.ndarray
    rhs: np.ndarray
    delta: float
    port: ProbePort
    mode: SidebandMode


@dataclass(frozen=True)
class SidebandSolution:
    """Solved sideband amplitudes; eta_or_xi is the probed-port upper tone
    per unit probe amplitude (units of seconds)."""

    amplitudes: np.ndarray
    eta_or_xi: complex


def assemble_sideband_system(params: SystemParams, steady: SteadyState,
                             delta: float, port: ProbePort = ProbePort.A,
                             mode: SidebandMode = SidebandMode.TWO) -> SidebandSystem:
    """Build the linear system; probe amplitude normalized to 1."""
    if not np.isfinite(steady.residual) or steady.residual > _RESIDUAL_TOL:
        raise ValueError(
            f"steady state not converged (residual {steady.residual:.3e})")
    kt, g, J = params.kappa_t, params.g, params.J
    wm, gam = params.omega_m, params.gamma
    de = steady.delta_eff
    A0, C0 = steady.A0, steady.C0

    Om = 1j * (de - delta) + kt
    Phi = 1j * (wm - delta) + gam
    if mode is SidebandMode.TWO:
        Om_bar = kt - 1j * (de + delta)
        Phi_bar = gam - 1j * (wm + delta)
    else:
        Om_bar = np.conj(Om)
        Phi_bar = np.conj(Phi)

    ig = 1j * g
    iJ = 1j * J
    A0c, C0c = np.conj(A0), np.conj(C0)
    M = np.array([
        [Om,        0.0,       iJ,        0.0,       ig * A0,   ig * A0],
        [0.0,       Om_bar,    0.0,       -iJ,       -ig * A0c, -ig * A0c],
        [iJ,        0.0,       Om,        0.0,       ig * C0,   ig * C0],
        [0.0,       -iJ,       0.0,       Om_bar,    -ig * C0c, -ig * C0c],
        [ig * A0c,  ig * A0,   ig * C0c,  ig * C0,   Phi,       0.0],
        [-ig * A0c, -ig * A0,  -ig * C0c, -ig * C0,  0.0,       Phi_bar],
    ], dtype=complex)

    rhs = np.zeros(6, dtype=complex)
    row = 0 if port is ProbePort.A else 2
    rhs[row] = 1.0
    if mode is SidebandMode.LITERAL:
        # the conjugate of the probed-port equation keeps the (real) probe drive
        rhs[row + 1] = 1.0
    return SidebandSystem(matrix=M, rhs=rhs, delta=delta, port=port, mode=mode)


def sideband_response(params: SystemParams, steady: SteadyState, delta: float,
                      port: ProbePort = ProbePort.A,
                      mode: SidebandMode = SidebandMode.TWO) -> SidebandSolution:
    """Solve the assembled system and extract eta (port A) or xi (port C).

    Port C is solved by mirroring the ring (A0 <-> C0) and probing port A, so
    a pump swap exchanges the two responses bit-exactly.
    """
    if port is ProbePort.C:
        mirrored = replace(steady, A0=steady.C0, C0=steady.A0)
        sol = sideband_response(params, mirrored, delta, ProbePort.A, mode)
        amps = sol.amplitudes[[2, 3, 0, 1, 4, 5]]
        return SidebandSolution(amplitudes=amps, eta_or_xi=sol.eta_or_xi)
    system = assemble_sideband_system(params, steady, delta, port, mode)
    cond = np.linalg.cond(system.matrix)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise RuntimeError(
            f"sideband system ill-conditioned (cond {cond:.3e}) at delta = {delta!r}")
    x = np.linalg.solve(system.matrix, system.rhs)
    resid = np.abs(system.matrix @ x - system.rhs).max()
    if resid > _RESIDUAL_TOL * np.abs(system.rhs).max():
        raise RuntimeError(
            f"sideband solve residual {resid:.3e} too large at delta = {delta!r}")
    return SidebandSolution(amplitudes=x, eta_or_xi=complex(x[0]))
