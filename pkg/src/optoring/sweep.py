"""Detuning / power / loss sweeps, scenario presets and tabular output.

A sweep evaluates both probe directions at every axis point and never aborts
on a per-point solver failure: the row is emitted with a status message and
NaN values instead.  Output is deterministic: the same config produces
byte-identical files regardless of the thread count.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .observables import SpectrumRow, group_delay_at, transmission_amplitude
from .params import (DriveSetup, Sideband, SystemParams, build_params,
                     default_config, detuning_for_sideband, make_drives)
from .response import ProbePort, SidebandMode, sideband_response
from .steady import SteadyState, solve_steady_state

CSV_HEADER = "delta_over_omega_m,T_a,T_c,phi_a_rad,phi_c_rad,tau_a_s,tau_c_s,status"

_AXES = ("delta", "P_a_ratio", "kappa_in_factor")
_OUTPUTS = ("T", "phase", "tau")
_FORMATS = ("csv", "json")

SCENARIO_IDS = (
    "fig2a", "fig2b", "fig2c", "fig2d",
    "fig3a", "fig3b", "fig3c", "fig3d", "fig3e", "fig3f",
    "fig4a", "fig4b", "fig4c", "fig4d",
    "fig5a", "fig5b", "fig5c", "fig5d", "fig5e",
)

# id -> (sideband, P_a / P_c, kappa_in / kappa, tau column on)
_SCENARIOS: dict[str, tuple[Sideband, float, float, bool]] = {
    "fig2a": (Sideband.RED, 1.0, 1.0, False),
    "fig2b": (Sideband.RED, 1e2, 1.0, False),
    "fig2c": (Sideband.RED, 1e4, 1.0, False),
    "fig2d": (Sideband.RED, 1e5, 1.0, False),
    "fig3a": (Sideband.BLUE, 1.0, 1.0, False),
    "fig3b": (Sideband.BLUE, 6.0, 1.0, False),
    "fig3c": (Sideband.BLUE, 8.5, 1.0, False),
    "fig3d": (Sideband.BLUE, 9.5, 1.0, False),
    "fig3e": (Sideband.BLUE, 5e2, 1.0, False),
    "fig3f": (Sideband.BLUE, 1e4, 1.0, False),
    "fig4a": (Sideband.BLUE, 1e5, 1.0, False),
    "fig4b": (Sideband.BLUE, 1e5, 1e-1, False),
    "fig4c": (Sideband.BLUE, 1e5, 1e-2, False),
    "fig4d": (Sideband.BLUE, 1e5, 1e-3, False),
    "fig5a": (Sideband.BLUE, 1e4, 1e-3, True),
    "fig5b": (Sideband.BLUE, 5e4, 1e-3, True),
    "fig5c": (Sideband.BLUE, 1e5, 1e-3, True),
    "fig5d": (Sideband.BLUE, 2e5, 1e-3, True),
    "fig5e": (Sideband.BLUE, 5e5, 1e-3, True),
}

_BASE_PUMP_W = 100e-9  # held-constant weak pump power


@dataclass(frozen=True)
class SweepConfig:
    """One sweep: base operating point, axis, bounds and output options.

    Axis bounds for the delta axis are in units of omega_m; the other axes
    are dimensionless ratios (P_a/P_c, kappa_in/kappa).  Non-delta sweeps
    evaluate every point at the fixed probe detuning delta = Delta.
    """

    base_params: SystemParams
    base_drives: DriveSetup
    axis: str = "delta"
    axis_from: float = 0.98
    axis_to: float = 1.02
    points: int = 2001
    outputs: tuple[str, ...] = ("T", "phase", "tau")
    sideband_mode: SidebandMode = SidebandMode.TWO
    out_path: str | None = None
    format: str = "csv"

    def __post_init__(self) -> None:
        if self.axis not in _AXES:
            raise ValueError(f"unknown sweep axis {self.axis!r}; expected one of {_AXES}")
        if not self.axis_from < self.axis_to:
            raise ValueError(
                f"axis bounds must satisfy from < to, got {self.axis_from!r}, {self.axis_to!r}")
        if self.points < 2:
            raise ValueError(f"points must be at least 2, got {self.points!r}")
        bad = set(self.outputs) - set(_OUTPUTS)
        if bad:
            raise ValueError(f"unknown outputs {sorted(bad)}; expected subset of {_OUTPUTS}")
        if self.format not in _FORMATS:
            raise ValueError(f"unknown format {self.format!r}; expected one of {_FORMATS}")


def scenario(scenario_id: str) -> SweepConfig:
    """Preset sweep configuration for one figure panel."""
    if scenario_id not in _SCENARIOS:
        raise ValueError(f"unknown scenario id {scenario_id!r}; "
                         f"expected one of {', '.join(SCENARIO_IDS)}")
    side, ratio, kin_factor, want_tau = _SCENARIOS[scenario_id]
    raw = default_config()
    raw["kappa_in_hz"] = kin_factor * raw["kappa_hz"]
    params = build_params(raw)
    delta = detuning_for_sideband(side, params.omega_m)
    drives = make_drives(params, delta, ratio * _BASE_PUMP_W, _BASE_PUMP_W)
    sign = 1.0 if delta > 0 else -1.0
    lo, hi = sorted((0.98 * sign, 1.02 * sign))
    outputs = ("T", "phase", "tau") if want_tau else ("T", "phase")
    return SweepConfig(base_params=params, base_drives=drives, axis="delta",
                       axis_from=lo, axis_to=hi, points=2001, outputs=outputs,
                       out_path=None, format="csv")


def _point_configs(config: SweepConfig):
    """Per-point (axis_value, params, drives, probe_delta) tuples."""
    values = np.linspace(config.axis_from, config.axis_to, config.points)
    params, drives = config.base_params, config.base_drives
    out = []
    for v in values:
        if config.axis == "delta":
            out.append((float(v), params, drives, float(v) * params.omega_m))
        elif config.axis == "P_a_ratio":
            d = make_drives(params, drives.delta, float(v) * drives.P_c, drives.P_c)
            out.append((float(v), params, d, drives.delta))
        else:  # kappa_in_factor
            kin = float(v) * params.kappa
            p = replace(params, kappa_in=kin, kappa_t=params.kappa + kin)
            d = make_drives(p, drives.delta, drives.P_a, drives.P_c)
            out.append((float(v), p, d, drives.delta))
    return out


def _eval_point(params: SystemParams, drives: DriveSetup, probe_delta: float,
                steady: SteadyState | None, config: SweepConfig):
    """(t_a, t_c, tau_a, tau_c) at one point; raises on solver failure."""
    if steady is None:
        steady = solve_steady_state(params, drives)
    mode = config.sideband_mode
    eta = sideband_response(params, steady, probe_delta, ProbePort.A, mode).eta_or_xi
    xi = sideband_response(params, steady, probe_delta, ProbePort.C, mode).eta_or_xi
    t_a = transmission_amplitude(eta, params.kappa)
    t_c = transmission_amplitude(xi, params.kappa)
    if "tau" in config.outputs:
        tau_a = group_delay_at(params, steady, probe_delta, ProbePort.A, mode=mode)
        tau_c = group_delay_at(params, steady, probe_delta, ProbePort.C, mode=mode)
    else:
        tau_a = tau_c = math.nan
    return t_a, t_c, tau_a, tau_c


def _unwrap_with_gaps(raw_t: list[complex | None]) -> list[float]:
    """Unwrapped phases over contiguous runs of valid amplitudes; NaN in gaps."""
    phases = [math.nan] * len(raw_t)
    i = 0
    while i < len(raw_t):
        if raw_t[i] is None:
            i += 1
            continue
        j = i
        while j < len(raw_t) and raw_t[j] is not None:
            j += 1
        seg = np.unwrap(np.angle(np.array(raw_t[i:j], dtype=complex)))
        phases[i:j] = [float(p) for p in seg]
        i = j
    return phases


def run_sweep(config: SweepConfig, threads: int = 1) -> list[SpectrumRow]:
    """Evaluate the sweep, one SpectrumRow per axis point, ascending order."""
    pts = _point_configs(config)

    shared_steady: SteadyState | None = None
    steady_error: str | None = None
    if config.axis == "delta":
        # one operating point for the whole sweep
        try:
            shared_steady = solve_steady_state(config.base_params, config.base_drives)
        except Exception as exc:  # noqa: BLE001 - recorded per row
            steady_error = str(exc)

    def work(item):
        value, params, drives, probe_delta = item
        if steady_error is not None:
            return value, probe_delta, None, None, math.nan, math.nan, f"failed: {steady_error}"
        try:
            t_a, t_c, tau_a, tau_c = _eval_point(
                params, drives, probe_delta, shared_steady, config)
            return value, probe_delta, t_a, t_c, tau_a, tau_c, "ok"
        except Exception as exc:  # noqa: BLE001 - recorded per row
            return value, probe_delta, None, None, math.nan, math.nan, f"failed: {exc}"

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, pts))
    else:
        results = [work(item) for item in pts]

    phis_a = _unwrap_with_gaps([r[2] for r in results])
    phis_c = _unwrap_with_gaps([r[3] for r in results])

    rows = []
    omega_m = config.base_params.omega_m
    for k, (value, probe_delta, t_a, t_c, tau_a, tau_c, status) in enumerate(results):
        ok = t_a is not None
        rows.append(SpectrumRow(
            delta_over_omega_m=probe_delta / omega_m,
            t_a=t_a if ok else complex(math.nan, math.nan),
            t_c=t_c if ok else complex(math.nan, math.nan),
            T_a=abs(t_a) ** 2 if ok else math.nan,
            T_c=abs(t_c) ** 2 if ok else math.nan,
            phi_a=phis_a[k],
            phi_c=phis_c[k],
            tau_a=tau_a,
            tau_c=tau_c,
            status=status,
        ))
    return rows


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _row_record(row: SpectrumRow) -> dict:
    return {
        "delta_over_omega_m": row.delta_over_omega_m,
        "T_a": row.T_a,
        "T_c": row.T_c,
        "phi_a_rad": row.phi_a,
        "phi_c_rad": row.phi_c,
        "tau_a_s": row.tau_a,
        "tau_c_s": row.tau_c,
        "status": row.status,
    }


def emit(rows: list[SpectrumRow], format: str = "csv",
         path: str | None = None) -> str:
    """Serialize rows to CSV or JSON; write to path if given; return the text."""
    if not rows:
        raise ValueError("emit needs at least one row")
    if format == "csv":
        lines = [CSV_HEADER]
        for row in rows:
            rec = _row_record(row)
            status = str(rec["status"]).replace(",", ";").replace("\n", " ")
            lines.append(",".join(
                [_fmt(rec["delta_over_omega_m"]), _fmt(rec["T_a"]), _fmt(rec["T_c"]),
                 _fmt(rec["phi_a_rad"]), _fmt(rec["phi_c_rad"]),
                 _fmt(rec["tau_a_s"]), _fmt(rec["tau_c_s"]), status]))
        text = "\n".join(lines) + "\n"
    elif format == "json":
        text = json.dumps([_row_record(r) for r in rows], indent=1) + "\n"
    else:
        raise ValueError(f"unknown format {format!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text
