"""Command-line interface.

Subcommands: steady, spectrum, delay, scenario, validate.
Exit codes: 0 success, 1 configuration error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys

import numpy as np

from .oracle import DivergenceError, oracle_response
from .params import load_config
from .response import ProbePort, SidebandMode, sideband_response
from .steady import solve_steady_state
from .sweep import SCENARIO_IDS, SweepConfig, emit, run_sweep, scenario

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for numerical failure
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit_(EXIT_CONFIG, message)


class SystemExit_(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code
        self.message = message


def _sideband_mode(label: str) -> SidebandMode:
    return SidebandMode.TWO if label == "two" else SidebandMode.LITERAL


def _complex_pair(z: complex) -> list[float]:
    return [z.real, z.imag]


def _add_sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--from", dest="axis_from", type=float, default=None,
                   help="lower probe detuning bound in units of omega_m")
    p.add_argument("--to", dest="axis_to", type=float, default=None,
                   help="upper probe detuning bound in units of omega_m")
    p.add_argument("--points", type=int, default=2001)
    p.add_argument("--sideband-mode", choices=("two", "literal"), default="two")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="optoring",
                description="Two-mode optomechanical ring cavity simulator")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("steady", help="Solve the nonlinear steady state.")
    s.add_argument("--config", required=True)

    for name, brief in (("spectrum", "Transmission spectra over a detuning sweep."),
                        ("delay", "Spectra plus group delays over a detuning sweep.")):
        c = sub.add_parser(name, help=brief)
        c.add_argument("--config", required=True)
        _add_sweep_flags(c)

    c = sub.add_parser("scenario", help="Run a preset figure-panel sweep.")
    c.add_argument("id", choices=SCENARIO_IDS)
    c.add_argument("--points", type=int, default=None)
    c.add_argument("--sideband-mode", choices=("two", "literal"), default="two")
    c.add_argument("--threads", type=int, default=1)
    c.add_argument("--format", choices=("csv", "json"), default="csv")
    c.add_argument("--out", default=None, help="output file (default: <id>.<format>)")

    c = sub.add_parser("validate",
                       help="Compare frequency-domain and time-domain responses.")
    c.add_argument("--config", required=True)
    c.add_argument("--points", type=int, default=21)
    c.add_argument("--sideband-mode", choices=("two", "literal"), default="two")
    c.add_argument("--out", default=None, help="output file (default: stdout)")
    return p


def _load(path: str):
    try:
        return load_config(path)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise SystemExit_(EXIT_CONFIG, f"config error: {exc}") from exc


def _cmd_steady(args) -> int:
    params, drives = _load(args.config)
    try:
        st = solve_steady_state(params, drives)
    except RuntimeError as exc:
        raise SystemExit_(EXIT_NUMERICAL, f"steady-state failure: {exc}") from exc
    print(json.dumps({
        "A0": _complex_pair(st.A0), "C0": _complex_pair(st.C0),
        "B0": _complex_pair(st.B0), "N": st.N, "delta_eff": st.delta_eff,
        "residual": st.residual, "used_bisection": st.used_bisection,
    }, indent=1))
    return EXIT_OK


def _sweep_window(drives, args) -> tuple[float, float]:
    sign = 1.0 if drives.delta >= 0 else -1.0
    lo, hi = sorted((0.98 * sign, 1.02 * sign))
    if args.axis_from is not None:
        lo = args.axis_from
    if args.axis_to is not None:
        hi = args.axis_to
    return lo, hi


def _emit_rows(rows, fmt: str, out_path: str | None) -> int:
    text = emit(rows, format=fmt, path=out_path)
    if out_path is None:
        sys.stdout.write(text)
    if all(row.status != "ok" for row in rows):
        raise SystemExit_(EXIT_NUMERICAL, "every sweep point failed")
    return EXIT_OK


def _cmd_sweep(args, with_tau: bool) -> int:
    params, drives = _load(args.config)
    lo, hi = _sweep_window(drives, args)
    outputs = ("T", "phase", "tau") if with_tau else ("T", "phase")
    try:
        config = SweepConfig(base_params=params, base_drives=drives, axis="delta",
                             axis_from=lo, axis_to=hi, points=args.points,
                             outputs=outputs,
                             sideband_mode=_sideband_mode(args.sideband_mode),
                             out_path=args.out, format=args.format)
    except ValueError as exc:
        raise SystemExit_(EXIT_CONFIG, f"config error: {exc}") from exc
    rows = run_sweep(config, threads=max(1, args.threads))
    return _emit_rows(rows, args.format, args.out)


def _cmd_scenario(args) -> int:
    config = scenario(args.id)
    if args.points is not None:
        try:
            config = dataclasses.replace(config, points=args.points)
        except ValueError as exc:
            raise SystemExit_(EXIT_CONFIG, f"config error: {exc}") from exc
    config = dataclasses.replace(config,
                                 sideband_mode=_sideband_mode(args.sideband_mode),
                                 format=args.format)
    rows = run_sweep(config, threads=max(1, args.threads))
    out = args.out if args.out is not None else f"{args.id}.{args.format}"
    text = emit(rows, format=args.format, path=out)
    print(f"wrote {out} ({len(rows)} rows)")
    if all(row.status != "ok" for row in rows):
        raise SystemExit_(EXIT_NUMERICAL, "every sweep point failed")
    return EXIT_OK


def _cmd_validate(args) -> int:
    params, drives = _load(args.config)
    sign = 1.0 if drives.delta >= 0 else -1.0
    lo, hi = sorted((0.98 * sign * abs(drives.delta), 1.02 * sign * abs(drives.delta)))
    grid = np.linspace(lo, hi, args.points)
    mode = _sideband_mode(args.sideband_mode)

    try:
        st = solve_steady_state(params, drives)
    except RuntimeError as exc:
        raise SystemExit_(EXIT_NUMERICAL, f"steady-state failure: {exc}") from exc

    report = []
    n_ok = n_bad = 0
    for d in grid:
        entry = {"delta": float(d), "freq_domain": None, "time_domain": None,
                 "rel_err": math.nan, "status": "ok"}
        try:
            eta = sideband_response(params, st, float(d), ProbePort.A, mode).eta_or_xi
            entry["freq_domain"] = _complex_pair(eta)
            zt = oracle_response(params, drives, float(d), ProbePort.A)
            entry["time_domain"] = _complex_pair(zt)
            rel = abs(zt - eta) / max(abs(eta), 1e-300)
            entry["rel_err"] = rel
            if rel <= 1e-3:
                n_ok += 1
            else:
                entry["status"] = "mismatch"
                n_bad += 1
        except DivergenceError:
            entry["status"] = "skipped_unstable"
        except Exception as exc:  # noqa: BLE001 - reported per point
            entry["status"] = f"failed: {exc}"
            n_bad += 1
        report.append(entry)

    text = json.dumps({"rows": report, "compared": n_ok + n_bad,
                       "within_tolerance": n_ok}, indent=1) + "\n"
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if n_bad > 0 or (n_ok == 0 and all(e["status"] != "skipped_unstable" for e in report)):
        raise SystemExit_(EXIT_NUMERICAL, "validation failed")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.cmd == "steady":
            return _cmd_steady(args)
        if args.cmd == "spectrum":
            return _cmd_sweep(args, with_tau=False)
        if args.cmd == "delay":
            return _cmd_sweep(args, with_tau=True)
        if args.cmd == "scenario":
            return _cmd_scenario(args)
        if args.cmd == "validate":
            return _cmd_validate(args)
        raise SystemExit_(EXIT_CONFIG, f"unknown command {args.cmd!r}")
    except SystemExit_ as exc:
        if exc.message:
            print(f"error: {exc.message}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
