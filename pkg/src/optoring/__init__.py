"""Two-mode optomechanical ring cavity simulator.

Steady states, linearized sideband response, transmission spectra,
group delays, a time-domain integration oracle, and preset sweeps.
"""
from .observables import (SpectrumRow, group_delay, group_delay_at,
                          phase_spectrum, transmission_amplitude)
from .oracle import (DivergenceError, Trajectory, demodulate,
                     integrate_mean_field, oracle_response)
from .params import (C_LIGHT, HBAR, DriveSetup, Sideband, SystemParams,
                     build_drives, build_params, coupling_from_geometry,
                     default_config, detuning_for_sideband, load_config,
                     make_drives, pump_amplitude)
from .response import (ProbePort, SidebandMode, SidebandSolution,
                       SidebandSystem, assemble_sideband_system,
                       sideband_response)
from .steady import SteadyState, effective_detuning, solve_steady_state, steady_residual
from .sweep import (CSV_HEADER, SCENARIO_IDS, SweepConfig, emit, run_sweep,
                    scenario)

__all__ = [
    "C_LIGHT", "CSV_HEADER", "HBAR", "SCENARIO_IDS",
    "DivergenceError", "DriveSetup", "ProbePort", "Sideband", "SidebandMode",
    "SidebandSolution", "SidebandSystem", "SpectrumRow", "SteadyState",
    "SweepConfig", "SystemParams", "Trajectory",
    "assemble_sideband_system", "build_drives", "build_params",
    "coupling_from_geometry", "default_config", "demodulate",
    "detuning_for_sideband", "effective_detuning", "emit", "group_delay",
    "group_delay_at", "integrate_mean_field", "load_config", "make_drives",
    "oracle_response", "pump_amplitude", "phase_spectrum", "run_sweep",
    "scenario", "sideband_response", "solve_steady_state", "steady_residual",
    "transmission_amplitude",
]

__version__ = "0.1.0"
