"""Splitting integrators and convergence diagnostics for the cubic
Klein-Gordon equation z_tt = Lap z - m z + lam z^3 on the torus [0, 2pi)^d."""

__version__ = "0.1.0"

from .errors import (BlowUpError, ConfigError, ContractError, GridMismatchError,
                     SingularOperatorError)
from .grids import SpectralField, TorusGrid, to_physical, to_spectral
from .operators import (BracketSymbol, ModelParams, apply_bracket, apply_linear_phase,
                        projector, real_cube, sobolev_norm)
from .schemes import (KINDS, SchemeSpec, StateU, Trajectory, evolve, filtered_lie_step,
                      filtered_strang_step, lie_step, linear_flow, nonlinear_flow, step,
                      strang_step)
from .rough import RoughDataSpec, generate, u_from_z, z_from_u
from .diagnostics import (BourgainSpec, OrderFit, discrete_bourgain_norm,
                          dispersive_symbol, energy, error_norm, fit_order)
from .study import (GateResult, OutputPaths, StudyConfig, StudyResult, StudyRow,
                    config_from_dict, config_hash, emit_csv, emit_manifest,
                    emit_plotdata, load_config, read_csv, reference_key,
                    run_reference, run_study, sweep_flags, validate_config)

__all__ = [
    "BlowUpError", "ConfigError", "ContractError", "GridMismatchError",
    "SingularOperatorError",
    "SpectralField", "TorusGrid", "to_physical", "to_spectral",
    "BracketSymbol", "ModelParams", "apply_bracket", "apply_linear_phase",
    "projector", "real_cube", "sobolev_norm",
    "KINDS", "SchemeSpec", "StateU", "Trajectory", "evolve", "filtered_lie_step",
    "filtered_strang_step", "lie_step", "linear_flow", "nonlinear_flow", "step",
    "strang_step",
    "RoughDataSpec", "generate", "u_from_z", "z_from_u",
    "BourgainSpec", "OrderFit", "discrete_bourgain_norm", "dispersive_symbol",
    "energy", "error_norm", "fit_order",
    "GateResult", "OutputPaths", "StudyConfig", "StudyResult", "StudyRow",
    "config_from_dict", "config_hash", "emit_csv", "emit_manifest", "emit_plotdata",
    "load_config", "read_csv", "reference_key", "run_reference", "run_study",
    "sweep_flags", "validate_config",
]
