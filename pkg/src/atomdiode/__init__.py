"""Cavity-based atom-diode simulator: a six-component spinor condensate
propagated by split-step Fourier evolution, with cavity photon loss
unraveled into quantum-jump Monte Carlo trajectories."""

__version__ = "0.1.0"

from .config import RunConfig, resolve
from .field import Grid, SpinorField, build_initial_state
from .hamiltonian import ModelOptions
from .mcwf import EnsembleResult, run_ensemble, run_trajectories
from .observables import sample_observables, transmission
from .params import (DerivedParams, PhysicalParams, desk_scale_params,
                     nondimensionalize, paper_default_params,
                     toy_scale_params)
from .propagator import build_step_plan, evolve_deterministic, strang_step

__all__ = [
    "__version__", "RunConfig", "resolve", "Grid", "SpinorField",
    "build_initial_state", "ModelOptions", "EnsembleResult", "run_ensemble",
    "run_trajectories", "sample_observables", "transmission",
    "DerivedParams", "PhysicalParams", "desk_scale_params",
    "nondimensionalize", "paper_default_params", "toy_scale_params",
    "build_step_plan", "evolve_deterministic", "strang_step",
]
