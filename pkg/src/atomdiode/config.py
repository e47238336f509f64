"""Declarative run configuration, scenario presets, and resolution.

A RunConfig is a JSON-compatible record; presets are embedded so
`ads run --scenario forward_1` works with zero files.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field as dfield

from .errors import ValidationError
from .field import Grid, build_initial_state
from .hamiltonian import ModelOptions
from .params import (DerivedParams, PhysicalParams, desk_scale_params,
                     nondimensionalize, paper_default_params,
                     toy_scale_params)
from .propagator import StepPlan, build_step_plan

SCENARIOS = ("forward_1", "backward_1", "backward_3", "custom")
PRESETS = ("paper", "desk", "toy")


@dataclass
class RunConfig:
    preset: str = "desk"             # "paper" | "desk" | "toy", or "custom"
    scenario: str = "forward_1"
    params: dict | None = None       # explicit PhysicalParams fields (SI)
    model: dict = dfield(default_factory=dict)
    x_min: float | None = None       # um; None -> scenario default
    x_max: float | None = None
    n_points: int | None = None
    dt: float | None = None          # ms
    t_final: float | None = None     # ms
    sample_interval: float | None = None  # ms
    snapshot_times: list | None = None    # ms; None -> evenly spaced
    n_snapshots: int = 0
    n_traj: int = 1
    base_seed: int = 2024
    workers: int = 0                 # 0 -> ADS_WORKERS or 1
    output_dir: str = "out"
    emit_densities: bool = False
    density_format: str = "bin"      # "bin" | "csv"
    absorber_width: float = 0.0      # um, 0 disables the edge mask
    x_det: float | None = None       # detector plane, um; None -> 200

    def __post_init__(self):
        if self.workers == 0:
            self.workers = int(os.environ.get("ADS_WORKERS", "1"))


# per (preset, direction): grid/time defaults sized so the packet clears the
# detector plane and no wrap-around occurs before t_final
_DEFAULTS = {
    ("paper", "positive"): dict(x_min=-320.0, x_max=320.0, n_points=16384,
                                dt=1e-5, t_final=10.0, sample_interval=0.01),
    ("paper", "negative"): dict(x_min=-480.0, x_max=800.0, n_points=32768,
                                dt=1e-5, t_final=11.0, sample_interval=0.01),
    ("desk", "positive"): dict(x_min=-320.0, x_max=320.0, n_points=2048,
                               dt=1e-3, t_final=100.0, sample_interval=0.1),
    ("desk", "negative"): dict(x_min=-480.0, x_max=800.0, n_points=4096,
                               dt=1e-3, t_final=110.0, sample_interval=0.1),
    ("toy", "positive"): dict(x_min=-22.0, x_max=22.0, n_points=64,
                              dt=5e-3, t_final=17.0, sample_interval=0.25),
    ("toy", "negative"): dict(x_min=-22.0, x_max=22.0, n_points=64,
                              dt=5e-3, t_final=17.0, sample_interval=0.25),
}

_PRESET_PARAMS = {
    "paper": paper_default_params,
    "desk": desk_scale_params,
    "toy": toy_scale_params,
}


@dataclass
class ResolvedRun:
    physical: PhysicalParams
    derived: DerivedParams
    options: ModelOptions
    grid: Grid
    plan: StepPlan
    sample_every_steps: int
    snapshot_times: list


def _scenario_params(p: PhysicalParams, scenario: str) -> PhysicalParams:
    if scenario == "forward_1":
        return dataclasses.replace(p, initial_level=1, initial_direction="positive")
    if scenario == "backward_1":
        return dataclasses.replace(p, initial_level=1, initial_direction="negative")
    if scenario == "backward_3":
        return dataclasses.replace(p, initial_level=3, initial_direction="negative")
    return p  # custom: keep whatever the params say


def resolve(cfg: RunConfig) -> ResolvedRun:
    """Validate a RunConfig and build every derived object."""
    if cfg.scenario not in SCENARIOS:
        raise ValidationError("scenario", f"must be one of {SCENARIOS}")
    if cfg.params is not None:
        try:
            phys = PhysicalParams(**cfg.params)
        except TypeError as exc:
            raise ValidationError("params", str(exc)) from exc
    elif cfg.preset in _PRESET_PARAMS:
        phys = _PRESET_PARAMS[cfg.preset]()
    else:
        raise ValidationError("preset", f"unknown preset {cfg.preset!r} "
                              "and no explicit params given")
    phys = _scenario_params(phys, cfg.scenario)
    phys.validate()
    derived = nondimensionalize(phys)

    defaults = _DEFAULTS.get((cfg.preset, phys.initial_direction),
                             _DEFAULTS[("desk", "positive")])

    def pick(name):
        v = getattr(cfg, name)
        return defaults[name] if v is None else v

    try:
        options = ModelOptions(**cfg.model)
    except (TypeError, ValueError) as exc:
        raise ValidationError("model", str(exc)) from exc
    grid = Grid(pick("x_min"), pick("x_max"), int(pick("n_points")))
    dt = float(pick("dt"))
    t_final = float(pick("t_final"))
    if dt <= 0 or t_final <= 0:
        raise ValidationError("dt/t_final", "must be > 0")
    n_steps = int(round(t_final / dt))
    dt = t_final / n_steps  # exact divisor of t_final
    from .mcwf import MAX_KAPPA_DT

    if derived.kappa * dt > MAX_KAPPA_DT:
        raise ValidationError(
            "dt", f"kappa*dt = {derived.kappa * dt:.3f} > {MAX_KAPPA_DT}")
    sample_interval = float(pick("sample_interval"))
    sample_every = max(1, int(round(sample_interval / dt)))
    if cfg.snapshot_times is not None:
        snapshot_times = list(cfg.snapshot_times)
    elif cfg.n_snapshots > 0:
        snapshot_times = [t_final * i / (cfg.n_snapshots - 1)
                          for i in range(cfg.n_snapshots)] \
            if cfg.n_snapshots > 1 else [t_final]
    else:
        snapshot_times = []
    plan = build_step_plan(grid, derived, options, dt, t_final,
                           absorber_width=cfg.absorber_width)
    # fail early on domain/Nyquist problems
    build_initial_state(grid, derived)
    return ResolvedRun(phys, derived, options, grid, plan, sample_every,
                       snapshot_times)


def config_to_dict(cfg: RunConfig) -> dict:
    return dataclasses.asdict(cfg)


def config_from_dict(d: dict) -> RunConfig:
    known = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = set(d) - known
    if unknown:
        raise ValidationError(", ".join(sorted(unknown)), "unknown config field")
    return RunConfig(**d)
