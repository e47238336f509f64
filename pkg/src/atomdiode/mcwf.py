"""Quantum-jump Monte Carlo unraveling of the cavity-loss master equation.

Each trajectory follows the non-Hermitian split-step drift; after every
step the jump probability is the actual norm loss 1 - eta (exact for the
integrated step), a uniform u decides whether the photon-annihilation jump
fires, and the state is renormalized.

Ensemble engine: trajectories are identical while the jump probability is
exactly zero in floating point (the cavity Stokes pulse has not been
reached), so a single "pilot" no-jump evolution is run once, recording the
per-step jump probability and periodic checkpoints.  Each trajectory then
only needs its own evolution from the first step where its uniform draw
falls below the pilot's jump probability.  This is bit-identical to the
naive per-trajectory loop (checked in the tests) because the pre-jump path
is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dfield

import numpy as np

from ._kernels import StepKernel
from .errors import EmptyPhotonSector
from .field import PHOTON0, PHOTON1, SpinorField, build_initial_state, norm2
from .observables import (DETECTOR_PLANE, component_densities,
                          sample_observables, transmission_from_density)
from .params import DerivedParams
from .propagator import StepPlan, step_inplace

MAX_KAPPA_DT = 0.1  # single-jump-per-step approximation bound


def splitmix64(z: int) -> int:
    """SplitMix64 avalanche mix (public-domain constants)."""
    z = (z + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return z ^ (z >> 31)


def traj_seed(base_seed: int, index: int) -> int:
    """Independent 64-bit stream seed for trajectory `index`."""
    return splitmix64((base_seed + index * 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF)


def apply_jump(f: SpinorField) -> SpinorField:
    """Photon annihilation in the truncated Fock space:
    psi_{i,0} <- psi_{i,1}, psi_{i,1} <- 0, then renormalize."""
    a = f.amplitudes
    j1 = a[PHOTON1, :]
    nrm2_j1 = float((j1.real**2 + j1.imag**2).sum()) * f.grid.dx
    if nrm2_j1 < 1e-300:
        raise EmptyPhotonSector(
            "jump drawn with empty photon-1 sector (norm^2 < 1e-300)")
    a[PHOTON0, :] = j1
    a[PHOTON1, :] = 0.0
    a /= math.sqrt(nrm2_j1)
    return f


@dataclass
class TrajectoryState:
    field: SpinorField
    time: float
    rng: np.random.Generator
    jump_log: list = dfield(default_factory=list)
    records: list = dfield(default_factory=list)


def mcwf_step(s: TrajectoryState, plan: StepPlan,
              kernel: StepKernel | None = None) -> TrajectoryState:
    """One Monte Carlo wave-function step (drift, jump draw, renormalize)."""
    if kernel is None:
        kernel = StepKernel(s.field.grid.n_points)
    psi = s.field.amplitudes
    _, eta = step_inplace(psi, plan, kernel)
    s.time += plan.dt
    u = s.rng.random()
    if u < 1.0 - eta:
        apply_jump(s.field)
        s.jump_log.append(s.time)
    else:
        psi /= math.sqrt(eta)
    return s


@dataclass
class TrajectoryResult:
    samples: np.ndarray          # (n_samples, len(ROW_FIELDS))
    snapshots: np.ndarray | None  # (n_snap, 6, n) component densities
    final_density: np.ndarray     # (n,) total density at t_final
    jump_times: list


@dataclass
class EnsembleResult:
    n_traj: int
    time_grid: np.ndarray
    mean: dict          # field name -> (T,) ensemble mean
    stderr: dict        # field name -> (T,) standard error
    v_fd: np.ndarray    # finite-difference velocity from mean xbar
    transmission: float
    jump_counts: np.ndarray      # (n_traj,)
    snapshot_times: np.ndarray
    snapshot_densities: np.ndarray | None  # (n_snap, 6, n) ensemble mean
    final_density: np.ndarray    # (n,) ensemble-mean total density
    traj_seeds: list
    grid: object
    direction: str


def _sampled_steps(n_steps: int, sample_every: int) -> list:
    steps = list(range(0, n_steps + 1, sample_every))
    if steps[-1] != n_steps:
        steps.append(n_steps)
    return steps


def _evolve_trajectory(psi0, plan: StepPlan, dp: DerivedParams, u: np.ndarray,
                       start_step: int, sampled: set, snapshot_steps: dict,
                       kernel: StepKernel):
    """Per-step MCWF loop from `start_step` (state psi0 = after that step),
    recording samples/snapshots at step indices > start_step."""
    psi = psi0.copy()
    g = plan.grid
    samples = {}
    snaps = {}
    jumps = []
    fld = SpinorField(psi, g)
    for s in range(start_step + 1, plan.n_steps + 1):
        _, eta = step_inplace(psi, plan, kernel)
        pj = max(0.0, 1.0 - eta)
        if u[s - 1] < pj:
            apply_jump(fld)
            jumps.append(s * plan.dt)
        else:
            psi /= math.sqrt(eta)
        if s in sampled:
            samples[s] = sample_observables(fld, dp, s * plan.dt).as_row()
        if s in snapshot_steps:
            snaps[s] = component_densities(fld)
    final_density = component_densities(fld).sum(axis=0)
    return samples, snaps, jumps, final_density


def run_trajectories(f0: SpinorField, plan: StepPlan, dp: DerivedParams,
                     n_traj: int, base_seed: int, sample_every: int,
                     snapshot_times=(), workers: int = 1,
                     use_pilot: bool = True,
                     x_det: float = DETECTOR_PLANE) -> EnsembleResult:
    """Evolve n_traj independent trajectories and reduce to ensemble means.

    Deterministic: the result depends only on (inputs, base_seed), not on
    worker count or scheduling; all reductions run in trajectory order.
    """
    if n_traj < 1:
        raise ValueError("n_traj must be >= 1")
    if dp.kappa * plan.dt > MAX_KAPPA_DT:
        raise ValueError(
            f"kappa*dt = {dp.kappa * plan.dt:.3f} > {MAX_KAPPA_DT}; "
            "reduce dt (single-jump-per-step approximation)")
    n_steps = plan.n_steps
    g = plan.grid
    sampled_list = _sampled_steps(n_steps, sample_every)
    sampled = set(sampled_list)
    snapshot_steps = {}
    for t in snapshot_times:
        s = int(round(t / plan.dt))
        snapshot_steps[min(max(s, 0), n_steps)] = True
    snap_list = sorted(snapshot_steps)
    seeds = [traj_seed(base_seed, i) for i in range(n_traj)]
    kernel = StepKernel(g.n_points)

    # --- pilot: the no-jump path, with checkpoints and jump probabilities
    chk_every = max(1, n_steps // 64)
    psi = f0.amplitudes.copy()
    fld = SpinorField(psi, g)
    pjump = np.zeros(n_steps)
    checkpoints = {0: psi.copy()}
    pilot_samples = {0: sample_observables(fld, dp, 0.0).as_row()}
    pilot_snaps = {}
    if 0 in snapshot_steps:
        pilot_snaps[0] = component_densities(fld)
    for s in range(1, n_steps + 1):
        _, eta = step_inplace(psi, plan, kernel)
        pjump[s - 1] = max(0.0, 1.0 - eta)
        psi /= math.sqrt(eta)
        if s % chk_every == 0:
            checkpoints[s] = psi.copy()
        if s in sampled:
            pilot_samples[s] = sample_observables(fld, dp, s * plan.dt).as_row()
        if s in snapshot_steps:
            pilot_snaps[s] = component_densities(fld)
    pilot_final_density = component_densities(fld).sum(axis=0)
    chk_steps = sorted(checkpoints)

    # --- per-trajectory first-jump detection and replay
    def trajectory_result(i: int) -> TrajectoryResult:
        rng = np.random.Generator(np.random.PCG64(seeds[i]))
        u = rng.random(n_steps)
        if use_pilot:
            hits = np.nonzero(u < pjump)[0]
            first = int(hits[0]) + 1 if hits.size else None
        else:
            first = 1 if n_steps >= 1 else None
        if first is None:
            samples = dict(pilot_samples)
            snaps = dict(pilot_snaps)
            jumps: list = []
            fdens = pilot_final_density
        else:
            start = max(c for c in chk_steps if c <= first - 1)
            samples, snaps, jumps, fdens = _evolve_trajectory(
                checkpoints[start], plan, dp, u, start, sampled,
                snapshot_steps, StepKernel(g.n_points))
            for s in pilot_samples:
                if s <= start:
                    samples[s] = pilot_samples[s]
            for s in pilot_snaps:
                if s <= start:
                    snaps[s] = pilot_snaps[s]
        sample_arr = np.stack([samples[s] for s in sampled_list])
        snap_arr = (np.stack([snaps[s] for s in snap_list])
                    if snap_list else None)
        return TrajectoryResult(sample_arr, snap_arr, fdens, jumps)

    if workers > 1 and n_traj > 1:
        import multiprocessing as mp

        global _POOL_FN
        _POOL_FN = trajectory_result
        ctx = mp.get_context("fork")  # workers inherit _POOL_FN, no pickling
        with ctx.Pool(processes=workers) as pool:
            results_iter = pool.imap(_pool_call, range(n_traj), chunksize=1)
            results = _reduce(results_iter, n_traj)
        _POOL_FN = None
    else:
        results = _reduce((trajectory_result(i) for i in range(n_traj)), n_traj)
    sample_stack, snap_sum, fdens_sum, jump_counts = results

    time_grid = np.array(sampled_list, dtype=float) * plan.dt
    mean = {}
    stderr = {}
    names = ("t", "p1", "p2", "p3", "xbar", "v", "photon", "dark_pop", "norm")
    for j, name in enumerate(names):
        col = sample_stack[:, :, j]
        mean[name] = col.mean(axis=0)
        if n_traj > 1:
            stderr[name] = col.std(axis=0, ddof=1) / math.sqrt(n_traj)
        else:
            stderr[name] = np.zeros(col.shape[1])
    v_fd = np.gradient(mean["xbar"], time_grid) if len(time_grid) > 1 \
        else np.zeros_like(mean["xbar"])
    final_density = fdens_sum / n_traj
    trans = transmission_from_density(final_density, g, dp.initial_direction, x_det)
    snap_dens = snap_sum / n_traj if snap_sum is not None else None
    return EnsembleResult(
        n_traj=n_traj, time_grid=time_grid, mean=mean, stderr=stderr,
        v_fd=v_fd, transmission=trans,
        jump_counts=np.array(jump_counts),
        snapshot_times=np.array(snap_list, dtype=float) * plan.dt,
        snapshot_densities=snap_dens, final_density=final_density,
        traj_seeds=seeds, grid=g, direction=dp.initial_direction)


_POOL_FN = None


def _pool_call(i):
    return _POOL_FN(i)


def _reduce(results_iter, n_traj):
    """Strictly ordered reduction: identical for any worker count."""
    sample_rows = []
    snap_sum = None
    fdens_sum = None
    jump_counts = []
    for res in results_iter:
        sample_rows.append(res.samples)
        if res.snapshots is not None:
            snap_sum = res.snapshots.copy() if snap_sum is None \
                else snap_sum + res.snapshots
        fdens_sum = res.final_density.copy() if fdens_sum is None \
            else fdens_sum + res.final_density
        jump_counts.append(len(res.jump_times))
    return np.stack(sample_rows), snap_sum, fdens_sum, jump_counts


def run_ensemble(cfg) -> EnsembleResult:
    """Run a declarative RunConfig (see atomdiode.config) to an ensemble."""
    from .config import resolve

    r = resolve(cfg)
    f0 = build_initial_state(r.grid, r.derived)
    x_det = DETECTOR_PLANE if cfg.x_det is None else cfg.x_det
    return run_trajectories(
        f0, r.plan, r.derived, n_traj=cfg.n_traj, base_seed=cfg.base_seed,
        sample_every=r.sample_every_steps, snapshot_times=r.snapshot_times,
        workers=cfg.workers, use_pilot=True, x_det=x_det)
