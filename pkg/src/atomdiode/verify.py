"""Self-check batteries behind `ads verify`.

Each check returns (name, ok, detail); the fast suite is analytic-only
(minutes), the full suite adds the MCWF-vs-dense-Lindblad comparison.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .config import RunConfig, resolve
from .field import SpinorField, build_initial_state, norm2
from .mcwf import run_ensemble, run_trajectories, traj_seed
from .oracle import (dense_lindblad_evolve, free_gaussian_reference,
                     motionless_stirap, populations_from_rho)
from .params import desk_scale_params, nondimensionalize, toy_scale_params
from .propagator import (build_step_plan, convergence_study,
                         evolve_deterministic)


def _free_plan(resolved, dt, t_final):
    """Step plan with every coupling and the mean field switched off."""
    dp = dataclasses.replace(resolved.derived, omega0=0.0, delta=0.0,
                             kappa=0.0)
    opts = dataclasses.replace(resolved.options, nonlinearity_on=False)
    return dp, build_step_plan(resolved.grid, dp, opts, dt, t_final)


def check_free_gaussian() -> tuple:
    """Coupling-free propagation vs the analytic dispersing Gaussian."""
    r = resolve(RunConfig(preset="toy", n_traj=1))
    t_final = 4.0
    dp, plan = _free_plan(r, 2e-3, t_final)
    f0 = build_initial_state(r.grid, dp)
    out = evolve_deterministic(f0, plan)
    dens = (np.abs(out.amplitudes) ** 2).sum(axis=0)
    nrm = dens.sum() * r.grid.dx
    xbar = float((r.grid.x * dens).sum() * r.grid.dx / nrm)
    var = float(((r.grid.x - xbar) ** 2 * dens).sum() * r.grid.dx / nrm)
    width = math.sqrt(2.0 * var)  # Gaussian: rho ~ exp(-(x-c)^2/w^2)
    c_ref, w_ref = free_gaussian_reference(
        dp.signed_x0, dp.delta_l, dp.signed_v0, t_final, dp.hbar_over_m)
    err_c = abs(xbar - c_ref) / max(1.0, abs(c_ref))
    err_w = abs(width - w_ref) / w_ref
    ok = err_c < 1e-6 and err_w < 1e-6
    return ("free_gaussian", ok,
            f"center err {err_c:.2e}, width err {err_w:.2e} (tol 1e-6)")


def check_norm_conservation() -> tuple:
    """kappa = 0: norm drift below 1e-10 over 1e4 Strang steps."""
    r = resolve(RunConfig(preset="toy", params=dataclasses.asdict(
        dataclasses.replace(toy_scale_params(), kappa=0.0)),
        dt=1e-3, t_final=10.0))
    f0 = build_initial_state(r.grid, r.derived)
    out = evolve_deterministic(f0, r.plan)
    drift = abs(norm2(out) - 1.0)
    return ("norm_conservation_kappa0", drift < 1e-10,
            f"|norm-1| = {drift:.2e} over {r.plan.n_steps} steps (tol 1e-10)")


def check_motionless_stirap() -> tuple:
    """Counterintuitive pulse sweep transfers >= 0.999 to the target level."""
    dp = nondimensionalize(desk_scale_params())
    duration = abs(dp.x0) / dp.v0
    p1, p2, p3, max_p2 = motionless_stirap(dp, duration)
    ok = p3 >= 0.999
    return ("motionless_stirap", ok,
            f"P3 = {p3:.6f} (>= 0.999), transient P2 max = {max_p2:.2e}")


def check_strang_order() -> tuple:
    """Richardson order of the split-step scheme in [1.7, 2.3]."""
    r = resolve(RunConfig(preset="toy"))
    f0 = build_initial_state(r.grid, r.derived)
    res = convergence_study(r.grid, r.derived, r.options, 4.0,
                            [4e-3, 2e-3, 5e-4], f0)
    order = res["order"]
    ok = order is not None and 1.7 <= order <= 2.3
    return ("strang_order", ok, f"estimated order {order:.3f} (in [1.7, 2.3])")


def check_pure_decay(n_traj: int = 200) -> tuple:
    """Photon prepared in the lossy sector decays as exp(-kappa t), 3 sigma."""
    r = resolve(RunConfig(preset="toy", t_final=5.0, sample_interval=1.0))
    dp = dataclasses.replace(r.derived, omega0=0.0, delta=0.0)
    opts = dataclasses.replace(r.options, nonlinearity_on=False)
    plan = build_step_plan(r.grid, dp, opts, r.plan.dt, 5.0)
    f0 = build_initial_state(r.grid, dp)
    a = np.zeros_like(f0.amplitudes)
    a[1] = f0.amplitudes[0]  # move all weight into |1, photon=1>
    f0 = SpinorField(a, r.grid)
    ens = run_trajectories(f0, plan, dp, n_traj=n_traj, base_seed=7,
                           sample_every=r.sample_every_steps)
    t = ens.time_grid
    ref = np.exp(-dp.kappa * t)
    # photon number per trajectory is 0 or 1, so survival is binomial;
    # the binomial sigma covers the tail where the empirical stderr is 0,
    # and the absolute floor covers float rounding at the ref = 1 endpoint
    # where the binomial variance vanishes
    sig = np.sqrt(ref * (1 - ref) / n_traj)
    sig = np.maximum(np.maximum(ens.stderr["photon"], sig), 1e-12)
    worst = float(np.max(np.abs(ens.mean["photon"] - ref) / sig))
    return ("pure_decay_exponential", worst < 3.0,
            f"max |mean-exp(-kt)|/se = {worst:.2f} over {len(t)} samples "
            f"({n_traj} trajectories, 3 sigma)")


def check_determinism() -> tuple:
    """Same config + seed twice -> identical ensemble means and seeds."""
    cfg = RunConfig(preset="toy", n_traj=3, base_seed=99)
    a = run_ensemble(cfg)
    b = run_ensemble(cfg)
    same = all(np.array_equal(a.mean[k], b.mean[k]) for k in a.mean) \
        and a.traj_seeds == b.traj_seeds \
        and np.array_equal(a.jump_counts, b.jump_counts)
    return ("determinism_repeat", same,
            "repeat run bit-identical" if same else "repeat run differs")


def check_seed_independence() -> tuple:
    """Trajectory seeds are distinct and stable."""
    seeds = [traj_seed(2024, i) for i in range(64)]
    ok = len(set(seeds)) == 64
    return ("trajectory_seeds_distinct", ok, f"{len(set(seeds))}/64 distinct")


def check_mcwf_vs_dense(n_traj: int = 200) -> tuple:
    """Ensemble populations vs the dense Lindblad oracle on the toy grid.

    The mean field is switched off: the jump unraveling is only exact for
    linear dynamics.
    """
    cfg = RunConfig(preset="toy", model={"nonlinearity_on": False},
                    n_traj=n_traj, base_seed=11, sample_interval=1.0)
    r = resolve(cfg)
    ens = run_ensemble(cfg)
    f0 = build_initial_state(r.grid, r.derived)
    psi = f0.amplitudes.reshape(-1)
    rho0 = np.outer(psi, psi.conj())  # tr(rho) dx = 1 with this convention
    t_eval = list(ens.time_grid[1:])
    _, rhos = dense_lindblad_evolve(rho0, r.grid, r.derived, r.options,
                                    float(ens.time_grid[-1]), t_eval=t_eval)
    worst = 0.0
    for (t, rho), idx in zip(rhos, range(1, len(ens.time_grid))):
        p1, p2, p3, photon = populations_from_rho(rho, r.grid)
        for name, ref in (("p1", p1), ("p2", p2), ("p3", p3),
                          ("photon", photon)):
            se = max(float(ens.stderr[name][idx]), 2e-3)
            dev = abs(float(ens.mean[name][idx]) - ref) / se
            worst = max(worst, dev)
    return ("mcwf_vs_dense_lindblad", worst < 3.0,
            f"max deviation {worst:.2f} standard errors "
            f"({n_traj} trajectories, 3 sigma)")


FAST_CHECKS = (check_free_gaussian, check_norm_conservation,
               check_motionless_stirap, check_strang_order,
               check_pure_decay, check_determinism, check_seed_independence)
FULL_CHECKS = FAST_CHECKS + (check_mcwf_vs_dense,)


def run_suite(suite: str = "fast", progress=None) -> list:
    checks = {"fast": FAST_CHECKS, "full": FULL_CHECKS}.get(suite)
    if checks is None:
        raise ValueError(f"suite must be 'fast' or 'full', got {suite!r}")
    results = []
    for check in checks:
        name, ok, detail = check()
        results.append((name, ok, detail))
        if progress is not None:
            progress(name, ok, detail)
    return results
