"""Independent brute-force references for the test suite.

The dense Lindblad solver integrates the full density matrix on tiny
grids (<= 64 points, dimension <= 384) with an adaptive classical scheme,
reusing the same coupling assembly as the production path so that the
comparison validates time stepping and the jump unraveling, not matrix
construction.  The Hamiltonian is applied spectrally (same discretized
operator as the propagator) but the time integration is entirely
independent of the split-operator machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft
from scipy.integrate import solve_ivp

from .field import Grid
from .hamiltonian import ModelOptions, assemble_coupling_grid
from .params import DerivedParams

MAX_ORACLE_POINTS = 64
PHOTON0_IDX = (0, 2, 4)
PHOTON1_IDX = (1, 3, 5)


@dataclass
class DenseState:
    rho: np.ndarray  # (6n, 6n) complex density matrix
    grid: Grid
    time: float


class _DenseOperators:
    """Coupling stack and helpers for rho shaped (6, n, 6, n)."""

    def __init__(self, g: Grid, p: DerivedParams, opts: ModelOptions):
        if g.n_points > MAX_ORACLE_POINTS:
            raise ValueError(
                f"dense oracle capped at {MAX_ORACLE_POINTS} points, "
                f"got {g.n_points}")
        self.g = g
        self.p = p
        self.opts = opts
        self.h_coupling = assemble_coupling_grid(g.x, p, opts)  # (n,6,6)
        self.kin = 0.5 * p.hbar_over_m * g.k**2 if opts.kinetic_on \
            else np.zeros(g.n_points)
        self.g_nl = p.un_product if opts.nonlinearity_on else 0.0

    def apply_h(self, vecs: np.ndarray, nl_density=None) -> np.ndarray:
        """H @ vecs for vecs shaped (6, n, ...): spectral kinetic plus the
        position-local coupling, plus the optional mean-field term."""
        kin = sfft.ifft(self.kin[None, :, None]
                        * sfft.fft(vecs, axis=1), axis=1)
        coup = np.einsum("xij,jxc->ixc", self.h_coupling, vecs)
        out = kin + coup
        if nl_density is not None and self.g_nl != 0.0:
            out += self.g_nl * nl_density[None, :, None] * vecs
        return out


def dense_lindblad_evolve(rho0: np.ndarray, g: Grid, p: DerivedParams,
                          opts: ModelOptions, t_final: float,
                          t_eval=None, rtol=1e-8, atol=1e-10,
                          method="DOP853"):
    """Integrate the cavity-loss master equation for rho0 (6n x 6n).

    Returns (DenseState at t_final, list of rho at t_eval) -- the list is
    empty when t_eval is None.
    """
    ops = _DenseOperators(g, p, opts)
    n = g.n_points
    dim = 6 * n
    dx = g.dx
    kap = p.kappa
    j0 = np.array(PHOTON0_IDX)
    j1 = np.array(PHOTON1_IDX)

    def rhs(t, y):
        rho = y.view(np.complex128).reshape(6, n, 6, n)
        nl = np.einsum("ixix->x", rho).real * dx if ops.g_nl != 0.0 else None
        vecs = rho.reshape(6, n, dim)
        h_rho = ops.apply_h(vecs, nl).reshape(6, n, 6, n)
        # rho H = (H rho^dagger)^dagger with H Hermitian
        comm = -1j * (h_rho - h_rho.conj().transpose(2, 3, 0, 1))
        out = comm
        if kap > 0.0:
            diss = np.zeros_like(rho)
            diss[np.ix_(j0, range(n), j0, range(n))] = \
                rho[np.ix_(j1, range(n), j1, range(n))]
            # anticommutator of the photon-number projector
            proj = np.zeros(6)
            proj[j1] = 1.0
            out = out + kap * diss \
                - 0.5 * kap * (proj[:, None, None, None] + proj[None, None, :, None]) * rho
        return out.reshape(-1).view(np.float64)

    y0 = np.ascontiguousarray(rho0, dtype=np.complex128).reshape(-1).view(np.float64)
    kwargs = {}
    if t_eval is not None:
        kwargs["t_eval"] = sorted(set(list(t_eval) + [t_final]))
    sol = solve_ivp(rhs, (0.0, t_final), y0, method=method, rtol=rtol,
                    atol=atol, **kwargs)
    if not sol.success:
        raise RuntimeError(f"dense Lindblad integration failed: {sol.message}")
    rhos = [np.ascontiguousarray(sol.y[:, i]).view(np.complex128)
            .reshape(dim, dim) for i in range(sol.y.shape[1])]
    final = DenseState(rhos[-1], g, sol.t[-1])
    if t_eval is None:
        return final, []
    return final, list(zip(sol.t, rhos))


def dense_schroedinger_evolve(psi0: np.ndarray, g: Grid, p: DerivedParams,
                              opts: ModelOptions, t_final: float,
                              rtol=1e-9, atol=1e-11, method="DOP853"):
    """Pure-state reference (kappa ignored): i dpsi/dt = H psi."""
    ops = _DenseOperators(g, p, opts)
    n = g.n_points
    dx = g.dx

    def rhs(t, y):
        psi = y.view(np.complex128).reshape(6, n, 1)
        nl = (np.abs(psi[:, :, 0]) ** 2).sum(axis=0) if ops.g_nl != 0.0 else None
        out = -1j * ops.apply_h(psi, nl)
        return out.reshape(-1).view(np.float64)

    y0 = np.ascontiguousarray(psi0, dtype=np.complex128).reshape(-1).view(np.float64)
    sol = solve_ivp(rhs, (0.0, t_final), y0, method=method, rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(f"dense Schroedinger integration failed: {sol.message}")
    return sol.y[:, -1].view(np.complex128).reshape(6, n).copy()


def populations_from_rho(rho: np.ndarray, g: Grid):
    """(P1, P2, P3, photon) from a dense density matrix."""
    n = g.n_points
    diag = np.einsum("ii->i", rho.reshape(6 * n, 6 * n)).real * g.dx
    per_comp = diag.reshape(6, n).sum(axis=1)
    p1 = per_comp[0] + per_comp[1]
    p2 = per_comp[2] + per_comp[3]
    p3 = per_comp[4] + per_comp[5]
    photon = per_comp[1] + per_comp[3] + per_comp[5]
    return float(p1), float(p2), float(p3), float(photon)


def motionless_stirap(p: DerivedParams, sweep_duration: float,
                      order: str = "counterintuitive", rtol=1e-10,
                      atol=1e-12):
    """Three-level transfer with pulses swept in time via x -> v0*t.

    The moving-packet pulse sequence is mapped onto a time-dependent
    Hamiltonian for an atom at rest: position runs linearly from x_start
    to x_start + v0*sweep_duration across the left Raman zone.  Returns
    (P1, P2, P3, max transient P2).
    """
    v0 = p.v0
    x_start = p.x0
    delta = p.delta
    o = p.omega0
    w2 = 2.0 * p.w**2
    if order == "counterintuitive":
        c_s, c_p = p.x_s, p.x_p
    elif order == "intuitive":
        c_s, c_p = p.x_p, p.x_s  # pump pulse encountered first: wrong order
    else:
        raise ValueError(f"order: {order!r}")

    def rhs(t, y):
        x = x_start + v0 * t
        om_s = o * math.exp(-((x - c_s) ** 2) / w2)
        om_p = o * math.exp(-((x - c_p) ** 2) / w2)
        psi = y.view(np.complex128)
        h = np.array([[0.0, om_p, 0.0],
                      [om_p, -delta, om_s],
                      [0.0, om_s, 0.0]])
        return (-1j * (h @ psi)).view(np.float64)

    y0 = np.array([1.0 + 0j, 0j, 0j]).view(np.float64)
    t_eval = np.linspace(0.0, sweep_duration, 2001)
    sol = solve_ivp(rhs, (0.0, sweep_duration), y0, method="DOP853",
                    rtol=rtol, atol=atol, t_eval=t_eval)
    if not sol.success:
        raise RuntimeError(f"motionless STIRAP integration failed: {sol.message}")
    traj = np.ascontiguousarray(sol.y.T).view(np.complex128)  # (T, 3)
    max_p2 = float(np.max(np.abs(traj[:, 1]) ** 2))
    pops = np.abs(traj[-1]) ** 2
    pops /= pops.sum()
    return float(pops[0]), float(pops[1]), float(pops[2]), max_p2


def free_gaussian_reference(x0: float, delta_l: float, v0: float, t: float,
                            hbar_over_m: float):
    """Analytic center and width of a freely dispersing Gaussian packet."""
    center = x0 + v0 * t
    width = delta_l * math.sqrt(1.0 + (hbar_over_m * t / delta_l**2) ** 2)
    return center, width
