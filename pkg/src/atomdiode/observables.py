"""Measured quantities: populations, position/velocity, densities,
transmission, photon number, dark-state projection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .field import LEVEL_COMPONENTS, PHOTON1, SpinorField, norm2
from .hamiltonian import evaluate_pulses
from .params import DerivedParams

DETECTOR_PLANE = 200.0  # um; past the outermost pulse center by > 2.5 waists


@dataclass
class ObservableSample:
    t: float
    p1: float
    p2: float
    p3: float
    xbar: float
    v: float
    photon: float
    dark_pop: float
    norm: float

    def as_row(self):
        return np.array([self.t, self.p1, self.p2, self.p3, self.xbar,
                         self.v, self.photon, self.dark_pop, self.norm])


ROW_FIELDS = ("t", "p1", "p2", "p3", "xbar", "v", "photon", "dark_pop", "norm")


def populations(f: SpinorField):
    """(P1, P2, P3): level populations summed over the photon index."""
    a = f.amplitudes
    dens = (a.real**2 + a.imag**2)
    dx = f.grid.dx
    return tuple(float((dens[c0] + dens[c1]).sum() * dx)
                 for c0, c1 in (LEVEL_COMPONENTS[i] for i in (1, 2, 3)))


def photon_number(f: SpinorField) -> float:
    a = f.amplitudes
    return float(sum((a[c].real**2 + a[c].imag**2).sum() for c in PHOTON1)
                 * f.grid.dx)


def mean_position_and_velocity(f: SpinorField, p: DerivedParams):
    """(xbar, v) with v = <p>/m from the momentum representation.

    Returns (xbar, v, norm_used); the finite-difference velocity estimator
    is assembled at the time-series level from consecutive xbar samples.
    """
    a = f.amplitudes
    dens = (a.real**2 + a.imag**2).sum(axis=0)
    nrm = float(dens.sum() * f.grid.dx)
    xbar = float((f.grid.x * dens).sum() * f.grid.dx / nrm)
    ak = sfft.fft(a, axis=1)
    dens_k = (ak.real**2 + ak.imag**2).sum(axis=0)
    kbar = float((f.grid.k * dens_k).sum() / dens_k.sum())
    return xbar, p.hbar_over_m * kbar, nrm


def reduced_density(f: SpinorField, level: int) -> np.ndarray:
    """rho_i(x): spatial density of one atomic level, photon index traced."""
    if level not in (1, 2, 3):
        raise ValueError(f"level must be 1, 2 or 3, got {level}")
    c0, c1 = LEVEL_COMPONENTS[level]
    a = f.amplitudes
    return (a[c0].real**2 + a[c0].imag**2 + a[c1].real**2 + a[c1].imag**2)


def component_densities(f: SpinorField) -> np.ndarray:
    a = f.amplitudes
    return a.real**2 + a.imag**2


def transmission_from_density(total_density: np.ndarray, grid,
                              direction: str, x_det: float = DETECTOR_PLANE) -> float:
    """Probability weight past the detector plane (x > x_det for forward
    runs, x < -x_det for backward runs)."""
    x = grid.x
    if direction == "positive":
        sel = x > x_det
    else:
        sel = x < -x_det
    return float(total_density[sel].sum() * grid.dx)


def transmission(f: SpinorField, direction: str,
                 x_det: float = DETECTOR_PLANE) -> float:
    a = f.amplitudes
    dens = (a.real**2 + a.imag**2).sum(axis=0)
    return transmission_from_density(dens, f.grid, direction, x_det)


_DARK_FLOOR_FRAC = 1e-12

# region -> (component pair (bright order: [stokes-side, pump-side]),
#            fallback component for the no-coupling zone)
_DARK_REGIONS = {
    "first_stirap": ((0, 4), 0),   # (|1,0>, |3,0>) with (Omega_s, Omega_p)
    "second_stirap": ((4, 1), 4),  # (|3,0>, |1,1>) with (G_s, G_p)
}


def dark_state_population(f: SpinorField, p: DerivedParams, region: str) -> float:
    """Weight in the local adiabatic dark direction of one STIRAP zone.

    d(x) ~ (S(x), -P(x)) / sqrt(S^2 + P^2) on the relevant two-component
    subspace; where both couplings vanish (below 1e-12 of the peak) the
    dark direction continues as the incoming bare level.
    """
    if region not in _DARK_REGIONS:
        raise ValueError(f"region must be one of {sorted(_DARK_REGIONS)}")
    (ca, cb), fallback = _DARK_REGIONS[region]
    pv = evaluate_pulses(f.grid.x, p)
    if region == "first_stirap":
        s, pp = pv.omega_s, pv.omega_p
    else:
        s, pp = pv.g_s, pv.g_p
    floor = _DARK_FLOOR_FRAC * p.omega0
    denom = np.sqrt(s**2 + pp**2)
    active = np.maximum(s, pp) > floor
    a = f.amplitudes
    overlap = np.where(
        active,
        (s * a[ca] - pp * a[cb]) / np.where(active, denom, 1.0),
        a[fallback],
    )
    return float((overlap.real**2 + overlap.imag**2).sum() * f.grid.dx)


def sample_observables(f: SpinorField, p: DerivedParams, t: float) -> ObservableSample:
    """One time-series record; dark region picked by which side of the
    device the packet currently occupies."""
    p1, p2, p3 = populations(f)
    xbar, v, nrm = mean_position_and_velocity(f, p)
    region = "first_stirap" if xbar < 0 else "second_stirap"
    dark = dark_state_population(f, p, region)
    return ObservableSample(t, p1, p2, p3, xbar, v, photon_number(f), dark,
                            norm2(f))
