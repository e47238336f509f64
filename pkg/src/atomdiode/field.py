"""Spatial grid and six-component spinor field.

Component basis order is fixed throughout the package:
index 0..5 = (1,0), (1,1), (2,0), (2,1), (3,0), (3,1)
where the first label is the atomic level and the second the cavity photon
number (truncated Fock space {0, 1}).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

import numpy as np
import scipy.fft as sfft

from .errors import DomainTooSmall, NyquistViolation, ValidationError
from .params import DerivedParams

N_COMPONENTS = 6
LEVEL_COMPONENTS = {1: (0, 1), 2: (2, 3), 3: (4, 5)}  # level -> (j=0, j=1)
PHOTON0 = (0, 2, 4)
PHOTON1 = (1, 3, 5)


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [x_min, x_max) with 2^k points."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not _is_power_of_two(self.n_points):
            raise ValidationError("n_points", f"must be a power of two, got {self.n_points}")
        if not self.x_max > self.x_min:
            raise ValidationError("x_max", "must exceed x_min")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_points

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)

    @property
    def k(self) -> np.ndarray:
        """Wavenumbers in FFT ordering, rad/um."""
        return 2 * np.pi * sfft.fftfreq(self.n_points, d=self.dx)


@dataclass
class SpinorField:
    """Complex amplitudes psi[c, x] for the six components on a grid."""

    amplitudes: np.ndarray  # (6, n_points) complex128
    grid: Grid
    representation: str = dfield(default="position")  # "position" | "momentum"

    def copy(self) -> "SpinorField":
        return SpinorField(self.amplitudes.copy(), self.grid, self.representation)


def norm2(f: SpinorField) -> float:
    """Total squared norm (Riemann sum); unit weight in either representation."""
    s = float(np.vdot(f.amplitudes, f.amplitudes).real)
    if f.representation == "position":
        return s * f.grid.dx
    return s  # unitary-DFT momentum amplitudes carry the dx weight already


def density(f: SpinorField) -> np.ndarray:
    """Total position density n(x) summed over all six components."""
    a = f.amplitudes
    return (a.real**2 + a.imag**2).sum(axis=0)


def build_initial_state(g: Grid, p: DerivedParams) -> SpinorField:
    """Gaussian packet in the (initial_level, photon=0) component.

    Direction handling: a "negative" initial_direction mirrors both the
    packet center and the velocity.
    """
    x0 = p.signed_x0
    v0 = p.signed_v0
    if x0 - 4 * p.delta_l < g.x_min or x0 + 4 * p.delta_l > g.x_max:
        raise DomainTooSmall(
            f"packet [{x0 - 4 * p.delta_l:.1f}, {x0 + 4 * p.delta_l:.1f}] um "
            f"outside domain [{g.x_min}, {g.x_max}] um")
    k0 = abs(v0) / p.hbar_over_m
    k_need = k0 + 4.0 / p.delta_l
    k_allow = 0.9 * np.pi / g.dx
    if k_need >= k_allow:
        raise NyquistViolation(
            f"|k0| + 4/delta_l = {k_need:.2f} rad/um exceeds 0.9*pi/dx = "
            f"{k_allow:.2f} rad/um; raise n_points")
    x = g.x
    psi = np.zeros((N_COMPONENTS, g.n_points), dtype=np.complex128)
    comp = LEVEL_COMPONENTS[p.initial_level][0]
    kv = v0 / p.hbar_over_m
    psi[comp] = ((np.pi * p.delta_l**2) ** -0.25
                 * np.exp(1j * kv * x)
                 * np.exp(-((x - x0) ** 2) / (2 * p.delta_l**2)))
    f = SpinorField(psi, g)
    f.amplitudes /= np.sqrt(norm2(f))
    return f


def to_momentum(f: SpinorField) -> SpinorField:
    """Unitary DFT per component (norm preserving)."""
    if f.representation != "position":
        raise ValueError("field is already in momentum representation")
    amps = sfft.fft(f.amplitudes, axis=1, norm="ortho") * np.sqrt(f.grid.dx)
    return SpinorField(amps, f.grid, "momentum")


def to_position(f: SpinorField) -> SpinorField:
    if f.representation != "momentum":
        raise ValueError("field is already in position representation")
    amps = sfft.ifft(f.amplitudes / np.sqrt(f.grid.dx), axis=1, norm="ortho")
    return SpinorField(amps, f.grid, "position")
