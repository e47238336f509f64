"""Physical parameters and nondimensionalization.

Internal simulation units: hbar = 1, length in micrometers, time in
milliseconds.  Energies are then angular frequencies in rad/ms, which puts
every scale of the problem between O(1) and O(1e5).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

HBAR = 1.054571817e-34  # J s (CODATA 2018)
# Rb-87 mass is not printed in the source material; pinned here from the
# 86.909180 u atomic mass (CODATA u = 1.66053907e-27 kg).
RB87_MASS = 1.44316e-25  # kg

# Conversion factors SI -> internal units
_M_TO_UM = 1e6
_S_TO_MS = 1e3
_RADPS_TO_RADPMS = 1e-3  # rad/s -> rad/ms
_MPS_TO_UMPMS = 1e3      # m/s -> um/ms


@dataclass(frozen=True)
class PhysicalParams:
    """Laboratory-frame parameters, SI units throughout."""

    omega0: float        # peak Rabi frequency, rad/s
    delta: float         # detuning, rad/s
    kappa: float         # cavity decay rate, 1/s
    waist_w: float       # pulse width, m
    x_p: float           # pump pulse center (left Raman zone), m
    x_s: float           # Stokes pulse center (left Raman zone), m
    y_s: float           # cavity Stokes center (right zone), m
    y_p: float           # pump center (right zone), m
    atom_mass_m: float   # kg
    a_s: float           # s-wave scattering length, m
    delta_t: float       # transverse width, m
    n_atoms: float       # atom number N
    x0: float            # initial packet center, m
    delta_l: float       # initial packet width, m
    v0: float            # initial speed (magnitude), m/s
    initial_level: int = 1           # 1 or 3
    initial_direction: str = "positive"  # "positive" | "negative"

    def validate(self):
        from .errors import ValidationError

        positive = [
            ("omega0", self.omega0), ("waist_w", self.waist_w),
            ("delta_l", self.delta_l), ("delta_t", self.delta_t),
            ("atom_mass_m", self.atom_mass_m),
        ]
        for name, value in positive:
            if not value > 0:
                raise ValidationError(name, f"must be > 0, got {value}")
        if self.kappa < 0:
            raise ValidationError("kappa", f"must be >= 0, got {self.kappa}")
        if self.n_atoms < 1:
            raise ValidationError("n_atoms", f"must be >= 1, got {self.n_atoms}")
        if self.initial_level not in (1, 3):
            raise ValidationError("initial_level", f"must be 1 or 3, got {self.initial_level}")
        if self.initial_direction not in ("positive", "negative"):
            raise ValidationError("initial_direction", repr(self.initial_direction))
        if not (math.isclose(self.x_p, -self.y_s, rel_tol=1e-9, abs_tol=1e-18)
                and math.isclose(self.x_s, -self.y_p, rel_tol=1e-9, abs_tol=1e-18)):
            warnings.warn("pulse geometry is not mirror symmetric "
                          "(x_p != -y_s or x_s != -y_p)", stacklevel=2)


@dataclass(frozen=True)
class DerivedParams:
    """Parameters in internal units (hbar = 1, um, ms)."""

    omega0: float        # rad/ms
    delta: float         # rad/ms
    kappa: float         # 1/ms
    w: float             # um
    x_p: float
    x_s: float
    y_s: float
    y_p: float
    hbar_over_m: float   # um^2/ms
    a_s: float           # um
    delta_t: float       # um
    interaction_u: float  # energy*length in hbar=1 units: um/ms
    un_product: float    # U * N
    n_atoms: float
    k0: float            # rad/um, from the unsigned v0
    x0: float            # um
    delta_l: float       # um
    v0: float            # um/ms (magnitude)
    initial_level: int
    initial_direction: str
    unit_length: float = 1e-6   # m
    unit_time: float = 1e-3     # s
    unit_energy: float = HBAR / 1e-3  # J

    @property
    def signed_v0(self) -> float:
        return self.v0 if self.initial_direction == "positive" else -self.v0

    @property
    def signed_x0(self) -> float:
        return self.x0 if self.initial_direction == "positive" else -self.x0


def nondimensionalize(p: PhysicalParams) -> DerivedParams:
    """Convert SI parameters to the internal hbar=1, um, ms unit system."""
    p.validate()
    hbar_over_m = HBAR / p.atom_mass_m * _M_TO_UM**2 / _S_TO_MS  # um^2/ms
    a_s = p.a_s * _M_TO_UM
    delta_t = p.delta_t * _M_TO_UM
    interaction_u = 2.0 * hbar_over_m * a_s / delta_t**2
    v0 = p.v0 * _MPS_TO_UMPMS
    return DerivedParams(
        omega0=p.omega0 * _RADPS_TO_RADPMS,
        delta=p.delta * _RADPS_TO_RADPMS,
        kappa=p.kappa * _RADPS_TO_RADPMS,
        w=p.waist_w * _M_TO_UM,
        x_p=p.x_p * _M_TO_UM,
        x_s=p.x_s * _M_TO_UM,
        y_s=p.y_s * _M_TO_UM,
        y_p=p.y_p * _M_TO_UM,
        hbar_over_m=hbar_over_m,
        a_s=a_s,
        delta_t=delta_t,
        interaction_u=interaction_u,
        un_product=interaction_u * p.n_atoms,
        n_atoms=p.n_atoms,
        k0=abs(v0) / hbar_over_m,
        x0=p.x0 * _M_TO_UM,
        delta_l=p.delta_l * _M_TO_UM,
        v0=v0,
        initial_level=p.initial_level,
        initial_direction=p.initial_direction,
    )


def redimensionalize(d: DerivedParams) -> PhysicalParams:
    """Inverse of :func:`nondimensionalize`."""
    return PhysicalParams(
        omega0=d.omega0 / _RADPS_TO_RADPMS,
        delta=d.delta / _RADPS_TO_RADPMS,
        kappa=d.kappa / _RADPS_TO_RADPMS,
        waist_w=d.w / _M_TO_UM,
        x_p=d.x_p / _M_TO_UM,
        x_s=d.x_s / _M_TO_UM,
        y_s=d.y_s / _M_TO_UM,
        y_p=d.y_p / _M_TO_UM,
        atom_mass_m=HBAR / (d.hbar_over_m / _M_TO_UM**2 * _S_TO_MS),
        a_s=d.a_s / _M_TO_UM,
        delta_t=d.delta_t / _M_TO_UM,
        n_atoms=d.n_atoms,
        x0=d.x0 / _M_TO_UM,
        delta_l=d.delta_l / _M_TO_UM,
        v0=d.v0 / _MPS_TO_UMPMS,
        initial_level=d.initial_level,
        initial_direction=d.initial_direction,
    )


def paper_default_params() -> PhysicalParams:
    """Published experiment-scale parameter set (Rb-87 condensate)."""
    return PhysicalParams(
        omega0=2 * math.pi * 10.9e6,
        delta=2 * math.pi * 55e6,
        kappa=2 * math.pi * 1.3e6,
        waist_w=15e-6,
        x_p=-130e-6,
        x_s=-160e-6,
        y_s=130e-6,
        y_p=160e-6,
        atom_mass_m=RB87_MASS,
        a_s=5.77e-9,
        delta_t=3e-6,
        n_atoms=100_000,
        x0=-260e-6,
        delta_l=10e-6,
        v0=0.05,
        initial_level=1,
        initial_direction="positive",
    )


def desk_scale_params() -> PhysicalParams:
    """Scaled-down configuration for fast testing.

    Omega0, Delta, kappa divided by 100 and v0 by 10: preserves
    Delta/Omega0, kappa/Omega0 and the kinetic-energy-to-barrier ratio
    exactly, while keeping 1/kappa far below the transit time.
    """
    p = paper_default_params()
    # v0/10 cuts the kinetic energy by 100, so the atom number drops by
    # the same factor to preserve the interaction-to-kinetic ratio
    return replace(p, omega0=p.omega0 / 100, delta=p.delta / 100,
                   kappa=p.kappa / 100, v0=p.v0 / 10, n_atoms=1000)


def toy_scale_params() -> PhysicalParams:
    """Tiny configuration for oracle comparisons on <= 64 grid points.

    Couplings divided by 2000 and the whole geometry shrunk tenfold; keeps
    a counterintuitive pulse ordering and a cavity decay much faster than
    the transit time, at a stiffness a dense integrator can afford.
    """
    p = paper_default_params()
    return replace(
        p,
        omega0=p.omega0 / 2000, delta=p.delta / 2000, kappa=p.kappa / 2000,
        waist_w=1.0e-6,
        x_p=-7e-6, x_s=-9e-6, y_s=7e-6, y_p=9e-6,
        x0=-13e-6, delta_l=2.0e-6,
        v0=1.5e-3,
        # slower packet and shrunk cloud: keep the mean field well below
        # the kinetic energy so the toy still acts as a diode
        n_atoms=1000,
    )
