"""Pulse stack, per-gridpoint 6x6 coupling matrix, and half-step factors.

The five Gaussian pulses are static in time, so the position-diagonal part
of the generator (coupling + detuning + cavity decay) can be exponentiated
once per (grid, dt) and reused for every step of every trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence
from .field import Grid
from .params import DerivedParams

# Amplitudes below this fraction of the peak are flushed to zero to avoid
# denormal-float slowdowns in the inner loop.
_FLUSH = 1e-300


@dataclass(frozen=True)
class ModelOptions:
    """Switches between the physically consistent model (defaults) and the
    literal printed couplings (kept for fidelity-to-text experiments)."""

    detuning_placement: str = "excited_state"  # or "level3_literal"
    cavity_ordering: str = "jaynes_cummings"   # or "literal_paper"
    nonlinearity_on: bool = True
    kinetic_on: bool = True

    def __post_init__(self):
        if self.detuning_placement not in ("excited_state", "level3_literal"):
            raise ValueError(f"detuning_placement: {self.detuning_placement!r}")
        if self.cavity_ordering not in ("jaynes_cummings", "literal_paper"):
            raise ValueError(f"cavity_ordering: {self.cavity_ordering!r}")


@dataclass(frozen=True)
class PulseValues:
    """The five pulse envelopes evaluated at one position (rad/ms)."""

    w_stark: float
    omega_s: float
    omega_p: float
    g_s: float
    g_p: float


def _gauss(x, center, w):
    val = np.exp(-((x - center) ** 2) / (2.0 * w**2))
    return np.where(val < _FLUSH, 0.0, val)


def evaluate_pulses(x, p: DerivedParams):
    """Evaluate all five pulse envelopes at x (scalar or array).

    The Stark pulse has twice the amplitude of the four Raman pulses.
    """
    o = p.omega0
    w_stark = 2.0 * o * _gauss(x, 0.0, p.w)
    omega_s = o * _gauss(x, p.x_s, p.w)
    omega_p = o * _gauss(x, p.x_p, p.w)
    g_s = o * _gauss(x, p.y_s, p.w)
    g_p = o * _gauss(x, p.y_p, p.w)
    if np.isscalar(x):
        return PulseValues(float(w_stark), float(omega_s), float(omega_p),
                           float(g_s), float(g_p))
    return PulseValues(w_stark, omega_s, omega_p, g_s, g_p)


@dataclass
class CouplingMatrix:
    """Hermitian coupling plus the diagonal cavity-decay pattern at one x."""

    hermitian_part: np.ndarray  # (6, 6) complex
    decay_diagonal: np.ndarray  # (6,) real: (0, k/2, 0, k/2, 0, k/2)
    x: float


def decay_diagonal(kappa: float) -> np.ndarray:
    d = np.zeros(6)
    d[[1, 3, 5]] = kappa / 2.0
    return d


def assemble_coupling_grid(x, p: DerivedParams, opts: ModelOptions) -> np.ndarray:
    """Hermitian 6x6 coupling at every x; returns shape (len(x), 6, 6).

    Basis order (1,0),(1,1),(2,0),(2,1),(3,0),(3,1).

    Detuning: in the default "excited_state" mode the excited (2,j)
    diagonals carry -Delta, which keeps the two ground manifolds two-photon
    resonant (STIRAP works) and makes the detuned G_p pulse a repulsive
    barrier for backward |3> atoms, matching the intended device behavior.
    The "level3_literal" mode places +Delta on the (3,j) diagonals instead.

    Cavity: "jaynes_cummings" couples (2,0) <-> (1,1) (photon emitted when
    the atom drops 2 -> 1, so a vacuum-cavity |1> atom is uncoupled);
    "literal_paper" couples (2,1) <-> (1,0).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    pv = evaluate_pulses(x, p)
    n = x.shape[0]
    h = np.zeros((n, 6, 6), dtype=np.complex128)
    h[:, 0, 0] = pv.w_stark
    h[:, 1, 1] = pv.w_stark
    if opts.detuning_placement == "excited_state":
        h[:, 2, 2] = -p.delta
        h[:, 3, 3] = -p.delta
    else:
        h[:, 4, 4] = p.delta
        h[:, 5, 5] = p.delta
    raman23 = pv.omega_s + pv.g_p
    h[:, 2, 4] = raman23  # <(2,0)|H|(3,0)>
    h[:, 3, 5] = raman23
    h[:, 2, 0] = pv.omega_p  # <(2,0)|H|(1,0)>
    h[:, 3, 1] = pv.omega_p
    if opts.cavity_ordering == "jaynes_cummings":
        h[:, 2, 1] = pv.g_s  # <(2,0)|H|(1,1)>
    else:
        h[:, 3, 0] = pv.g_s  # <(2,1)|H|(1,0)>
    h += np.conj(np.swapaxes(h, 1, 2))
    # the diagonal got doubled by the Hermitian completion
    idx = np.arange(6)
    h[:, idx, idx] /= 2.0
    return h


def assemble_coupling(x: float, p: DerivedParams, opts: ModelOptions) -> CouplingMatrix:
    """Single-position variant returning the full CouplingMatrix record."""
    h = assemble_coupling_grid(np.array([x]), p, opts)[0]
    return CouplingMatrix(h, decay_diagonal(p.kappa), x)


# ---------------------------------------------------------------------------
# batched matrix exponential

_PADE13_B = (
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0, 670442572800.0,
    33522128640.0, 1323241920.0, 40840800.0, 960960.0, 16380.0, 182.0, 1.0,
)
_THETA13 = 5.371920351148152


def expm_batched(a: np.ndarray) -> np.ndarray:
    """exp(a) for a stack of small matrices (scaling-and-squaring, Pade 13).

    Uses a uniform squaring count over the batch, which keeps every
    operation a batched matmul.
    """
    a = np.asarray(a, dtype=np.complex128)
    norm = float(np.abs(a).sum(axis=-2).max()) if a.size else 0.0
    if not np.isfinite(norm):
        raise NonConvergence("non-finite entries in exponent")
    s = max(0, int(np.ceil(np.log2(norm / _THETA13))) if norm > _THETA13 else 0)
    a = a / (2.0**s)
    b = _PADE13_B
    eye = np.broadcast_to(np.eye(a.shape[-1], dtype=np.complex128), a.shape)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a2 @ a4
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * eye)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye)
    r = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        r = r @ r
    return r


@dataclass
class HalfStepFactors:
    """Precomputed exp(-i (H - i diag(decay)) dt/2) at every grid point."""

    matrices: np.ndarray       # (n_points, 6, 6) complex
    kernel_layout: np.ndarray  # (6, 6, n_points) contiguous copy for the fast kernel
    dt: float


def precompute_half_step(g: Grid, p: DerivedParams, opts: ModelOptions,
                         dt: float) -> HalfStepFactors:
    """Matrix exponential of the position-diagonal generator over dt/2.

    kappa = 0 uses an eigendecomposition of the Hermitian part (exactly
    unitary factors); kappa > 0 uses batched Pade scaling-and-squaring.
    """
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    h = assemble_coupling_grid(g.x, p, opts)
    if p.kappa == 0.0:
        w, v = np.linalg.eigh(h)
        phase = np.exp(-0.5j * dt * w)
        mats = np.einsum("xab,xb,xcb->xac", v, phase, v.conj())
    else:
        d = decay_diagonal(p.kappa)
        m = h.astype(np.complex128)
        idx = np.arange(6)
        m[:, idx, idx] -= 1j * d
        mats = expm_batched(-0.5j * dt * m)
    if not np.all(np.isfinite(mats)):
        raise NonConvergence("half-step factors contain non-finite entries")
    layout = np.ascontiguousarray(mats.transpose(1, 2, 0))
    return HalfStepFactors(mats, layout, dt)
