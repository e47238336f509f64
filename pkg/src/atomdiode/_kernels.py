"""Inner-loop kernels for the split step.

Numba-compiled when available; a pure-numpy fallback with identical
semantics is kept for environments without numba and for equivalence
tests.  The nonlinear phase is a scalar in spinor space (total-density
interaction), so it commutes with the 6x6 coupling factor at each x; the
kernels exploit this to fuse matvec and phase into one pass.
"""

from __future__ import annotations

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def _first_half_numpy(fc, psi, g_dt_half, out, ph):
    """(a) half coupling factor then (b) half nonlinear phase from the
    post-factor density.  fc is (6,6,n); psi, out are (6,n)."""
    np.einsum("ijx,jx->ix", fc, psi, out=out)
    nden = (out.real**2 + out.imag**2).sum(axis=0)
    np.exp(-1j * g_dt_half * nden, out=ph)
    out *= ph
    return out, ph


def _second_half_numpy(fc, psi, g_dt_half, out, ph):
    """(d) half nonlinear phase from the pre-factor (post-kinetic) density
    then (e) half coupling factor; returns the squared-amplitude sum."""
    nden = (psi.real**2 + psi.imag**2).sum(axis=0)
    np.exp(-1j * g_dt_half * nden, out=ph)
    np.einsum("ijx,jx->ix", fc, psi, out=out)
    out *= ph
    return float((out.real**2 + out.imag**2).sum())


if HAVE_NUMBA:

    @numba.njit(fastmath=True, cache=True)
    def _first_half_numba(fc, psi, g_dt_half, out, ph):  # pragma: no cover
        n = psi.shape[1]
        for x in range(n):
            nden = 0.0
            for i in range(6):
                acc = 0j
                for j in range(6):
                    acc += fc[i, j, x] * psi[j, x]
                out[i, x] = acc
                nden += acc.real * acc.real + acc.imag * acc.imag
            th = g_dt_half * nden
            p = complex(np.cos(th), -np.sin(th))
            ph[x] = p
            for i in range(6):
                out[i, x] *= p

    @numba.njit(fastmath=True, cache=True)
    def _second_half_numba(fc, psi, g_dt_half, out, ph):  # pragma: no cover
        n = psi.shape[1]
        total = 0.0
        for x in range(n):
            nden = 0.0
            for j in range(6):
                v = psi[j, x]
                nden += v.real * v.real + v.imag * v.imag
            th = g_dt_half * nden
            p = complex(np.cos(th), -np.sin(th))
            ph[x] = p
            for i in range(6):
                acc = 0j
                for j in range(6):
                    acc += fc[i, j, x] * psi[j, x]
                acc *= p
                out[i, x] = acc
                total += acc.real * acc.real + acc.imag * acc.imag
        return total


class StepKernel:
    """Stateful wrapper holding work buffers for one trajectory worker."""

    def __init__(self, n_points: int, use_numba: bool | None = None):
        self.out = np.empty((6, n_points), dtype=np.complex128)
        self.ph = np.empty(n_points, dtype=np.complex128)
        if use_numba is None:
            use_numba = HAVE_NUMBA
        self.use_numba = use_numba and HAVE_NUMBA

    def first_half(self, fc, psi, g_dt_half):
        if self.use_numba:
            _first_half_numba(fc, psi, g_dt_half, self.out, self.ph)
        else:
            _first_half_numpy(fc, psi, g_dt_half, self.out, self.ph)
        return self.out

    def second_half(self, fc, psi, g_dt_half):
        if self.use_numba:
            return _second_half_numba(fc, psi, g_dt_half, self.out, self.ph)
        return _second_half_numpy(fc, psi, g_dt_half, self.out, self.ph)
