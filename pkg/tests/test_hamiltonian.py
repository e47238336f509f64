import dataclasses
import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from atomdiode.field import Grid
from atomdiode.hamiltonian import (ModelOptions, assemble_coupling,
                                   assemble_coupling_grid, decay_diagonal,
                                   evaluate_pulses, expm_batched,
                                   precompute_half_step)
from atomdiode.params import nondimensionalize, toy_scale_params

TOY = nondimensionalize(toy_scale_params())


def hand_built_matrix(x: float, p, detuning: str, cavity: str) -> np.ndarray:
    """Independent element-by-element 6x6 builder for the coupling matrix.

    Written directly from the level scheme, without reusing any assembly
    code: basis (1,0),(1,1),(2,0),(2,1),(3,0),(3,1).
    """
    gauss = lambda c: math.exp(-((x - c) ** 2) / (2.0 * p.w**2))
    w_stark = 2.0 * p.omega0 * gauss(0.0)
    om_s = p.omega0 * gauss(p.x_s)
    om_p = p.omega0 * gauss(p.x_p)
    g_s = p.omega0 * gauss(p.y_s)
    g_p = p.omega0 * gauss(p.y_p)
    h = np.zeros((6, 6), dtype=complex)
    # Stark pulse acts on level 1, both photon sectors
    h[0, 0] = h[1, 1] = w_stark
    if detuning == "excited_state":
        h[2, 2] = h[3, 3] = -p.delta
    else:
        h[4, 4] = h[5, 5] = p.delta
    # classical Raman couplings conserve the photon number
    for j in range(2):
        h[2 + j, 0 + j] = h[0 + j, 2 + j] = om_p        # |1> <-> |2>
        h[2 + j, 4 + j] = h[4 + j, 2 + j] = om_s + g_p  # |2> <-> |3>
    # cavity coupling changes the photon number by one
    if cavity == "jaynes_cummings":
        h[2, 1] = h[1, 2] = g_s  # (2,0) <-> (1,1)
    else:
        h[3, 0] = h[0, 3] = g_s  # (2,1) <-> (1,0)
    return h


@pytest.mark.parametrize("detuning", ["excited_state", "level3_literal"])
@pytest.mark.parametrize("cavity", ["jaynes_cummings", "literal_paper"])
@pytest.mark.parametrize("x", [-13.0, -9.0, -8.0, -7.0, 0.0, 7.0, 8.3, 9.0, 20.0])
def test_matches_hand_built(detuning, cavity, x):
    opts = ModelOptions(detuning_placement=detuning, cavity_ordering=cavity)
    got = assemble_coupling_grid(np.array([x]), TOY, opts)[0]
    want = hand_built_matrix(x, TOY, detuning, cavity)
    assert np.allclose(got, want, atol=1e-12, rtol=1e-12)


def test_grid_assembly_is_hermitian():
    g = Grid(-22.0, 22.0, 64)
    h = assemble_coupling_grid(g.x, TOY, ModelOptions())
    assert np.allclose(h, np.conj(np.swapaxes(h, 1, 2)))


def test_pulse_envelopes():
    pv = evaluate_pulses(TOY.x_s, TOY)
    assert pv.omega_s == pytest.approx(TOY.omega0)       # peak at its center
    assert pv.omega_p == pytest.approx(
        TOY.omega0 * math.exp(-(TOY.x_s - TOY.x_p) ** 2 / (2 * TOY.w**2)))
    pv0 = evaluate_pulses(0.0, TOY)
    assert pv0.w_stark == pytest.approx(2 * TOY.omega0)  # double amplitude
    far = evaluate_pulses(1e6, TOY)
    assert far.w_stark == far.omega_s == far.omega_p == far.g_s == far.g_p == 0.0


def test_decay_pattern():
    d = decay_diagonal(TOY.kappa)
    assert np.allclose(d, [0, TOY.kappa / 2, 0, TOY.kappa / 2, 0, TOY.kappa / 2])
    cm = assemble_coupling(0.0, TOY, ModelOptions())
    assert np.allclose(cm.decay_diagonal, d)


def test_model_options_validation():
    with pytest.raises(ValueError):
        ModelOptions(detuning_placement="nope")
    with pytest.raises(ValueError):
        ModelOptions(cavity_ordering="nope")


@settings(deadline=None, max_examples=30)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1),
       scale=st.floats(min_value=1e-3, max_value=50.0))
def test_expm_batched_matches_scipy(seed, scale):
    rng = np.random.default_rng(seed)
    a = scale * (rng.normal(size=(4, 6, 6)) + 1j * rng.normal(size=(4, 6, 6)))
    got = expm_batched(a)
    for i in range(4):
        want = scipy.linalg.expm(a[i])
        assert np.allclose(got[i], want, rtol=1e-9, atol=1e-9 * scale)


def test_half_step_factors_unitary_without_decay():
    g = Grid(-22.0, 22.0, 64)
    p0 = dataclasses.replace(TOY, kappa=0.0)
    half = precompute_half_step(g, p0, ModelOptions(), 5e-3)
    prod = half.matrices @ np.conj(np.swapaxes(half.matrices, 1, 2))
    eye = np.broadcast_to(np.eye(6), prod.shape)
    assert np.allclose(prod, eye, atol=1e-12)


def test_half_step_factors_contract_with_decay():
    g = Grid(-22.0, 22.0, 64)
    half = precompute_half_step(g, TOY, ModelOptions(), 5e-3)
    # singular values never exceed 1: decay only removes norm
    svals = np.linalg.svd(half.matrices, compute_uv=False)
    assert np.all(svals <= 1.0 + 1e-12)
    # where all pulses vanish the photon components decay exactly
    idx_far = 0  # x = -22, far from every pulse center
    m = half.matrices[idx_far]
    expected = math.exp(-0.25 * TOY.kappa * 5e-3)
    assert m[1, 1] == pytest.approx(expected, rel=1e-10)
    assert m[0, 0] == pytest.approx(1.0, rel=1e-10)


def test_half_step_paths_agree():
    """Pade path at kappa=0 equals the eigendecomposition path."""
    g = Grid(-22.0, 22.0, 64)
    p0 = dataclasses.replace(TOY, kappa=0.0)
    half_eigh = precompute_half_step(g, p0, ModelOptions(), 5e-3)
    h = assemble_coupling_grid(g.x, p0, ModelOptions())
    pade = expm_batched(-0.5j * 5e-3 * h)
    assert np.allclose(half_eigh.matrices, pade, atol=1e-12)


def test_kernel_layout_matches_matrices():
    g = Grid(-22.0, 22.0, 64)
    half = precompute_half_step(g, TOY, ModelOptions(), 5e-3)
    assert half.kernel_layout.shape == (6, 6, 64)
    assert half.kernel_layout.flags["C_CONTIGUOUS"]
    assert np.allclose(half.kernel_layout, half.matrices.transpose(1, 2, 0))
