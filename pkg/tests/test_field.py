import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from atomdiode.errors import (DomainTooSmall, NyquistViolation,
                              ValidationError)
from atomdiode.field import (Grid, SpinorField, build_initial_state, density,
                             norm2, to_momentum, to_position)
from atomdiode.params import nondimensionalize, toy_scale_params


def toy_derived(**overrides):
    p = toy_scale_params()
    if overrides:
        p = dataclasses.replace(p, **overrides)
    return nondimensionalize(p)


def test_grid_geometry():
    g = Grid(-22.0, 22.0, 64)
    assert g.dx == pytest.approx(44.0 / 64)
    assert g.x[0] == pytest.approx(-22.0)
    assert g.x[-1] == pytest.approx(22.0 - g.dx)
    assert g.k[0] == 0.0
    assert np.max(g.k) == pytest.approx(np.pi / g.dx - 2 * np.pi / 44.0)


def test_grid_rejects_non_power_of_two():
    with pytest.raises(ValidationError):
        Grid(-22.0, 22.0, 65)
    with pytest.raises(ValidationError):
        Grid(1.0, -1.0, 64)


def test_initial_state_normalized():
    g = Grid(-22.0, 22.0, 64)
    f = build_initial_state(g, toy_derived())
    assert norm2(f) == pytest.approx(1.0, abs=1e-14)


def test_initial_state_component_placement():
    g = Grid(-22.0, 22.0, 64)
    f1 = build_initial_state(g, toy_derived(initial_level=1))
    f3 = build_initial_state(g, toy_derived(initial_level=3))
    occ1 = np.abs(f1.amplitudes).sum(axis=1)
    occ3 = np.abs(f3.amplitudes).sum(axis=1)
    assert occ1[0] > 0 and occ1[1:].sum() == 0
    assert occ3[4] > 0 and np.delete(occ3, 4).sum() == 0


def test_initial_state_moments():
    g = Grid(-22.0, 22.0, 128)
    d = toy_derived()
    f = build_initial_state(g, d)
    dens = density(f)
    xbar = (g.x * dens).sum() * g.dx
    var = ((g.x - xbar) ** 2 * dens).sum() * g.dx
    assert xbar == pytest.approx(d.x0, abs=1e-6)
    assert var == pytest.approx(d.delta_l**2 / 2, rel=1e-6)
    # mean momentum equals m v0 / hbar
    fk = to_momentum(f)
    dk = (np.abs(fk.amplitudes) ** 2).sum(axis=0)
    kbar = (g.k * dk).sum() / dk.sum()
    assert kbar == pytest.approx(d.v0 / d.hbar_over_m, rel=1e-6)


def test_direction_mirroring():
    g = Grid(-22.0, 22.0, 64)
    fwd = build_initial_state(g, toy_derived())
    back = build_initial_state(g, toy_derived(initial_direction="negative"))
    dens_f, dens_b = density(fwd), density(back)
    assert g.x[np.argmax(dens_b)] == pytest.approx(-g.x[np.argmax(dens_f)],
                                                   abs=g.dx)
    kb = (np.abs(to_momentum(back).amplitudes) ** 2).sum(axis=0)
    d = toy_derived()
    assert (g.k * kb).sum() / kb.sum() == pytest.approx(-d.v0 / d.hbar_over_m,
                                                        rel=1e-6)


def test_domain_too_small():
    g = Grid(-10.0, 10.0, 64)  # packet at -13 does not fit
    with pytest.raises(DomainTooSmall):
        build_initial_state(g, toy_derived())


def test_nyquist_violation():
    g = Grid(-22.0, 22.0, 64)
    with pytest.raises(NyquistViolation):
        build_initial_state(g, toy_derived(v0=0.05))  # k0 ~ 68 rad/um


def test_momentum_round_trip():
    g = Grid(-22.0, 22.0, 64)
    f = build_initial_state(g, toy_derived())
    back = to_position(to_momentum(f))
    assert np.allclose(back.amplitudes, f.amplitudes, atol=1e-13)
    with pytest.raises(ValueError):
        to_position(f)
    with pytest.raises(ValueError):
        to_momentum(to_momentum(f))


@settings(deadline=None, max_examples=25)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_momentum_transform_is_unitary(seed):
    g = Grid(-22.0, 22.0, 64)
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(6, 64)) + 1j * rng.normal(size=(6, 64))
    f = SpinorField(a, g)
    assert norm2(to_momentum(f)) == pytest.approx(norm2(f), rel=1e-12)
