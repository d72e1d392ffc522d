import numpy as np
import pytest

from kgsplit import (ContractError, GridMismatchError, ModelParams, RoughDataSpec,
                     SingularOperatorError, SpectralField, StateU, TorusGrid,
                     generate, sobolev_norm, u_from_z, z_from_u)

from conftest import random_field


def test_spec_validation(params):
    grid = TorusGrid((8,))
    with pytest.raises(ContractError):
        RoughDataSpec(grid, params, s=0.5, epsilon=-0.1)
    with pytest.raises(ContractError):
        RoughDataSpec(grid, params, s=0.5, seed=-1)
    with pytest.raises(ContractError):
        RoughDataSpec(grid, params, s=0.5, seed=2 ** 64)


def test_generate_is_bit_deterministic(params):
    spec = RoughDataSpec(TorusGrid((16, 16)), params, s=0.5, seed=42)
    a = generate(spec)
    b = generate(spec)
    assert np.array_equal(a.u.coeffs, b.u.coeffs)
    c = generate(RoughDataSpec(TorusGrid((16, 16)), params, s=0.5, seed=43))
    assert not np.array_equal(a.u.coeffs, c.u.coeffs)


@pytest.mark.parametrize("s,norm_index", [(0.5, 0.5), (3.0, 0.5), (0.5, 11.0 / 40.0)])
def test_generate_normalizes_to_unit_norm(params, s, norm_index):
    spec = RoughDataSpec(TorusGrid((32, 32)), params, s=s, norm_index=norm_index, seed=5)
    state = generate(spec)
    assert abs(sobolev_norm(state.u, params, norm_index) - 1.0) < 1e-12
    assert state.time == 0.0 and state.params == params


def test_generate_consumes_draws_in_sorted_lattice_order(params):
    # hand-build the n = 4 field: rows of rng.random((4, 2)) are k = -2,-1,0,1
    s, seed = 1.5, 9
    spec = RoughDataSpec(TorusGrid((4,)), params, s=s, seed=seed)
    state = generate(spec)

    draws = np.random.Generator(np.random.PCG64(seed)).random((4, 2))
    amp = draws[:, 0] + 1j * draws[:, 1]
    ks = np.array([-2.0, -1.0, 0.0, 1.0])
    raw = (1.0 + ks ** 2) ** (-(s + 0.5) / 2) * amp  # decay <k>^-(s + d/2)
    norm = np.sqrt(np.sum((1.0 + ks ** 2) ** 0.5 * np.abs(raw) ** 2))
    expected = raw / norm
    # FFT layout orders the modes k = 0, 1, -2, -1
    got = state.u.coeffs
    for i, k in enumerate([0, 1, -2, -1]):
        assert abs(got[i] - expected[list(ks).index(k)]) < 1e-13


def test_generate_lattice_order_in_two_dimensions(params):
    # row-major lattice order: index (k1 + 2) * 4 + (k2 + 2) feeds mode (k1, k2)
    spec = RoughDataSpec(TorusGrid((4, 4)), params, s=1.0, seed=11)
    state = generate(spec)
    draws = np.random.Generator(np.random.PCG64(11)).random((16, 2))
    amp = draws[:, 0] + 1j * draws[:, 1]
    # compare against the (0, 0) mode so the normalization divides out
    got = state.u.coeffs[1, 3] / state.u.coeffs[0, 0]
    decay = (1.0 + 2.0) ** (-(1.0 + 1.0) / 2)  # <(1,-1)>^2 = 3, decay <k>^-(s + d/2)
    expected = decay * amp[(1 + 2) * 4 + (-1 + 2)] / amp[(0 + 2) * 4 + (0 + 2)]
    assert abs(got - expected) < 1e-13


def test_larger_s_concentrates_at_low_modes(params):
    smooth = generate(RoughDataSpec(TorusGrid((64,)), params, s=4.0, seed=3))
    rough = generate(RoughDataSpec(TorusGrid((64,)), params, s=0.25, seed=3))
    assert sobolev_norm(smooth.u, params, 2.0) < sobolev_norm(rough.u, params, 2.0)


def test_refinement_scan_separates_the_regularity_index(params):
    # s = 0.5 data normalized in H^0.5: norms above the index must grow under
    # refinement while norms below it stay bounded
    above, below = [], []
    for p in (9, 10, 11, 12):
        state = generate(RoughDataSpec(TorusGrid((2 ** p,)), params, s=0.5, seed=0))
        above.append(sobolev_norm(state.u, params, 0.75))
        below.append(sobolev_norm(state.u, params, 0.25))
    for a, b in zip(above, above[1:]):
        assert b > a
    assert above[-1] / above[0] > 1.3
    assert max(below) < 0.8
    assert 0.5 < below[-1] / below[0] < 1.1


def test_u_from_z_with_zero_velocity(params):
    grid = TorusGrid((16,))
    x = grid.coordinates[0]
    z0 = SpectralField.from_values(grid, np.cos(x))
    z1 = SpectralField.from_values(grid, np.zeros(16))
    state = u_from_z(z0, z1, params)
    assert np.max(np.abs(state.u.values - np.cos(x))) < 1e-14


def test_u_from_z_with_zero_position(params):
    # velocity cos x contributes i (1 + 1)^(-1/2) cos x
    grid = TorusGrid((16,))
    x = grid.coordinates[0]
    z0 = SpectralField.from_values(grid, np.zeros(16))
    z1 = SpectralField.from_values(grid, np.cos(x))
    state = u_from_z(z0, z1, params)
    expected = 1j * np.cos(x) / np.sqrt(2.0)
    assert np.max(np.abs(state.u.values - expected)) < 1e-14


def test_u_from_z_rejects_complex_input(params):
    grid = TorusGrid((8,))
    good = SpectralField.from_values(grid, np.ones(8))
    bad = SpectralField.from_values(grid, np.ones(8) * (1 + 1e-6j))
    with pytest.raises(ContractError):
        u_from_z(bad, good, params)
    with pytest.raises(ContractError):
        u_from_z(good, bad, params)


def test_u_from_z_rejects_mismatched_grids(params):
    a = SpectralField.from_values(TorusGrid((8,)), np.ones(8))
    b = SpectralField.from_values(TorusGrid((16,)), np.ones(16))
    with pytest.raises(GridMismatchError):
        u_from_z(a, b, params)


def test_u_from_z_massless_mean_velocity(params):
    # at m = 0 the inverse bracket on the velocity mean follows the policy
    massless = ModelParams(m=0.0, lam=-1.0)
    grid = TorusGrid((8,))
    z0 = SpectralField.from_values(grid, np.zeros(8))
    z1 = SpectralField.from_values(grid, np.ones(8))
    dropped = u_from_z(z0, z1, massless, zero_mode="drop")
    assert np.max(np.abs(dropped.u.values)) < 1e-15
    with pytest.raises(SingularOperatorError):
        u_from_z(z0, z1, massless, zero_mode="strict")


def test_z_from_u_recovers_both_components(params):
    grid = TorusGrid((16,))
    x = grid.coordinates[0]
    u = SpectralField.from_values(grid, np.cos(x) + 1j * np.cos(x))
    z0, z1 = z_from_u(StateU(u, 0.0, params))
    assert np.max(np.abs(z0.values - np.cos(x))) < 1e-14
    assert np.max(np.abs(z1.values - np.sqrt(2.0) * np.cos(x))) < 1e-13
    assert np.all(z0.values.imag == 0) and np.all(z1.values.imag == 0)


def test_round_trip_through_position_and_velocity(params, rng):
    grid = TorusGrid((16, 16))
    u = random_field(grid, rng)
    z0, z1 = z_from_u(StateU(u, 0.0, params))
    back = u_from_z(z0, z1, params)
    scale = np.max(np.abs(u.coeffs))
    assert np.max(np.abs(back.u.coeffs - u.coeffs)) < 1e-12 * scale
