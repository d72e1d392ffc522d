"""Seeded random initial data of prescribed Sobolev regularity.

The recipe: draw uhat0(k) = <k>^(-(s + d/2 + epsilon)) * (f_k + i g_k) with
f_k, g_k independent uniform on [0, 1] (not recentered, so the k = 0 mode
carries an O(1) constant), then rescale to unit H^r norm. The draws come from
numpy's PCG64 generator and are consumed in lexicographic lattice order
(k_1 major, each axis ascending from -N_j/2, f before g), which pins the
field bit for bit across platforms for a fixed seed.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import ContractError, GridMismatchError
from .grids import SpectralField, TorusGrid
from .operators import ModelParams, apply_bracket, bracket_power, sobolev_norm
from .schemes import StateU

RNG_NAME = "numpy PCG64"


@dataclasses.dataclass(frozen=True)
class RoughDataSpec:
    """Recipe for a random state with H^(s') norms finite iff s' <= s as the
    grid is refined (for epsilon = 0), normalized to unit H^(norm_index)."""

    grid: TorusGrid
    params: ModelParams
    s: float
    epsilon: float = 0.0
    norm_index: float = 0.5
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "epsilon", float(self.epsilon))
        object.__setattr__(self, "norm_index", float(self.norm_index))
        object.__setattr__(self, "seed", int(self.seed))
        if self.epsilon < 0:
            raise ContractError(f"epsilon must be >= 0, got {self.epsilon}")
        if not 0 <= self.seed < 2 ** 64:
            raise ContractError(f"seed must fit in 64 bits, got {self.seed}")


def generate(spec: RoughDataSpec) -> StateU:
    """Draw the random field for spec. Pure function of (seed, spec)."""
    grid, params = spec.grid, spec.params
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    draws = rng.random((grid.npoints, 2))
    amp = draws[:, 0] + 1j * draws[:, 1]
    # row i is lattice point k_j = i_j - N_j/2 in C order; ifftshift -> FFT layout
    amp = np.fft.ifftshift(amp.reshape(grid.modes))
    decay = bracket_power(grid, params.m, -(spec.s + grid.dim / 2.0 + spec.epsilon))
    u = SpectralField(grid, decay * amp, "spectral")
    norm = sobolev_norm(u, params, spec.norm_index)
    if norm == 0:
        raise ContractError("generated field has zero norm; cannot normalize")
    u = SpectralField(grid, u.coeffs / norm, "spectral")
    return StateU(u, 0.0, params)


_REAL_TOL = 1e-12


def u_from_z(z0: SpectralField, z1: SpectralField, params: ModelParams,
             zero_mode: str | None = None) -> StateU:
    """Package position z0 and velocity z1 as u = z0 + i <grad>^-1 z1 at t = 0.

    Both inputs must be real valued (imaginary parts below 1e-12). At m = 0
    the mean of z1 falls to the zero-mode policy of <grad>^-1.
    """
    if z0.grid != z1.grid:
        raise GridMismatchError(f"z0 grid {z0.grid.modes} != z1 grid {z1.grid.modes}")
    for name, f in (("z0", z0), ("z1", z1)):
        worst = float(np.max(np.abs(f.values.imag)))
        if worst > _REAL_TOL:
            raise ContractError(f"{name} must be real valued (max |imag| = {worst:.3e})")
    vel = apply_bracket(z1, params, -1.0, zero_mode=zero_mode)
    coeffs = z0.coeffs + 1j * vel.coeffs
    return StateU(SpectralField(z0.grid, coeffs, "spectral"), 0.0, params)


def z_from_u(state: StateU) -> tuple[SpectralField, SpectralField]:
    """Recover (z, z_t) = (Re u, <grad> Im u) as real-valued physical fields."""
    u = state.u
    imag = SpectralField(u.grid, u.values.imag, "physical")
    zt = apply_bracket(imag, state.params, 1.0)
    z0 = SpectralField(u.grid, u.values.real, "physical")
    z1 = SpectralField(u.grid, zt.values.real, "physical")
    return z0, z1
