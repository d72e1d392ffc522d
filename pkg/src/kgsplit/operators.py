"""Fourier multiplier operators: bracket powers, free phases, mode filters.

The Japanese bracket is <.> = (m + |.|^2)^(1/2) with the model's mass m, so
<grad>^alpha acts on coefficients as multiplication by (m + |k|^2)^(alpha/2).
Multiplier arrays are cached per (grid, m, ...) and returned read-only.
"""

from __future__ import annotations

import dataclasses
from functools import lru_cache

import numpy as np

from .errors import ContractError, SingularOperatorError
from .grids import SpectralField, TorusGrid

ZERO_MODE_POLICIES = ("drop", "strict")


@dataclasses.dataclass(frozen=True)
class ModelParams:
    """Mass m >= 0 and cubic coupling lam of z_tt = Lap z - m z + lam z^3."""

    m: float = 1.0
    lam: float = -1.0

    def __post_init__(self):
        object.__setattr__(self, "m", float(self.m))
        object.__setattr__(self, "lam", float(self.lam))
        if not np.isfinite(self.m) or self.m < 0:
            raise ContractError(f"mass m must be finite and >= 0, got {self.m}")
        if not np.isfinite(self.lam):
            raise ContractError(f"coupling lam must be finite, got {self.lam}")


@dataclasses.dataclass(frozen=True)
class BracketSymbol:
    """Symbol of <grad>^exponent at mass m; evaluates to (m + |k|^2)^(exponent/2)."""

    m: float
    exponent: float

    def on(self, grid: TorusGrid) -> np.ndarray:
        return bracket_power(grid, self.m, self.exponent)


@lru_cache(maxsize=None)
def bracket_power(grid: TorusGrid, m: float, alpha: float) -> np.ndarray:
    """(m + |k|^2)^(alpha/2) on the grid, FFT layout, read-only.

    At m = 0 the k = 0 entry would be 0^(alpha/2); it is set to 0 for
    alpha != 0 (the zero mode is dropped) and 1 for alpha = 0.
    """
    base = m + grid.k_squared
    if m > 0:
        out = base ** (alpha / 2.0)
    else:
        origin = (0,) * grid.dim
        out = np.empty_like(base)
        nonzero = base > 0
        out[nonzero] = base[nonzero] ** (alpha / 2.0)
        out[origin] = 1.0 if alpha == 0 else 0.0
    out.setflags(write=False)
    return out


@lru_cache(maxsize=32)
def linear_phase(grid: TorusGrid, m: float, t: float) -> np.ndarray:
    """exp(-i t (m + |k|^2)^(1/2)), the free Klein-Gordon propagator symbol."""
    out = np.exp(-1j * t * bracket_power(grid, m, 1.0))
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def filter_mask(grid: TorusGrid, tau: float) -> np.ndarray:
    """Boolean mask of the box tau*k_j in [-1, 1) on every axis."""
    out = np.ones(grid.modes, dtype=bool)
    for ax, k in enumerate(grid.wavenumbers):
        keep = (tau * k >= -1.0) & (tau * k < 1.0)
        shape = [1] * grid.dim
        shape[ax] = len(k)
        out = out & keep.reshape(shape)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def dealias_mask(grid: TorusGrid) -> np.ndarray:
    """Boolean mask keeping |k_j| < N_j/3 per axis (two-thirds rule)."""
    out = np.ones(grid.modes, dtype=bool)
    for ax, (n, k) in enumerate(zip(grid.modes, grid.wavenumbers)):
        keep = np.abs(k) < n / 3.0
        shape = [1] * grid.dim
        shape[ax] = len(k)
        out = out & keep.reshape(shape)
    out.setflags(write=False)
    return out


def _resolve_zero_mode(m: float, zero_mode: str | None) -> str:
    if zero_mode is None:
        return "drop"
    if zero_mode not in ZERO_MODE_POLICIES:
        raise ContractError(f"zero_mode must be one of {ZERO_MODE_POLICIES}, got {zero_mode!r}")
    return zero_mode


def apply_bracket(field: SpectralField, params: ModelParams, alpha: float,
                  zero_mode: str | None = None) -> SpectralField:
    """Apply <grad>^alpha as a Fourier multiplier.

    For m > 0 the k = 0 mode is included with factor m^(alpha/2). For m = 0
    the zero_mode policy decides: "drop" (default) zeroes the k = 0
    coefficient for alpha != 0, "strict" raises SingularOperatorError when
    alpha < 0 and the k = 0 coefficient is nonzero beyond roundoff (1e-13
    relative to the largest coefficient).
    """
    m = params.m
    if m == 0:
        policy = _resolve_zero_mode(m, zero_mode)
        if policy == "strict" and alpha < 0:
            origin = (0,) * field.grid.dim
            mean = abs(field.coeffs[origin])
            if mean > 1e-13 * float(np.max(np.abs(field.coeffs))):
                raise SingularOperatorError(
                    f"<grad>^{alpha} at m = 0 is singular on the nonzero k = 0 mode "
                    f"(coefficient {field.coeffs[origin]:.3e})")
    elif zero_mode is not None:
        _resolve_zero_mode(m, zero_mode)  # validate even when ignored
    mult = bracket_power(field.grid, m, alpha)
    return SpectralField(field.grid, mult * field.coeffs, "spectral")


def apply_linear_phase(field: SpectralField, params: ModelParams, t: float) -> SpectralField:
    """Multiply coefficients by exp(-i t (m + |k|^2)^(1/2)). An H^s isometry."""
    mult = linear_phase(field.grid, params.m, float(t))
    return SpectralField(field.grid, mult * field.coeffs, "spectral")


def projector(field: SpectralField, tau: float) -> SpectralField:
    """Sharp cutoff Pi_tau: keep the coefficient at k iff tau*k_j in [-1, 1) per axis.

    Half-open on the right, so at tau = 0.25 the mode k_j = 4 (tau k = 1) is
    zeroed while k_j = -4 is kept. Idempotent and self-adjoint.
    """
    tau = float(tau)
    if not tau > 0:
        raise ContractError(f"projector needs tau > 0, got {tau}")
    mask = filter_mask(field.grid, tau)
    return SpectralField(field.grid, np.where(mask, field.coeffs, 0.0), "spectral")


def real_cube(field: SpectralField, dealias: bool = False) -> SpectralField:
    """Pointwise (Re f)^3 on the collocation grid, as a complex field.

    No dealiasing by default; with dealias=True both the input and the result
    are truncated to |k_j| < N_j/3 (a sensitivity switch, not exact for cubes).
    """
    if not dealias:
        return SpectralField(field.grid, field.values.real ** 3, "physical")
    mask = dealias_mask(field.grid)
    trunc = SpectralField(field.grid, np.where(mask, field.coeffs, 0.0), "spectral")
    cube = SpectralField(field.grid, trunc.values.real ** 3, "physical")
    return SpectralField(field.grid, np.where(mask, cube.coeffs, 0.0), "spectral")


def sobolev_norm(field: SpectralField, params: ModelParams, s: float) -> float:
    """H^s norm (sum_k (m + |k|^2)^s |fhat_k|^2)^(1/2).

    Pure coefficient norm, no (2 pi)^d volume factor; s = 0 gives the plain
    l2 norm of the coefficients. At m = 0 the k = 0 term is dropped for s != 0.
    """
    w = bracket_power(field.grid, params.m, 2.0 * s)
    c = field.coeffs
    return float(np.sqrt(np.sum(w * (c.real ** 2 + c.imag ** 2))))
