"""Diagnostics: energy, Sobolev error norms, discrete Bourgain norms, order fits."""

from __future__ import annotations

import dataclasses

import numpy as np
import scipy.fft as _fft

from .errors import ContractError, GridMismatchError
from .grids import SpectralField
from .operators import ModelParams, bracket_power, sobolev_norm
from .rough import z_from_u
from .schemes import StateU, Trajectory


def _field_of(x) -> SpectralField:
    return x.u if isinstance(x, StateU) else x


def energy(state: StateU) -> float:
    """Conserved energy of the cubic Klein-Gordon flow.

    E = integral over [0, 2pi)^d of z_t^2 + |grad z|^2 + m z^2 - (lam/2) z^4,
    by spectral quadrature (the mean of the integrand times the (2 pi)^d
    volume). The quartic term is aliased on the grid, consistent with the
    no-dealiasing default of the schemes.
    """
    z, zt = z_from_u(state)
    grid = state.u.grid
    zv = z.values.real
    density = zt.values.real ** 2 + state.params.m * zv ** 2 \
        - 0.5 * state.params.lam * zv ** 4
    zhat = z.coeffs
    for ax, k in enumerate(grid.wavenumbers):
        shape = [1] * grid.dim
        shape[ax] = len(k)
        dz = _fft.ifftn((1j * k.astype(np.float64).reshape(shape)) * zhat, norm="forward")
        density = density + dz.real ** 2 + dz.imag ** 2
    return float(density.mean() * (2.0 * np.pi) ** grid.dim)


def error_norm(a, b, params: ModelParams, s: float) -> float:
    """H^s norm of the difference of two states (or bare fields)."""
    fa, fb = _field_of(a), _field_of(b)
    if fa.grid != fb.grid:
        raise GridMismatchError(f"grids differ: {fa.grid.modes} vs {fb.grid.modes}")
    diff = SpectralField(fa.grid, fa.coeffs - fb.coeffs, "spectral")
    return sobolev_norm(diff, params, s)


def dispersive_symbol(sigma, tau: float) -> np.ndarray:
    """d_tau(sigma) = (exp(i tau sigma) - 1) / tau, 2 pi / tau periodic.

    The phase tau*sigma is reduced modulo 2 pi before exponentiation (IEEE
    remainder is exact), so shifting sigma by an exactly representable
    multiple of 2 pi / tau reproduces the value bit for bit.
    """
    phase = np.remainder(tau * np.asarray(sigma, dtype=np.float64), 2.0 * np.pi)
    return (np.exp(1j * phase) - 1.0) / tau


WINDOWS = ("none", "smooth-bump")
SHIFTS = ("modulus", "bracket")


@dataclasses.dataclass(frozen=True)
class BourgainSpec:
    """Parameters of the discrete space-time norm.

    tau is the time lattice spacing and must match the trajectory's sampling
    interval. window = "smooth-bump" multiplies the samples by a compactly
    supported bump before the time DFT. shift picks the dispersive offset in
    the temporal weight: "modulus" uses |k| (as printed in the definition),
    "bracket" uses (m + |k|^2)^(1/2) with the model's m.
    """

    s: float
    b: float
    tau: float
    window: str = "none"
    shift: str = "modulus"

    def __post_init__(self):
        if not np.isfinite(self.b):
            raise ContractError(f"b must be finite, got {self.b}")
        if not self.tau > 0:
            raise ContractError(f"tau must be positive, got {self.tau}")
        if self.window not in WINDOWS:
            raise ContractError(f"window must be one of {WINDOWS}, got {self.window!r}")
        if self.shift not in SHIFTS:
            raise ContractError(f"shift must be one of {SHIFTS}, got {self.shift!r}")


def _bump_weights(n_samples: int) -> np.ndarray:
    # exp(1 - 1/(1 - x^2)) at x_n = (2n - (M-1))/M, strictly inside (-1, 1)
    x = (2.0 * np.arange(n_samples) - (n_samples - 1)) / n_samples
    return np.exp(1.0 - 1.0 / (1.0 - x ** 2))


def discrete_bourgain_norm(traj: Trajectory, spec: BourgainSpec, params: ModelParams) -> float:
    """Discrete Bourgain norm of a uniformly sampled trajectory.

    With M samples u_n on the time lattice of spacing tau, utilde(sigma_j, k)
    = tau * sum_n uhat_n(k) exp(-i n tau sigma_j) at sigma_j = 2 pi j/(M tau),
    and the norm is

        (sum_j sum_k dsigma/(2 pi) <k>^2s <d_tau(sigma_j - off(k))>^2b
         |utilde(sigma_j, k)|^2)^(1/2),

    with dsigma = 2 pi/(M tau). The temporal bracket is (1 + |.|^2)^(1/2)
    regardless of the model's m; the spatial factor <k>^2s uses the model's
    m, which makes the b = 0 case equal (tau * sum_n ||u_n||_{H^s}^2)^(1/2).
    """
    m_samples = len(traj.states)
    if m_samples < 1:
        raise ContractError("trajectory has no samples")
    tau = spec.tau
    if abs(traj.spacing - tau) > 1e-9 * tau:
        raise ContractError(
            f"spec.tau = {tau} does not match the trajectory sampling interval {traj.spacing}")
    grid = traj.states[0].u.grid
    stack = np.stack([s.u.coeffs for s in traj.states])
    if spec.window == "smooth-bump":
        w = _bump_weights(m_samples).reshape((m_samples,) + (1,) * grid.dim)
        stack = stack * w
    utilde = tau * _fft.fft(stack, axis=0)
    sigma = 2.0 * np.pi * np.arange(m_samples) / (m_samples * tau)
    if spec.shift == "modulus":
        offset = np.sqrt(grid.k_squared)
    else:
        offset = bracket_power(grid, params.m, 1.0)
    arg = sigma.reshape((m_samples,) + (1,) * grid.dim) - offset
    d = dispersive_symbol(arg, tau)
    temporal = (1.0 + (d.real ** 2 + d.imag ** 2)) ** spec.b
    spatial = bracket_power(grid, params.m, 2.0 * spec.s)
    total = np.sum(spatial * temporal * (utilde.real ** 2 + utilde.imag ** 2))
    return float(np.sqrt(total / (m_samples * tau)))


@dataclasses.dataclass(frozen=True)
class OrderFit:
    """Result of a log-log power-law fit error ~ constant * tau^order."""

    order: float
    constant: float
    r_squared: float


def fit_order(taus, errors) -> OrderFit:
    """Least-squares fit of log(error) = order * log(tau) + log(constant).

    Needs at least 3 points, taus positive and strictly decreasing, errors
    strictly positive. A nonpositive error is rejected loudly: it usually
    means a run collided with its own reference solution.
    """
    t = np.asarray(taus, dtype=np.float64)
    e = np.asarray(errors, dtype=np.float64)
    if t.ndim != 1 or e.shape != t.shape:
        raise ContractError(f"taus and errors must be equal-length 1D, got {t.shape}, {e.shape}")
    if t.size < 3:
        raise ContractError(f"need at least 3 points to fit an order, got {t.size}")
    if not np.all(np.isfinite(t)) or np.any(t <= 0) or not np.all(t[1:] < t[:-1]):
        raise ContractError("taus must be positive, finite, strictly decreasing")
    if not np.all(np.isfinite(e)) or np.any(e <= 0):
        raise ContractError(
            "errors must be strictly positive and finite; a zero error suggests "
            "the run reproduced its reference solution")
    x = np.log(t)
    y = np.log(e)
    order, intercept = np.polyfit(x, y, 1)
    resid = y - (order * x + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return OrderFit(float(order), float(np.exp(intercept)), r_squared)
