"""Fourier grids and complex fields on the torus [0, 2pi)^d, d = 1, 2, 3.

Transform convention: f(x) = sum_k fhat_k exp(i<k, x>) with integer
wavenumbers k_j in {-N_j/2, ..., N_j/2 - 1}, so the forward transform is the
unnormalized DFT divided by the total number of grid points.
"""

from __future__ import annotations

import dataclasses
from functools import cached_property

import numpy as np
import scipy.fft as _fft

from .errors import ContractError, GridMismatchError

_MAX_DIM = 3


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclasses.dataclass(frozen=True)
class TorusGrid:
    """Uniform tensor-product grid, N_j points on axis j, each a power of two >= 4."""

    modes: tuple[int, ...]

    def __post_init__(self):
        try:
            modes = tuple(int(n) for n in self.modes)
        except TypeError as exc:
            raise ContractError(f"modes must be a sequence of ints, got {self.modes!r}") from exc
        object.__setattr__(self, "modes", modes)
        if not 1 <= len(modes) <= _MAX_DIM:
            raise ContractError(f"dimension must be 1..{_MAX_DIM}, got {len(modes)}")
        for n in modes:
            if n < 4 or not _is_pow2(n):
                raise ContractError(f"modes per axis must be a power of two >= 4, got {n}")

    @property
    def dim(self) -> int:
        return len(self.modes)

    @property
    def npoints(self) -> int:
        out = 1
        for n in self.modes:
            out *= n
        return out

    @cached_property
    def wavenumbers(self) -> tuple[np.ndarray, ...]:
        """Integer wavenumbers per axis in FFT layout (0 .. N/2-1, -N/2 .. -1)."""
        out = tuple((np.fft.fftfreq(n) * n).astype(np.int64) for n in self.modes)
        for k in out:
            k.setflags(write=False)
        return out

    @cached_property
    def k_squared(self) -> np.ndarray:
        """|k|^2 on the full wavenumber lattice, FFT layout, float64."""
        out = np.zeros(self.modes)
        for ax, k in enumerate(self.wavenumbers):
            shape = [1] * self.dim
            shape[ax] = len(k)
            out = out + k.astype(np.float64).reshape(shape) ** 2
        out.setflags(write=False)
        return out

    @cached_property
    def coordinates(self) -> tuple[np.ndarray, ...]:
        """Grid coordinates per axis, x_j = 2 pi j / N_j."""
        out = tuple(2.0 * np.pi * np.arange(n) / n for n in self.modes)
        for x in out:
            x.setflags(write=False)
        return out

    def meshgrid(self) -> list[np.ndarray]:
        return np.meshgrid(*self.coordinates, indexing="ij")


@dataclasses.dataclass(frozen=True, eq=False)
class SpectralField:
    """A complex field on a TorusGrid with one authoritative representation.

    rep is "physical" (data holds samples f(x_j)) or "spectral" (data holds
    coefficients fhat_k in FFT layout). The other representation is computed
    on demand and cached. Fields are immutable: the stored array is marked
    read-only, so pass a copy if you need to keep a writable buffer.
    """

    grid: TorusGrid
    data: np.ndarray
    rep: str

    def __post_init__(self):
        if self.rep not in ("physical", "spectral"):
            raise ContractError(f"rep must be 'physical' or 'spectral', got {self.rep!r}")
        arr = np.asarray(self.data, dtype=np.complex128)
        if arr.shape != self.grid.modes:
            raise GridMismatchError(
                f"data shape {arr.shape} does not match grid modes {self.grid.modes}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_values(cls, grid: TorusGrid, values) -> "SpectralField":
        """Field from physical samples (defensive copy)."""
        return cls(grid, np.array(values, dtype=np.complex128), "physical")

    @classmethod
    def from_coeffs(cls, grid: TorusGrid, coeffs) -> "SpectralField":
        """Field from Fourier coefficients in FFT layout (defensive copy)."""
        return cls(grid, np.array(coeffs, dtype=np.complex128), "spectral")

    @cached_property
    def coeffs(self) -> np.ndarray:
        """Fourier coefficients fhat_k, FFT layout."""
        if self.rep == "spectral":
            return self.data
        out = _fft.fftn(self.data, norm="forward")
        out.setflags(write=False)
        return out

    @cached_property
    def values(self) -> np.ndarray:
        """Point values f(x_j) on the grid."""
        if self.rep == "physical":
            return self.data
        out = _fft.ifftn(self.data, norm="forward")
        out.setflags(write=False)
        return out


def to_spectral(field: SpectralField) -> SpectralField:
    """The same field with the spectral representation authoritative."""
    if field.rep == "spectral":
        return field
    return SpectralField(field.grid, field.coeffs, "spectral")


def to_physical(field: SpectralField) -> SpectralField:
    """The same field with the physical representation authoritative."""
    if field.rep == "physical":
        return field
    return SpectralField(field.grid, field.values, "physical")
