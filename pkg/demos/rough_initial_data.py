"""Random initial data of prescribed Sobolev regularity.

RoughDataSpec(s=...) draws Fourier coefficients with |u_k| ~ <k>^-(s + d/2),
so H^r norms stay bounded under grid refinement exactly for r <= s. The scan
below makes that visible: below the threshold the norm saturates, above it
the norm grows without bound as the grid resolves more of the tail.
"""

import numpy as np

from kgsplit import (ModelParams, RoughDataSpec, TorusGrid, generate,
                     sobolev_norm, u_from_z, z_from_u, SpectralField)

params = ModelParams(m=1.0, lam=-1.0)

s = 1.0
print(f"drawing data with regularity s = {s}, unit H^{{1/2}} norm")
print(f"{'N':>6}  {'H^0.5':>10}  {'H^0.7':>10}  {'H^1.3':>10}  {'H^1.5':>10}")
for p in range(6, 13):
    grid = TorusGrid((2 ** p,))
    state = generate(RoughDataSpec(grid, params, s=s, seed=42))
    norms = [sobolev_norm(state.u, params, r) for r in (0.5, 0.7, 1.3, 1.5)]
    print(f"{2 ** p:>6}  " + "  ".join(f"{n:>10.4f}" for n in norms))
print("note: H^r stays bounded for r < s, grows with N for r > s\n")

# The same seed always reproduces the same field, bit for bit.
grid = TorusGrid((256,))
a = generate(RoughDataSpec(grid, params, s=s, seed=7))
b = generate(RoughDataSpec(grid, params, s=s, seed=7))
print("same seed, identical draw:", np.array_equal(a.u.coeffs, b.u.coeffs))

# u packages position and velocity: z = Re u, z_t = <grad> Im u. Round trip
# through (z0, z1) recovers the state.
z0, z1 = z_from_u(a)
back = u_from_z(z0, z1, params)
print("u -> (z0, z1) -> u round trip error:",
      float(np.max(np.abs(back.u.coeffs - a.u.coeffs))))

# Building data from an explicit position/velocity pair works too.
x = grid.meshgrid()[0]
zeros = SpectralField.from_values(grid, np.zeros_like(x))
bump = SpectralField.from_values(grid, np.cos(x))
state = u_from_z(bump, zeros, params)
print("cos(x) at rest: u equals z exactly:",
      np.allclose(state.u.values, np.cos(x)))
