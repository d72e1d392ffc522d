"""End-to-end convergence study: sweep tau, fit the order, plot the curves.

Runs the same experiment twice, once per scheme, at desk scale (64x64 grid,
smooth data, T = 1). Lie comes out first order and Strang second order; the
log-log plot lands in convergence_study.png next to this script.
"""

import os

import numpy as np

from kgsplit import (ModelParams, OutputPaths, RoughDataSpec, StudyConfig,
                     TorusGrid, run_study)

params = ModelParams(m=1.0, lam=-1.0)
grid = TorusGrid((64, 64))
taus = tuple(2.0 ** -p for p in range(4, 10))

results = {}
for scheme in ("lie", "strang"):
    config = StudyConfig(
        model=params, grid=grid,
        data=RoughDataSpec(grid, params, s=3.0, seed=7),
        scheme=scheme, error_index=0.5, final_time=1.0,
        tau_list=taus, tau_ref=2.0 ** -12,
        reference_scheme=scheme, outputs=OutputPaths())
    result = run_study(config, cache_dir="/tmp/kgsplit-demo-cache", threads=2)
    results[scheme] = result
    print(f"{scheme}: fitted order {result.fit.order:.3f} "
          f"(r^2 = {result.fit.r_squared:.5f}), flags {result.flags or 'none'}")
    for row in result.rows:
        print(f"  tau = {row.tau:<12g} H^(1/2) error = {row.error:.6e}")

# The reference solutions are cached under cache_dir, so rerunning this
# script (or sweeping more tau values) reuses them.

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not available, skipping the plot")
else:
    fig, ax = plt.subplots(figsize=(5, 4))
    for scheme, marker in (("lie", "o"), ("strang", "s")):
        rows = results[scheme].rows
        ax.loglog([r.tau for r in rows], [r.error for r in rows], marker + "-",
                  label=f"{scheme} (order {results[scheme].fit.order:.2f})")
    ax.loglog(taus, [0.5 * t for t in taus], "k:", label="slope 1")
    ax.loglog(taus, [0.5 * t ** 2 for t in taus], "k--", label="slope 2")
    ax.set_xlabel("tau")
    ax.set_ylabel("H^{1/2} error at T = 1")
    ax.legend()
    fig.tight_layout()
    out = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                       "convergence_study.png")
    fig.savefig(out, dpi=120)
    print("plot written to", out)
