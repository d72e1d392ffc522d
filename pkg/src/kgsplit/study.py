"""Convergence-study harness: reference solves, tau sweeps, CSV/plot emission.

A study evolves the same random initial state over a decreasing list of time
steps, measures the final-time H^s distance to a fine-step reference run, and
fits the convergence order. Filtered schemes start from the projected data
Pi_tau u0 and are compared against an unfiltered reference; the projection
discrepancy is recorded in the manifest next to the fit.
"""

from __future__ import annotations

import dataclasses
import hashlib
import os
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .diagnostics import OrderFit, error_norm, fit_order
from .errors import ConfigError, ContractError
from .grids import SpectralField, TorusGrid
from .operators import ModelParams, projector, sobolev_norm
from .rough import RNG_NAME, RoughDataSpec, generate
from .schemes import KINDS, SchemeSpec, StateU, evolve

UNFILTERED = ("lie", "strang")
CONVENTION_FLAGS = ("dealias", "zero-mode-strict")
NOISE_FLOOR = 1e-10

CSV_HEADER = "tau,error,wall_time_seconds"
PLOT_HEADER = "log10_tau,log10_error,log10_fit"


@dataclasses.dataclass(frozen=True)
class OutputPaths:
    csv: str | None = None
    plotdata: str | None = None
    manifest: str | None = None


@dataclasses.dataclass(frozen=True)
class StudyConfig:
    """A tau sweep: model, grid, data recipe, scheme, and measurement choices."""

    model: ModelParams
    grid: TorusGrid
    data: RoughDataSpec
    scheme: str
    error_index: float
    final_time: float
    tau_list: tuple[float, ...]
    tau_ref: float
    reference_scheme: str
    outputs: OutputPaths = OutputPaths()
    conventions: tuple[str, ...] = ()
    reference_check: bool = False


@dataclasses.dataclass(frozen=True)
class StudyRow:
    tau: float
    error: float
    wall_time: float
    projection_discrepancy: float | None = None


@dataclasses.dataclass(frozen=True)
class GateResult:
    """Reference self-consistency: distance between the tau_ref and tau_ref/2
    references, against 10% of the smallest measured error."""

    delta: float
    threshold: float
    passed: bool


@dataclasses.dataclass(frozen=True, eq=False)
class StudyResult:
    config: StudyConfig
    rows: tuple[StudyRow, ...]
    fit: OrderFit
    flags: tuple[str, ...]
    manifest: dict
    gate: GateResult | None = None


def _steps_for(final_time: float, tau: float) -> int:
    n = round(final_time / tau)
    if n < 1 or abs(n * tau - final_time) > 1e-9 * final_time:
        raise ConfigError(f"tau = {tau!r} does not divide final_time = {final_time!r}")
    return n


def validate_config(config: StudyConfig) -> None:
    """Raise ConfigError on any violated invariant."""
    if config.scheme not in KINDS:
        raise ConfigError(f"scheme must be one of {KINDS}, got {config.scheme!r}")
    if config.reference_scheme not in UNFILTERED:
        raise ConfigError(
            f"reference_scheme must be unfiltered {UNFILTERED}, got {config.reference_scheme!r}")
    for flag in config.conventions:
        if flag not in CONVENTION_FLAGS:
            raise ConfigError(f"unknown convention {flag!r}; known: {CONVENTION_FLAGS}")
    if not config.final_time > 0:
        raise ConfigError(f"final_time must be positive, got {config.final_time}")
    taus = config.tau_list
    if len(taus) == 0:
        raise ConfigError("tau_list must not be empty")
    arr = np.asarray(taus, dtype=np.float64)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0) or not np.all(arr[1:] < arr[:-1]):
        raise ConfigError(f"tau_list must be positive, finite, strictly decreasing: {taus}")
    if not 0 < config.tau_ref < min(taus) / 4:
        raise ConfigError(
            f"tau_ref = {config.tau_ref} must satisfy 0 < tau_ref < min(tau_list)/4 "
            f"= {min(taus) / 4}")
    for tau in (*taus, config.tau_ref):
        _steps_for(config.final_time, tau)
    filtered = config.scheme.startswith("filtered")
    wanted = 11.0 / 40.0 if filtered else 0.5
    if abs(config.error_index - wanted) > 1e-12:
        raise ConfigError(
            f"error_index for {config.scheme!r} must be {wanted} "
            f"(H^1/2 unfiltered, H^11/40 filtered), got {config.error_index}")
    if config.data.grid != config.grid:
        raise ConfigError("data.grid must equal the study grid")
    if config.data.params != config.model:
        raise ConfigError("data.params must equal the study model")


def _scheme_spec(config: StudyConfig, kind: str, tau: float) -> SchemeSpec:
    return SchemeSpec(
        kind, tau, config.model,
        dealias="dealias" in config.conventions,
        zero_mode="strict" if "zero-mode-strict" in config.conventions else None)


def _canonical_items(config: StudyConfig) -> list[tuple[str, str]]:
    out = OutputPaths() if config.outputs is None else config.outputs
    return [
        ("model.m", repr(config.model.m)),
        ("model.lambda", repr(config.model.lam)),
        ("grid", "x".join(str(n) for n in config.grid.modes)),
        ("data.s", repr(config.data.s)),
        ("data.epsilon", repr(config.data.epsilon)),
        ("data.norm_index", repr(config.data.norm_index)),
        ("data.seed", str(config.data.seed)),
        ("scheme", config.scheme),
        ("error_index", repr(config.error_index)),
        ("final_time", repr(config.final_time)),
        ("tau_list", ", ".join(repr(t) for t in config.tau_list)),
        ("tau_ref", repr(config.tau_ref)),
        ("reference_scheme", config.reference_scheme),
        ("outputs.csv", str(out.csv)),
        ("outputs.plotdata", str(out.plotdata)),
        ("outputs.manifest", str(out.manifest)),
        ("conventions", ", ".join(config.conventions) or "(none)"),
        ("reference_check", str(config.reference_check)),
    ]


def config_hash(config: StudyConfig) -> str:
    text = "\n".join(f"{k} = {v}" for k, v in _canonical_items(config))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


_REFERENCE_KEYS = ("model.m", "model.lambda", "grid", "data.s", "data.epsilon",
                   "data.norm_index", "data.seed", "final_time", "tau_ref",
                   "reference_scheme", "conventions")


def reference_key(config: StudyConfig) -> str:
    """Hash of the fields the reference run depends on (tau_list, error index
    and output paths excluded, so sweep variants share one cached reference)."""
    items = dict(_canonical_items(config))
    text = "\n".join(f"{k} = {items[k]}" for k in _REFERENCE_KEYS)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def run_reference(config: StudyConfig, cache_dir=None) -> StateU:
    """Evolve u0 to final_time with tau_ref under the reference scheme.

    With cache_dir set, the final state is stored as reference-<key>.npz and
    reloaded bit-identically on later calls with the same key.
    """
    validate_config(config)
    key = reference_key(config)
    path = None
    if cache_dir is not None:
        path = Path(cache_dir) / f"reference-{key}.npz"
        if path.exists():
            with np.load(path) as archive:
                coeffs = archive["coeffs"]
                t = float(archive["time"])
            field = SpectralField(config.grid, coeffs, "spectral")
            return StateU(field, t, config.model)
    u0 = generate(config.data)
    spec = _scheme_spec(config, config.reference_scheme, config.tau_ref)
    n = _steps_for(config.final_time, config.tau_ref)
    trajectory = evolve(u0, spec, n, sample_every=n, provenance=f"reference {key}")
    final = trajectory.final
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + f".tmp{os.getpid()}")
        with open(tmp, "wb") as fh:  # handle, or savez appends another .npz
            np.savez(fh, coeffs=final.u.coeffs, time=final.time, key=key)
        os.replace(tmp, path)
    return final


def sweep_flags(errors) -> list[str]:
    """Quality flags for a measured error sweep (tau decreasing).

    "below-noise-floor": every error sits under 1e-10, so the fit measures
    roundoff, not the scheme. "irregular-convergence": the errors fail to
    decrease monotonically with tau.
    """
    flags = []
    if all(e < NOISE_FLOOR for e in errors):
        flags.append("below-noise-floor")
    if any(b >= a for a, b in zip(errors, errors[1:])):
        flags.append("irregular-convergence")
    return flags


def _run_one(config: StudyConfig, u0: StateU, ref: StateU, tau: float) -> StudyRow:
    spec = _scheme_spec(config, config.scheme, tau)
    if spec.filtered:
        start = StateU(projector(u0.u, tau), u0.time, u0.params)
    else:
        start = u0
    n = _steps_for(config.final_time, tau)
    t0 = time.perf_counter()
    trajectory = evolve(start, spec, n, sample_every=n)
    wall = time.perf_counter() - t0
    err = error_norm(trajectory.final, ref, config.model, config.error_index)
    discrepancy = None
    if spec.filtered:
        lost = SpectralField(ref.u.grid, ref.u.coeffs - projector(ref.u, tau).coeffs,
                             "spectral")
        discrepancy = sobolev_norm(lost, config.model, config.error_index)
    return StudyRow(tau, err, wall, discrepancy)


def run_study(config: StudyConfig, cache_dir=None, threads: int = 1) -> StudyResult:
    """Run the sweep, fit the order, and write any configured outputs.

    Every tau entry starts from the same u0 (projected per-tau for filtered
    schemes) and is measured against the same reference state. Entries run
    concurrently when threads > 1; rows are returned in tau_list order either
    way.
    """
    validate_config(config)
    ref = run_reference(config, cache_dir)
    u0 = generate(config.data)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = tuple(pool.map(lambda t: _run_one(config, u0, ref, t), config.tau_list))
    else:
        rows = tuple(_run_one(config, u0, ref, t) for t in config.tau_list)
    errors = [row.error for row in rows]
    fit = fit_order(config.tau_list, errors)
    flags = sweep_flags(errors)
    gate = None
    if config.reference_check:
        finer = dataclasses.replace(config, tau_ref=config.tau_ref / 2)
        ref2 = run_reference(finer, cache_dir)
        delta = error_norm(ref, ref2, config.model, config.error_index)
        threshold = 0.1 * min(errors)
        gate = GateResult(delta, threshold, delta < threshold)
        if not gate.passed:
            flags.append("reference-gate-failed")
    result = StudyResult(config, rows, fit, tuple(flags),
                         _manifest(config, rows, fit, tuple(flags), gate), gate)
    out = config.outputs
    if out.csv:
        emit_csv(result, out.csv)
    if out.plotdata:
        emit_plotdata(result, out.plotdata)
    if out.manifest:
        emit_manifest(result, out.manifest)
    return result


def _manifest(config, rows, fit, flags, gate) -> dict:
    entries = dict(_canonical_items(config))
    entries["config_hash"] = config_hash(config)
    entries["reference_key"] = reference_key(config)
    entries["software"] = f"kgsplit {__version__}"
    entries["rng"] = RNG_NAME
    entries["rng_draw_order"] = ("lexicographic over the wavenumber lattice, "
                                 "k1 major, axes ascending from -N/2; f before g")
    entries["amplitude_convention"] = ("uhat0(k) = <k>^-(s + d/2 + epsilon) (f + i g), "
                                       "f, g uniform on [0,1], no recentering")
    entries["normalization"] = f"||u0||_H^{config.data.norm_index!r} = 1"
    entries["norm_convention"] = "coefficient l2, no volume factor"
    entries["transform_convention"] = "f(x) = sum_k fhat_k exp(i<k,x>); forward DFT / npoints"
    entries["filter_convention"] = "half-open box: keep k with tau*k_j in [-1,1) per axis"
    entries["zero_mode_policy"] = ("strict" if "zero-mode-strict" in config.conventions
                                   else "include (m > 0) / drop (m = 0)")
    entries["dealias"] = "on (2/3 rule)" if "dealias" in config.conventions else "off"
    entries["reference_policy"] = ("unfiltered fine-step reference; projection "
                                   "discrepancy recorded per tau" if
                                   config.scheme.startswith("filtered")
                                   else "same-family fine-step reference")
    entries["rows"] = str(len(rows))
    entries["fit.order"] = repr(fit.order)
    entries["fit.constant"] = repr(fit.constant)
    entries["fit.r_squared"] = repr(fit.r_squared)
    entries["flags"] = ", ".join(flags) or "(none)"
    for row in rows:
        if row.projection_discrepancy is not None:
            entries[f"projection_discrepancy[tau={row.tau!r}]"] = repr(row.projection_discrepancy)
    if gate is not None:
        entries["gate.delta"] = repr(gate.delta)
        entries["gate.threshold"] = repr(gate.threshold)
        entries["gate.passed"] = str(gate.passed)
    return entries


def _write_text(path, text: str) -> None:
    try:
        p = Path(path)
        if p.parent != Path(""):
            p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text)
    except OSError as exc:
        raise OSError(f"failed writing {path}: {exc}") from exc


def emit_csv(result: StudyResult, path) -> None:
    """Write rows as CSV: header tau,error,wall_time_seconds, 17 significant digits."""
    lines = [CSV_HEADER]
    lines += [f"{r.tau:.16e},{r.error:.16e},{r.wall_time:.16e}" for r in result.rows]
    _write_text(path, "\n".join(lines) + "\n")


def read_csv(path) -> tuple[list[float], list[float], list[float]]:
    """Parse an emit_csv file back into (taus, errors, wall_times)."""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise OSError(f"failed reading {path}: {exc}") from exc
    if not lines or lines[0] != CSV_HEADER:
        raise ConfigError(f"{path}: expected header {CSV_HEADER!r}")
    taus, errors, walls = [], [], []
    for line in lines[1:]:
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise ConfigError(f"{path}: malformed row {line!r}")
        taus.append(float(parts[0]))
        errors.append(float(parts[1]))
        walls.append(float(parts[2]))
    return taus, errors, walls


def emit_plotdata(result: StudyResult, path, manifest_path=None) -> None:
    """Write log10 columns plus the fitted line, and a sidecar manifest."""
    fit = result.fit
    lines = [PLOT_HEADER]
    for r in result.rows:
        lt = np.log10(r.tau)
        fitted = np.log10(fit.constant) + fit.order * lt
        lines.append(f"{lt:.16e},{np.log10(r.error):.16e},{fitted:.16e}")
    _write_text(path, "\n".join(lines) + "\n")
    if manifest_path is None:
        manifest_path = str(path) + ".manifest.txt"
    emit_manifest(result, manifest_path)


def emit_manifest(result: StudyResult, path) -> None:
    """Write the run manifest as "key: value" lines."""
    _write_text(path, manifest_text(result.manifest))


def manifest_text(manifest: dict) -> str:
    return "\n".join(f"{k}: {v}" for k, v in manifest.items()) + "\n"


def load_config(path) -> StudyConfig:
    """Read a YAML study config. Unknown or missing keys raise ConfigError."""
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config {path} must be a mapping, got {type(doc).__name__}")
    return config_from_dict(doc, origin=str(path))


def _pick(mapping: dict, known: tuple[str, ...], origin: str, section: str) -> dict:
    unknown = set(mapping) - set(known)
    if unknown:
        raise ConfigError(f"{origin}: unknown {section} keys {sorted(unknown)}")
    return mapping


def config_from_dict(doc: dict, origin: str = "<dict>") -> StudyConfig:
    """Build and validate a StudyConfig from plain dict data (parsed YAML)."""
    top_keys = ("model", "grid", "data", "scheme", "error_index", "final_time",
                "tau_list", "tau_ref", "reference_scheme", "outputs",
                "conventions", "reference_check")
    _pick(doc, top_keys, origin, "top-level")
    try:
        model_doc = _pick(dict(doc.get("model") or {}), ("m", "lambda"), origin, "model")
        model = ModelParams(m=model_doc.get("m", 1.0), lam=model_doc.get("lambda", -1.0))
        if "grid" not in doc:
            raise ConfigError(f"{origin}: missing required key 'grid'")
        grid = TorusGrid(tuple(doc["grid"]))
        if "data" not in doc or not isinstance(doc["data"], dict):
            raise ConfigError(f"{origin}: missing required mapping 'data'")
        data_doc = _pick(dict(doc["data"]), ("s", "epsilon", "norm_index", "seed"),
                         origin, "data")
        for key in ("s", "seed"):
            if key not in data_doc:
                raise ConfigError(f"{origin}: missing required key 'data.{key}'")
        data = RoughDataSpec(grid=grid, params=model, s=data_doc["s"],
                             epsilon=data_doc.get("epsilon", 0.0),
                             norm_index=data_doc.get("norm_index", 0.5),
                             seed=data_doc["seed"])
        for key in ("scheme", "final_time", "tau_list", "tau_ref"):
            if key not in doc:
                raise ConfigError(f"{origin}: missing required key '{key}'")
        scheme = str(doc["scheme"]).lower().replace("_", "-")
        filtered = scheme.startswith("filtered")
        error_index = float(doc.get("error_index", 11.0 / 40.0 if filtered else 0.5))
        reference_scheme = str(doc.get(
            "reference_scheme", scheme.removeprefix("filtered-"))).lower()
        out_doc = _pick(dict(doc.get("outputs") or {}), ("csv", "plotdata", "manifest"),
                        origin, "outputs")
        outputs = OutputPaths(csv=out_doc.get("csv"), plotdata=out_doc.get("plotdata"),
                              manifest=out_doc.get("manifest"))
        conventions = tuple(doc.get("conventions") or ())
        config = StudyConfig(
            model=model, grid=grid, data=data, scheme=scheme, error_index=error_index,
            final_time=float(doc["final_time"]),
            tau_list=tuple(float(t) for t in doc["tau_list"]),
            tau_ref=float(doc["tau_ref"]), reference_scheme=reference_scheme,
            outputs=outputs, conventions=conventions,
            reference_check=bool(doc.get("reference_check", False)))
    except ConfigError:
        raise
    except (ContractError, TypeError, ValueError) as exc:
        raise ConfigError(f"{origin}: {exc}") from exc
    validate_config(config)
    return config
