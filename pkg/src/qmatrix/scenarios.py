"""Named, configuration-driven reproductions of each worked example.

Every scenario has a complete table of defaults (the constants of the
reference computation) and a body that turns resolved parameters into
tables, images and a small summary.  :func:`run` writes them to disk
together with a JSON manifest.
"""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .errors import ConfigError, QMatrixError, Unclassifiable
from .evolution import (
    bloch_evolution,
    dominant_frequency,
    drift_velocity,
    evolve_observables,
    field_flip_transport,
    gaussian_state,
    GaussianInitParams,
    density_matrix,
    lindblad_evolve,
    LindbladParams,
    localized_state,
)
from .io import write_csv, write_pgm_heatmap
from .linalg import eigh, eigvalsh
from .models import (
    DimerParams,
    DoubleWellParams,
    PullenEdmondsParams,
    RotorParams,
    TightBindingParams,
    TrimerParams,
    classify_symmetry,
    asymmetric_top_j2_levels,
    bose_hubbard_dimer,
    coefficient_matrix,
    dimer_number_operator,
    double_well_hamiltonian,
    fixed_number_spectrum,
    level_density_histogram,
    number_expectations,
    pullen_edmonds_hamiltonian,
    right_well_hamiltonian,
    rotor_hamiltonian,
    trimer_sector_spectrum,
    wavefunction_2d,
)
from .operators import mode_annihilators, quadratures

FORMATS = frozenset({"csv", "pgm"})
PI = float(np.pi)


@dataclass
class Result:
    tables: dict[str, dict] = field(default_factory=dict)
    images: dict[str, np.ndarray] = field(default_factory=dict)
    summary: dict[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    defaults: dict
    body: Callable[[dict], Result]


@dataclass
class ScenarioConfig:
    scenario: str
    params: dict = field(default_factory=dict)
    out_dir: Path = Path("qmatrix-out")
    formats: frozenset = FORMATS


@dataclass
class RunManifest:
    scenario: str
    parameters: dict
    artifacts: list[str]
    duration_s: float
    version: str
    summary: dict

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True, default=_jsonable) + "\n"


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


# --- scenario bodies ------------------------------------------------------------

def _double_well(p: dict) -> Result:
    params = DoubleWellParams(p["basis_size"], p["x0"])
    H = double_well_hamiltonian(params)
    E = eigvalsh(H)
    _, V1 = eigh(right_well_hamiltonian(params))
    x = quadratures(params.basis_size - 1).x
    series = evolve_observables(H, V1[:, 0], {"x": x}, p["dt"], p["steps"])
    t = series.times
    gap = E[1] - E[0]
    n_levels = min(p["n_levels"], E.size)
    return Result(
        tables={
            "levels": {"n": np.arange(n_levels), "energy": E[:n_levels]},
            "dynamics": {"t": t, "x_mean": series["x"], "x_two_level": params.x0 * np.cos(gap * t)},
        },
        summary={
            "ground_splitting": gap,
            "dominant_frequency": dominant_frequency(series["x"], p["dt"]),
            "barrier_height": params.barrier_height,
            "max_norm_drift": float(np.max(np.abs(series["norm"] - 1))),
        },
    )


def _lattice(p: dict) -> TightBindingParams:
    return TightBindingParams(p["nmin"], p["nmax"], p["d"], p["force"], p["delta"],
                              p["epsilon"], p["hopping_sign"])


def _initial_packet(lat: TightBindingParams, p: dict) -> np.ndarray:
    # the reference packet is built as a row vector and conjugate-transposed
    psi = gaussian_state(GaussianInitParams(p["sigma"], p["phi0"], lat.sites))
    return psi.conj() if p["conjugate_initial"] else psi


def _bloch_tables(lat, series):
    t = series.times / lat.bloch_period
    table = {"t_over_TB": t, "mean_n": series["mean_n"], "width": series["width"], "norm": series["norm"]}
    # sites on rows with nmax at the top, time along columns
    image = series.snapshots.T[::-1]
    return table, image


def _bloch_breathing(p: dict) -> Result:
    lat = _lattice(p)
    series = bloch_evolution(lat, localized_state(lat, p["site"]), p["periods"], p["steps_per_period"])
    table, image = _bloch_tables(lat, series)
    return Result({"dynamics": table}, {"amplitude": image},
                  {"bloch_period": lat.bloch_period, "max_width": float(series["width"].max())})


def _bloch_oscillating(p: dict) -> Result:
    lat = _lattice(p)
    series = bloch_evolution(lat, _initial_packet(lat, p), p["periods"], p["steps_per_period"])
    table, image = _bloch_tables(lat, series)
    return Result({"dynamics": table}, {"amplitude": image},
                  {"bloch_period": lat.bloch_period,
                   "mean_n_amplitude": float(np.ptp(series["mean_n"]) / 2)})


def _bloch_flip(p: dict) -> Result:
    lat = _lattice(p)
    series = field_flip_transport(lat, _initial_packet(lat, p), p["periods"], p["steps_per_period"])
    table, image = _bloch_tables(lat, series)
    return Result({"transport": table}, {"amplitude": image},
                  {"velocity": drift_velocity(series, lat.d),
                   "predicted_velocity": lat.delta * lat.d / np.pi})


def _rotor(p: dict) -> Result:
    params = RotorParams(p["j"], p["ix"], p["iy"], p["iz"])
    E = eigvalsh(rotor_hamiltonian(params))
    table = {"k": np.arange(E.size), "energy": E}
    if params.j == 2:
        table["closed_form"] = asymmetric_top_j2_levels(params.ix, params.iy, params.iz)
    return Result({"levels": table})


def _rotor_density(p: dict) -> Result:
    params = RotorParams(p["j"], p["ix"], p["iy"], p["iz"])
    E = eigvalsh(rotor_hamiltonian(params))
    scale = params.j**2
    hist = level_density_histogram(E, scale, p["bins"])
    lo, hi = hist.mode_bin
    return Result(
        {"histogram": {"bin_center": hist.centers, "count": hist.counts}},
        summary={"min_scaled": float(E[0] / scale), "max_scaled": float(E[-1] / scale),
                 "mode_bin_low": lo, "mode_bin_high": hi},
    )


def _pullen_edmonds(p: dict) -> Result:
    params = PullenEdmondsParams(p["basis_size"], p["alpha"])
    E, V = eigh(pullen_edmonds_hamiltonian(params))
    n_out = min(p["n_out"], E.size)
    labels = [_symmetry_label(coefficient_matrix(V[:, k], params.basis_size)) for k in range(n_out)]
    C = coefficient_matrix(V[:, p["n_plot"] - 1], params.basis_size)
    grid = np.arange(p["grid_min"], p["grid_max"] + p["grid_step"] / 2, p["grid_step"])
    psi = wavefunction_2d(C, grid)
    rows, cols = np.indices(C.shape)
    return Result(
        tables={
            "levels": {"n": np.arange(n_out), "energy": E[:n_out], "symmetry": labels},
            "coefficients": {"n1": rows.ravel(), "n2": cols.ravel(), "c": C.real.ravel()},
        },
        images={"wavefunction": psi.T[::-1]},
        summary={"plotted_energy": float(E[p["n_plot"] - 1])},
    )


def _symmetry_label(C) -> str:
    try:
        return classify_symmetry(C).name
    except Unclassifiable:
        return "?"


def _dimer_full(p: dict) -> Result:
    params = DimerParams(p["n_particles"], p["epsilon"], p["v"], p["c"])
    sparse = params.space.total_dim > p["sparse_threshold"]
    H = bose_hubbard_dimer(params, sparse=sparse)
    N_op = dimer_number_operator(params, sparse=sparse)
    if sparse:
        H, N_op = H.toarray(), N_op.toarray()
    E, V = eigh(H)
    nav = number_expectations(V, N_op)
    order = np.lexsort((E, np.round(nav, 6)))
    nav, E = nav[order], E[order]
    converged = (np.abs(nav - np.rint(nav)) < 1e-6) & (np.rint(nav) <= params.n_particles)
    return Result(
        {"levels": {"number": nav, "energy": E, "converged": converged.astype(int)}},
        summary={"converged_states": int(converged.sum()),
                 "expected_converged": (params.n_particles + 1) * (params.n_particles + 2) // 2},
    )


def _dimer_sector(p: dict) -> Result:
    params = DimerParams(p["n_particles"], p["epsilon"], p["v"], p["c"], p["penalty"])
    table = {"k": np.arange(params.n_particles + 1)}
    for method in ("penalty", "projector", "jordan_schwinger"):
        table[method] = fixed_number_spectrum(params, method).eigenvalues
    return Result({"levels": table})


def _trimer(p: dict) -> Result:
    params = TrimerParams.scaled(p["n_particles"], p["u"], p["hopping"], p["flux"], p["cutoff"])
    res = trimer_sector_spectrum(params)
    scaled = res.energies / p["u"] if p["u"] else res.energies
    return Result(
        {"states": {"current": res.currents, "energy_over_u": scaled, "energy": res.energies}},
        summary={"sector_dim": int(res.energies.size), "ground_current": float(res.currents[0]),
                 "sector_exact": params.sector_exact},
    )


def _lindblad(p: dict) -> Result:
    params = DimerParams(p["n_particles"], p["epsilon"], p["v"], p["c"])
    H = bose_hubbard_dimer(params)
    a1, a2 = mode_annihilators(params.space)
    N = params.n_particles
    psi0 = np.zeros(H.shape[0])
    psi0[N] = 1.0  # |0> x |N>
    series = lindblad_evolve(
        H, density_matrix(psi0),
        LindbladParams(p["gamma"], a2, p["dt"], p["steps"], p["substeps"]),
        {"n1": a1.conj().T @ a1, "n2": a2.conj().T @ a2},
    )
    n1, n2 = series["n1"], series["n2"]
    return Result(
        {"occupations": {"t": series.times, "n1": n1, "n2": n2,
                         "total_relative": (n1 + n2) / N, "n2_relative": n2 / N,
                         "trace": series["trace"]}},
        summary={"final_total_relative": float((n1[-1] + n2[-1]) / N),
                 "max_trace_error": float(np.max(np.abs(series["trace"] - 1)))},
    )


_LATTICE_DEFAULTS = {
    "d": 2 * PI, "force": 0.005, "delta": 1.0, "epsilon": 0.0, "hopping_sign": 1,
    "periods": 2, "steps_per_period": 80,
}
_GAUSS_DEFAULTS = {"sigma": 0.005, "phi0": PI / 2, "conjugate_initial": True}
_MOMENTS = {"ix": 1 / 3, "iy": 0.5, "iz": 1.0}

SCENARIOS: dict[str, Scenario] = {s.name: s for s in [
    Scenario("double-well", "double-well doublets and tunnelling of <x>",
             {"basis_size": 100, "x0": 2.5, "dt": 20.0, "steps": 400, "n_levels": 8}, _double_well),
    Scenario("bloch-breathing", "Bloch breathing mode from a single occupied site",
             {"nmin": -60, "nmax": 60, **_LATTICE_DEFAULTS, "site": 0}, _bloch_breathing),
    Scenario("bloch-oscillating", "Bloch oscillation of a broad Gaussian packet",
             {"nmin": -60, "nmax": 60, **_LATTICE_DEFAULTS, **_GAUSS_DEFAULTS}, _bloch_oscillating),
    Scenario("bloch-flip", "directed transport under a field flipped every quarter period",
             {"nmin": -40, "nmax": 160, **_LATTICE_DEFAULTS, **_GAUSS_DEFAULTS}, _bloch_flip),
    Scenario("rotor", "asymmetric top levels for small j",
             {"j": 2.0, **_MOMENTS}, _rotor),
    Scenario("rotor-density", "level-density histogram of E/j^2 for large j",
             {"j": 1000, **_MOMENTS, "bins": 50}, _rotor_density),
    Scenario("pullen-edmonds", "Pullen-Edmonds levels, symmetry labels and one wavefunction",
             {"basis_size": 10, "alpha": 0.5, "n_out": 6, "n_plot": 4,
              "grid_min": -4.0, "grid_max": 4.0, "grid_step": 0.05}, _pullen_edmonds),
    Scenario("bh-dimer-full", "full truncated dimer spectrum against <N>",
             {"n_particles": 24, "epsilon": 1.0, "v": 1.0, "c": 1.0, "sparse_threshold": 4096},
             _dimer_full),
    Scenario("bh-dimer-sector", "fixed-N dimer levels by penalty, projector and Jordan-Schwinger",
             {"n_particles": 6, "epsilon": 1.0, "v": 1.0, "c": 1.0, "penalty": 10000.0},
             _dimer_sector),
    Scenario("bh-trimer", "ring trimer energies and currents in the N-particle sector",
             {"n_particles": 32, "cutoff": 32, "hopping": 1.0, "flux": 0.8 * PI, "u": 0.5},
             _trimer),
    Scenario("lindblad-dimer", "particle loss from site 2 of the open dimer",
             {"n_particles": 2, "epsilon": 0.0, "v": 0.3, "c": 0.6, "gamma": 0.02,
              "dt": 0.05, "steps": 2000, "substeps": 10}, _lindblad),
]}


# --- configuration ------------------------------------------------------------------

def parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def parse_overrides(items) -> dict:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        out[key.strip()] = parse_value(value.strip())
    return out


def load_config_file(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict) or any(isinstance(v, (dict, list)) for v in data.values()):
        raise ConfigError(f"{path}: expected a flat key-value object")
    return data


def _coerce(name: str, value, default):
    if isinstance(default, bool):
        if isinstance(value, bool):
            return value
    elif isinstance(default, int):
        if isinstance(value, int) and not isinstance(value, bool):
            return value
        if isinstance(value, float) and value.is_integer():
            return int(value)
    elif isinstance(default, float):
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
    elif isinstance(default, str):
        if isinstance(value, str):
            return value
    raise ConfigError(f"parameter {name!r} expects {type(default).__name__}, got {value!r}")


def resolve(scenario: str, overrides: dict | None = None) -> dict:
    """Defaults of ``scenario`` updated with ``overrides``, type checked."""
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}; choose from {', '.join(SCENARIOS)}")
    params = dict(SCENARIOS[scenario].defaults)
    for key, value in (overrides or {}).items():
        if key not in params:
            raise ConfigError(f"unknown parameter {key!r} for scenario {scenario!r}")
        params[key] = _coerce(key, value, params[key])
    return params


def run(config: ScenarioConfig) -> RunManifest:
    """Execute one scenario and write its artifacts and manifest."""
    params = resolve(config.scenario, config.params)
    unknown = set(config.formats) - FORMATS
    if unknown:
        raise ConfigError(f"unknown output formats {sorted(unknown)}")
    start = time.perf_counter()
    try:
        result = SCENARIOS[config.scenario].body(params)
    except QMatrixError as exc:
        raise type(exc)(f"scenario {config.scenario}: {exc}") from exc
    duration = time.perf_counter() - start

    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in config.formats:
        for name, table in result.tables.items():
            written.append(write_csv(out / f"{config.scenario}-{name}.csv", table).name)
    if "pgm" in config.formats:
        for name, image in result.images.items():
            written.append(write_pgm_heatmap(image, out / f"{config.scenario}-{name}.pgm").name)
    manifest = RunManifest(config.scenario, params, written, duration, __version__,
                           {k: _jsonable(v) if isinstance(v, np.generic) else v
                            for k, v in result.summary.items()})
    (out / f"{config.scenario}-manifest.json").write_text(manifest.to_json(), encoding="utf-8")
    return manifest
