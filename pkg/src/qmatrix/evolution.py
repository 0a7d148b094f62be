"""Time propagation: fixed-step unitary evolution, Bloch-oscillation protocols
and a predictor-corrector integrator for the Lindblad master equation."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import BoundaryReached, DimensionMismatch, NonFiniteState, NotHermitian
from .linalg import as_matrix, expm, is_hermitian
from .models.lattice import TightBindingParams, tight_binding_hamiltonian

NORM_DRIFT_TOL = 1e-8
EDGE_SITES = 5
EDGE_MASS_LIMIT = 0.01


@dataclass
class TimeSeries:
    """Observables sampled on the uniform grid ``t0 + k*dt``, k = 0..steps.

    Sample 0 is the initial state; every later sample is taken after one
    more step.  ``snapshots`` (if kept) has one row per sample.
    """

    t0: float
    dt: float
    observables: dict[str, np.ndarray] = field(default_factory=dict)
    snapshots: np.ndarray | None = None

    @property
    def n_samples(self) -> int:
        return len(next(iter(self.observables.values())))

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n_samples)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.observables[name]


def propagator(H, dt: float) -> np.ndarray:
    """``exp(-i H dt)`` for Hermitian ``H``."""
    H = as_matrix(H)
    if not is_hermitian(H):
        raise NotHermitian("propagator needs a Hermitian Hamiltonian")
    return expm(-1j * dt * H)


def expectation(op: np.ndarray, psi: np.ndarray) -> float:
    return float(np.vdot(psi, op @ psi).real)


def _run_unitary(steps_and_props, psi0, observables, keep, complex_snapshots=False):
    psi = np.asarray(psi0, dtype=np.complex128)
    ops = {k: as_matrix(v) for k, v in observables.items()}
    for name, op in ops.items():
        if op.shape != (psi.size, psi.size):
            raise DimensionMismatch(f"observable {name!r} has shape {op.shape}, state has {psi.size}")
    n_total = sum(n for n, _ in steps_and_props) + 1
    values = {k: np.empty(n_total) for k in ops}
    values["norm"] = np.empty(n_total)
    snaps = None
    if keep:
        snaps = np.empty((n_total, psi.size), dtype=np.complex128 if complex_snapshots else float)

    def record(k):
        for name, op in ops.items():
            values[name][k] = expectation(op, psi)
        values["norm"][k] = np.linalg.norm(psi)
        if snaps is not None:
            snaps[k] = psi if complex_snapshots else np.abs(psi)

    k = 0
    record(k)
    for n, U in steps_and_props:
        for _ in range(n):
            psi = U @ psi
            k += 1
            record(k)
    return values, snaps


def evolve_observables(H, psi0, observables: Mapping[str, np.ndarray], dt: float, steps: int,
                       keep_snapshots: bool = False, complex_snapshots: bool = False) -> TimeSeries:
    """Apply ``exp(-i H dt)`` ``steps`` times, recording ``<psi|O|psi>`` before each step and at the end."""
    H = as_matrix(H)
    psi0 = np.asarray(psi0, dtype=np.complex128)
    if psi0.shape != (H.shape[0],):
        raise DimensionMismatch(f"state of shape {psi0.shape} does not match H {H.shape}")
    U = propagator(H, dt)
    values, snaps = _run_unitary([(steps, U)], psi0, observables, keep_snapshots, complex_snapshots)
    return TimeSeries(0.0, dt, values, snaps)


@dataclass(frozen=True)
class GaussianInitParams:
    sigma: float = 0.005
    phi0: float = np.pi / 2
    sites: np.ndarray = field(default_factory=lambda: np.arange(-60, 61))


def gaussian_state(p: GaussianInitParams) -> np.ndarray:
    """``psi_n ~ exp(-sigma n^2 + i n phi0)``, normalised."""
    if not p.sigma > 0:
        raise ValueError(f"sigma must be positive, got {p.sigma}")
    n = np.asarray(p.sites, dtype=float)
    psi = np.exp(-p.sigma * n**2 + 1j * n * p.phi0)
    return psi / np.linalg.norm(psi)


def localized_state(p: TightBindingParams, site: int = 0) -> np.ndarray:
    psi = np.zeros(p.n_sites, dtype=np.complex128)
    psi[site - p.nmin] = 1.0
    return psi


def _lattice_observables(p: TightBindingParams) -> dict[str, np.ndarray]:
    n = p.sites.astype(float)
    return {"mean_n": np.diag(n), "mean_n2": np.diag(n**2)}


def _with_width(values):
    values["width"] = np.sqrt(np.clip(values["mean_n2"] - values["mean_n"] ** 2, 0.0, None))
    return values


def bloch_evolution(p: TightBindingParams, psi0, periods: int = 2, steps_per_period: int = 80,
                    complex_snapshots: bool = False) -> TimeSeries:
    """Propagate over ``periods`` Bloch periods with ``steps_per_period`` steps each.

    Snapshots hold ``|psi_n(t)|`` (rows: time, columns: sites ``nmin..nmax``).
    """
    if p.force == 0:
        raise ValueError("Bloch evolution needs a nonzero force")
    dt = p.bloch_period / steps_per_period
    U = propagator(tight_binding_hamiltonian(p), dt)
    values, snaps = _run_unitary([(periods * steps_per_period, U)], psi0,
                                 _lattice_observables(p), True, complex_snapshots)
    return TimeSeries(0.0, dt, _with_width(values), snaps)


def edge_mass(p: TightBindingParams, psi: np.ndarray, edge: int = EDGE_SITES) -> float:
    prob = np.abs(psi) ** 2
    return float(prob[:edge].sum() + prob[-edge:].sum())


def field_flip_transport(p: TightBindingParams, psi0, periods: int = 2, steps_per_period: int = 80,
                         keep_snapshots: bool = True) -> TimeSeries:
    """Alternate ``+F`` and ``-F`` propagators every quarter Bloch period.

    Each Bloch period is two ``(+F, -F)`` blocks of ``J/4`` steps.  Raises
    :class:`BoundaryReached` if more than 1% of the probability ends up on
    the five outermost sites at either end.
    """
    if p.force == 0:
        raise ValueError("field flips need a nonzero force")
    if steps_per_period % 4:
        raise ValueError(f"steps_per_period must be divisible by 4, got {steps_per_period}")
    dt = p.bloch_period / steps_per_period
    quarter = steps_per_period // 4
    U_plus = propagator(tight_binding_hamiltonian(p, p.force), dt)
    U_minus = propagator(tight_binding_hamiltonian(p, -p.force), dt)
    schedule = [(quarter, U_plus), (quarter, U_minus)] * (2 * periods)
    values, snaps = _run_unitary(schedule, psi0, _lattice_observables(p), True)
    for row in snaps:
        if np.sum(row[:EDGE_SITES] ** 2) + np.sum(row[-EDGE_SITES:] ** 2) > EDGE_MASS_LIMIT:
            raise BoundaryReached(
                f"more than {EDGE_MASS_LIMIT:.0%} of the probability reached the lattice edge; "
                f"widen nmin..nmax")
    return TimeSeries(0.0, dt, _with_width(values), snaps if keep_snapshots else None)


def drift_velocity(series: TimeSeries, d: float = 1.0) -> float:
    """Least-squares slope of ``d * <n>`` against time."""
    slope, _ = np.polyfit(series.times, d * series["mean_n"], 1)
    return float(slope)


def dominant_frequency(signal, dt: float, pad_factor: int = 64) -> float:
    """Angular frequency of the largest peak in the zero-padded DFT of ``signal`` (mean removed)."""
    x = np.asarray(signal, dtype=float)
    x = x - x.mean()
    n = x.size * pad_factor
    spectrum = np.abs(np.fft.rfft(x, n=n))
    spectrum[0] = 0.0
    k = int(np.argmax(spectrum))
    return 2 * np.pi * k / (n * dt)


# --- open systems -------------------------------------------------------------

@dataclass(frozen=True)
class LindbladParams:
    gamma: float
    jump: np.ndarray
    dt: float = 0.05
    steps: int = 2000
    substeps: int = 10

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError(f"gamma must be nonnegative, got {self.gamma}")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.substeps < 1:
            raise ValueError(f"substeps must be >= 1, got {self.substeps}")


def density_matrix(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128)
    return np.outer(psi, psi.conj())


def lindblad_generator(H: np.ndarray, jump: np.ndarray, gamma: float):
    """Return ``L(rho) = -i[H, rho] - gamma/2 (J^+J rho + rho J^+J - 2 J rho J^+)``."""
    jd = jump.conj().T
    jdj = jd @ jump

    def L(rho):
        out = -1j * (H @ rho - rho @ H)
        if gamma:
            out -= 0.5 * gamma * (jdj @ rho + rho @ jdj - 2.0 * jump @ rho @ jd)
        return out

    return L


def lindblad_evolve(H, rho0, p: LindbladParams, observables: Mapping[str, np.ndarray],
                    snapshot_every: int = 0) -> TimeSeries:
    """Explicit-midpoint predictor-corrector integration of the master equation.

    Every outer step of length ``dt`` is split into ``substeps`` substeps
    ``rho_p = rho + h L(rho)``, ``rho <- rho + h L((rho + rho_p)/2)``.
    ``tr(rho O)`` is recorded for each observable before each outer step and
    after the last one, together with the trace and the Hermiticity defect.
    With ``snapshot_every=k`` the full density matrix is kept every k steps.
    """
    H = as_matrix(H)
    rho = as_matrix(rho0).copy()
    jump = as_matrix(p.jump)
    if rho.shape != H.shape or jump.shape != H.shape:
        raise DimensionMismatch(f"H {H.shape}, rho {rho.shape}, jump {jump.shape} must agree")
    ops = {k: as_matrix(v) for k, v in observables.items()}
    L = lindblad_generator(H, jump, p.gamma)
    h = p.dt / p.substeps

    n = p.steps + 1
    values = {k: np.empty(n) for k in ops}
    values["trace"] = np.empty(n)
    values["hermiticity"] = np.empty(n)
    snaps = []
    for step in range(n):
        for name, op in ops.items():
            values[name][step] = np.trace(rho @ op).real
        values["trace"][step] = np.trace(rho).real
        values["hermiticity"][step] = np.max(np.abs(rho - rho.conj().T))
        if snapshot_every and step % snapshot_every == 0:
            snaps.append(rho.copy())
        if step == p.steps:
            break
        with np.errstate(over="ignore", invalid="ignore"):  # reported just below
            for _ in range(p.substeps):
                rho_pred = rho + h * L(rho)
                rho = rho + h * L(0.5 * (rho + rho_pred))
        if not np.all(np.isfinite(rho)):
            raise NonFiniteState(f"density matrix became non-finite at step {step + 1}")
    return TimeSeries(0.0, p.dt, values, np.array(snaps) if snapshot_every else None)
