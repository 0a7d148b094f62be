"""Acceptance checks, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line with the measured numbers
and then asserts.  Run ``pytest tests/test_acceptance.py -v`` to see them.
"""
import itertools
import time

import numpy as np
import pytest

from qmatrix.evolution import (
    GaussianInitParams,
    LindbladParams,
    bloch_evolution,
    density_matrix,
    dominant_frequency,
    drift_velocity,
    evolve_observables,
    field_flip_transport,
    gaussian_state,
    lindblad_evolve,
    localized_state,
)
from qmatrix.linalg import eigh, eigvalsh, expm, from_dense, kron, kron_sparse, spmatvec, to_dense
from qmatrix.models import (
    DimerParams,
    DoubleWellParams,
    PullenEdmondsParams,
    RotorParams,
    Symmetry,
    TightBindingParams,
    TrimerParams,
    asymmetric_top_j2_levels,
    bose_hubbard_dimer,
    classify_symmetry,
    coefficient_matrix,
    dimer_number_operator,
    double_well_hamiltonian,
    fixed_number_spectrum,
    level_density_histogram,
    number_expectations,
    pullen_edmonds_hamiltonian,
    right_well_hamiltonian,
    rotor_hamiltonian,
    symmetric_top_levels,
    trimer_sector_spectrum,
)
from qmatrix.operators import ladder, mode_annihilators, quadratures

from conftest import random_hermitian, random_sparse

PE_N10 = [1.0980, 2.2634, 2.2634, 3.2791, 3.5157, 3.7214]
PE_N20_BY_SYMMETRY = {Symmetry.A1: 1.0980, Symmetry.E: 2.2634, Symmetry.B1: 3.2789, Symmetry.B2: 3.7223}
ROTOR_J2 = [4.2679, 4.5000, 6.0000, 7.5000, 7.7321]
DIMER_N6 = [-4.792349, 0.078611, 4.347781, 6.348595, 12.731351, 12.786011, 24.5]
INSTANCES = 100


@pytest.fixture
def verdict(capsys):
    def report(number, checks, elapsed=None):
        ok = all(passed for _, passed in checks)
        detail = "; ".join(f"{'ok' if passed else 'NO'} {text}" for text, passed in checks)
        timing = f" [{elapsed:.2f} s]" if elapsed is not None else ""
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}{timing}")
        assert ok, detail
    return report


def conjugated_gaussian(p):
    return gaussian_state(GaussianInitParams(0.005, np.pi / 2, p.sites)).conj()


def test_criterion_01_pullen_edmonds(verdict):
    start = time.perf_counter()
    E = eigvalsh(pullen_edmonds_hamiltonian(PullenEdmondsParams(10, 0.5)))
    dev10 = np.max(np.abs(E[:6] - PE_N10))

    p = PullenEdmondsParams(20, 0.5)
    E20, V20 = eigh(pullen_edmonds_hamiltonian(p))
    first = {}
    for k in range(40):
        label = classify_symmetry(coefficient_matrix(V20[:, k], p.basis_size))
        first.setdefault(label, E20[k])
    dev20 = max(abs(first[s] - ref) for s, ref in PE_N20_BY_SYMMETRY.items())
    elapsed = time.perf_counter() - start
    verdict(1, [
        (f"N=10 first six max dev {dev10:.2e} <= 5e-4", dev10 <= 5e-4),
        (f"N=20 A1/E/B1/B2 max dev {dev20:.2e} <= 5e-3", dev20 <= 5e-3),
        (f"runtime {elapsed:.1f} s < 30 s", elapsed < 30),
    ], elapsed)


def test_criterion_02_asymmetric_top(verdict):
    start = time.perf_counter()
    E = eigvalsh(rotor_hamiltonian(RotorParams(2, 1 / 3, 1 / 2, 1.0)))
    elapsed = time.perf_counter() - start
    printed = np.max(np.abs(E - ROTOR_J2))
    closed = np.max(np.abs(E - asymmetric_top_j2_levels(1 / 3, 1 / 2, 1.0)))
    verdict(2, [
        (f"printed levels dev {printed:.2e} <= 5e-5", printed <= 5e-5),
        (f"closed form dev {closed:.2e} <= 1e-10", closed <= 1e-10),
        (f"runtime {elapsed:.3f} s < 1 s", elapsed < 1),
    ], elapsed)


def test_criterion_03_symmetric_top(verdict):
    rng = np.random.default_rng(3)
    worst = 0.0
    for j in range(1, 11):
        for _ in range(20):
            ix, iz = rng.uniform(0.2, 5.0, size=2)
            E = eigvalsh(rotor_hamiltonian(RotorParams(j, ix, ix, iz)))
            worst = max(worst, np.max(np.abs(E - np.sort(symmetric_top_levels(j, ix, iz)))))
    verdict(3, [(f"200 tops, max dev {worst:.2e} <= 1e-10", worst <= 1e-10)])


def test_criterion_04_dimer_sector_methods(verdict):
    start = time.perf_counter()
    p = DimerParams(6, 1.0, 1.0, 1.0, penalty=1e4)
    spectra = {m: fixed_number_spectrum(p, m).eigenvalues
               for m in ("penalty", "projector", "jordan_schwinger")}
    elapsed = time.perf_counter() - start
    printed = max(np.max(np.abs(E - DIMER_N6)) for E in spectra.values())
    js = np.max(np.abs(spectra["jordan_schwinger"] - spectra["projector"]))
    pen = np.max(np.abs(spectra["penalty"] - spectra["projector"]))
    verdict(4, [
        (f"printed levels dev {printed:.2e} <= 1e-5", printed <= 1e-5),
        (f"projector vs spin form {js:.2e} <= 1e-10", js <= 1e-10),
        (f"penalty vs projector {pen:.2e} <= 1e-6", pen <= 1e-6),
        (f"runtime {elapsed:.2f} s < 5 s", elapsed < 5),
    ], elapsed)


def test_criterion_05_dimer_convergence_count(verdict):
    n_per_mode = 25
    p = DimerParams(n_per_mode - 1, 1.0, 1.0, 1.0)
    _, V = eigh(bose_hubbard_dimer(p))
    occupation = number_expectations(V, dimer_number_operator(p))
    nearest = np.rint(occupation)
    converged = np.sum((np.abs(occupation - nearest) <= 1e-6) & (nearest <= n_per_mode - 1))
    expected = n_per_mode * (n_per_mode + 1) // 2
    verdict(5, [(f"{converged} converged states == {expected}", converged == expected)])


def test_criterion_06_double_well(verdict):
    start = time.perf_counter()
    p = DoubleWellParams(100, 2.5)
    H = double_well_hamiltonian(p)
    E = eigvalsh(H)
    splittings = E[1:8:2] - E[0:8:2]
    gaps = E[2:9:2] - E[1:8:2]
    ratios = splittings / gaps
    _, V1 = eigh(right_well_hamiltonian(p))
    series = evolve_observables(H, V1[:, 0], {"x": quadratures(p.basis_size - 1).x}, 20.0, 400)
    freq = dominant_frequency(series["x"], 20.0)
    rel = abs(freq - (E[1] - E[0])) / (E[1] - E[0])
    elapsed = time.perf_counter() - start
    verdict(6, [
        ("doublet ratios " + ", ".join(f"{r:.3g}" for r in ratios) + " each < 0.05",
         bool(np.all(ratios < 0.05))),
        (f"FFT frequency off by {rel:.2%} <= 2%", rel <= 0.02),
        (f"runtime {elapsed:.1f} s < 60 s", elapsed < 60),
    ], elapsed)


def test_criterion_07_bloch_breathing(verdict):
    p = TightBindingParams()
    series = bloch_evolution(p, localized_state(p), periods=2, steps_per_period=80)
    n = p.sites
    inside = []
    for t, amp in zip(series.times, series.snapshots):
        radius = p.delta / (p.d * p.force) * abs(np.sin(np.pi * t / p.bloch_period)) + 5
        inside.append(np.sum(amp[np.abs(n) <= radius] ** 2))
    worst = min(inside)
    revival = 0.5 * np.sum(np.abs(series.snapshots[80] ** 2 - series.snapshots[0] ** 2))
    verdict(7, [
        (f"minimum mass inside envelope {worst:.6f} >= 0.99", worst >= 0.99),
        (f"revival total variation {revival:.2e} <= 1e-2", revival <= 1e-2),
    ])


def test_criterion_08_field_flip(verdict):
    start = time.perf_counter()
    checks = []
    for force in (0.005, 0.01):
        p = TightBindingParams(nmin=-40, nmax=160, force=force)
        v = drift_velocity(field_flip_transport(p, conjugated_gaussian(p)), p.d)
        target = p.delta * p.d / np.pi
        checks.append((f"F={force}: velocity {v:.4f} vs {target:.4f}", abs(v - target) <= 0.1 * target))
    elapsed = time.perf_counter() - start
    checks.append((f"runtime {elapsed:.1f} s < 120 s", elapsed < 120))
    verdict(8, checks, elapsed)


def test_criterion_09_rotor_density(verdict):
    start = time.perf_counter()
    j = 200
    E = eigvalsh(rotor_hamiltonian(RotorParams(j, 1 / 3, 1 / 2, 1.0)))
    hist = level_density_histogram(E, j**2, 50)
    elapsed = time.perf_counter() - start
    scaled = E / j**2
    lo, hi = hist.mode_bin
    verdict(9, [
        (f"range [{scaled[0]:.4f}, {scaled[-1]:.4f}] within [{0.5 - 2 / j}, {1.5 + 2 / j}]",
         scaled[0] >= 0.5 - 2 / j and scaled[-1] <= 1.5 + 2 / j),
        (f"mode bin [{lo:.4f}, {hi:.4f}] contains 1.0", lo <= 1.0 <= hi),
        (f"runtime {elapsed:.1f} s < 120 s", elapsed < 120),
    ], elapsed)


def circulant_currents(K, phi, h=1e-6):
    """Single-particle ring currents from a 3x3 matrix and a central difference."""
    def levels(f):
        t = -K / 2 * np.exp(1j * f / 3)
        H = np.zeros((3, 3), dtype=complex)
        for s in range(3):
            H[(s + 1) % 3, s] += t
            H[s, (s + 1) % 3] += np.conj(t)
        return np.linalg.eigvalsh(H)
    return (levels(phi + h) - levels(phi - h)) / (2 * h)


def test_criterion_10_trimer(verdict):
    start = time.perf_counter()
    K, phi, N = 1.0, 0.8 * np.pi, 30
    J1 = circulant_currents(K, phi)
    allowed = np.array(sorted({float(np.dot(occ, J1)) for occ in itertools.product(range(N + 1), repeat=3)
                               if sum(occ) == N}))
    weak = trimer_sector_spectrum(TrimerParams.scaled(N, 0.5, K, phi))
    deviation = max(np.min(np.abs(allowed - c)) for c in weak.currents)
    in_hull = bool(np.all((weak.currents >= N * J1.min() - 1e-9) & (weak.currents <= N * J1.max() + 1e-9)))
    strong = abs(trimer_sector_spectrum(TrimerParams.scaled(N, 50000, K, phi)).currents[0])
    strong_odd = abs(trimer_sector_spectrum(TrimerParams.scaled(N + 1, 50000, K, phi)).currents[0])
    elapsed = time.perf_counter() - start
    verdict(10, [
        (f"sector dimension {weak.energies.size} == 496", weak.energies.size == 496),
        ("u=0.5 currents inside the single-particle hull", in_hull),
        (f"u=0.5 largest distance to a quantized current {deviation:.3g} <= 1e-6", deviation <= 1e-6),
        (f"u=50000 N=30 ground current {strong:.3g} < 1e-3", strong < 1e-3 * K),
        (f"u=50000 N=31 ground current {strong_odd:.3g} > 1e-2", strong_odd > 1e-2 * K),
        (f"runtime {elapsed:.1f} s < 600 s", elapsed < 600),
    ], elapsed)


def lindblad_start(v, c):
    p = DimerParams(2, 0.0, v, c)
    a1, a2 = mode_annihilators(p.space)
    H = bose_hubbard_dimer(p)
    psi = np.zeros(H.shape[0])
    psi[2] = 1.0  # |0> x |2>
    return H, a1, a2, density_matrix(psi)


def test_criterion_11_lindblad(verdict):
    start = time.perf_counter()
    H, a1, a2, rho0 = lindblad_start(0.3, 0.6)
    series = lindblad_evolve(H, rho0, LindbladParams(0.02, a2, 0.05, 2000, 10),
                             {"n1": a1.conj().T @ a1, "n2": a2.conj().T @ a2}, snapshot_every=1)
    trace_err = np.max(np.abs(series["trace"] - 1))
    total = series["n1"] + series["n2"]
    rise = np.max(np.diff(total))
    herm = np.max(series["hermiticity"])
    min_eig = min(np.linalg.eigvalsh(0.5 * (r + r.conj().T))[0] for r in series.snapshots)

    H0, _, b2, rho0 = lindblad_start(0.0, 0.0)
    decay = lindblad_evolve(H0, rho0, LindbladParams(0.02, b2), {"n2": b2.conj().T @ b2})
    exact = 2 * np.exp(-0.02 * decay.times)
    decay_err = np.max(np.abs(decay["n2"] - exact) / exact)
    elapsed = time.perf_counter() - start
    verdict(11, [
        (f"trace error {trace_err:.2e} <= 1e-6", trace_err <= 1e-6),
        (f"largest rise of n1+n2 {rise:.2e} <= 0", rise <= 0),
        (f"Hermiticity defect {herm:.2e} <= 1e-8", herm <= 1e-8),
        (f"minimum eigenvalue {min_eig:.3g} >= -1e-6", min_eig >= -1e-6),
        (f"pure decay relative error {decay_err:.2e} <= 1e-4", decay_err <= 1e-4),
        (f"runtime {elapsed:.1f} s < 60 s", elapsed < 60),
    ], elapsed)


def test_criterion_12_property_suites(verdict):
    worst = {"reconstruction": 0.0, "orthonormality": 0.0, "unitarity": 0.0, "sparse": 0.0, "corner": 0.0}
    for seed in range(INSTANCES):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 40))
        H = random_hermitian(rng, n)
        w, V = eigh(H)
        worst["reconstruction"] = max(worst["reconstruction"],
                                      np.max(np.abs(V @ np.diag(w) @ V.conj().T - H)) / max(1, np.max(np.abs(w))))
        worst["orthonormality"] = max(worst["orthonormality"], np.max(np.abs(V.conj().T @ V - np.eye(n))))

        U = expm(-1j * rng.uniform(0.01, 5.0) * H)
        worst["unitarity"] = max(worst["unitarity"], np.max(np.abs(U.conj().T @ U - np.eye(n))))

        A = random_sparse(rng, n, n)
        B = random_sparse(rng, int(rng.integers(1, 6)), int(rng.integers(1, 6)))
        x = rng.normal(size=n) + 1j * rng.normal(size=n)
        sparse_dev = max(np.max(np.abs(to_dense(from_dense(A)) - A)),
                         np.max(np.abs(spmatvec(from_dense(A), x) - A @ x)),
                         np.max(np.abs(to_dense(kron_sparse(A, B)) - kron(A, B))))
        worst["sparse"] = max(worst["sparse"], sparse_dev)

        N = int(rng.integers(1, 301))
        lad = ladder(N)
        expected = np.eye(N + 1)
        expected[N, N] = -N
        comm = lad.a @ lad.a_dag - lad.a_dag @ lad.a
        worst["corner"] = max(worst["corner"], np.max(np.abs(comm - expected)) / N)
    verdict(12, [
        (f"{INSTANCES} eigh reconstructions, worst {worst['reconstruction']:.1e}", worst["reconstruction"] <= 1e-12),
        (f"{INSTANCES} orthonormality checks, worst {worst['orthonormality']:.1e}", worst["orthonormality"] <= 1e-12),
        (f"{INSTANCES} expm unitarity checks, worst {worst['unitarity']:.1e}", worst["unitarity"] <= 1e-10),
        (f"{INSTANCES} sparse/dense comparisons, worst {worst['sparse']:.1e}", worst["sparse"] <= 1e-12),
        (f"{INSTANCES} truncation corner checks, worst {worst['corner']:.1e}", worst["corner"] <= 1e-13),
    ])

