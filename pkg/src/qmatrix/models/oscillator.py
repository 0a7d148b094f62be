"""Oscillator-basis models: the 1-D double well and the 2-D Pullen-Edmonds system."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import DimensionMismatch, InvalidCutoff, Unclassifiable
from ..linalg import sqrtm_psd
from ..operators import ModeSpace, lift, quadratures


@dataclass(frozen=True)
class DoubleWellParams:
    """``V(x) = (|x| - x0)^2 / 2`` in an oscillator basis of ``basis_size`` states."""

    basis_size: int = 100
    x0: float = 2.5

    def __post_init__(self):
        if self.basis_size < 2:
            raise InvalidCutoff(f"basis_size must be >= 2, got {self.basis_size}")

    @property
    def barrier_height(self) -> float:
        return self.x0**2 / 2


def double_well_hamiltonian(p: DoubleWellParams) -> np.ndarray:
    q = quadratures(p.basis_size - 1)
    eye = np.eye(p.basis_size)
    shifted = sqrtm_psd(q.x @ q.x) - p.x0 * eye
    H = q.p @ q.p / 2 + shifted @ shifted / 2
    return 0.5 * (H + H.conj().T)


def right_well_hamiltonian(p: DoubleWellParams) -> np.ndarray:
    """Harmonic oscillator centred on ``+x0``; its ground state starts the tunnelling run."""
    q = quadratures(p.basis_size - 1)
    shifted = q.x - p.x0 * np.eye(p.basis_size)
    return q.p @ q.p / 2 + shifted @ shifted / 2


@dataclass(frozen=True)
class PullenEdmondsParams:
    basis_size: int = 10
    alpha: float = 0.5

    def __post_init__(self):
        if self.basis_size < 2:
            raise InvalidCutoff(f"basis_size must be >= 2, got {self.basis_size}")

    @property
    def dim(self) -> int:
        return self.basis_size**2


def pullen_edmonds_hamiltonian(p: PullenEdmondsParams) -> np.ndarray:
    """``p1^2/2 + p2^2/2 + x1^2/2 + x2^2/2 + alpha x1^2 x2^2`` on the product basis."""
    q = quadratures(p.basis_size - 1)
    space = ModeSpace.uniform(p.basis_size, 2)
    x1, x2 = lift(q.x, 1, space), lift(q.x, 2, space)
    p1, p2 = lift(q.p, 1, space), lift(q.p, 2, space)
    x1s, x2s = x1 @ x1, x2 @ x2
    H = (p1 @ p1 + p2 @ p2 + x1s + x2s) / 2 + p.alpha * (x1s @ x2s)
    return 0.5 * (H + H.conj().T)


def swap_operator(n: int) -> np.ndarray:
    """Permutation exchanging the two modes of an ``n x n`` product space."""
    P = np.zeros((n * n, n * n))
    i, j = np.divmod(np.arange(n * n), n)
    P[j * n + i, i * n + j] = 1.0
    return P


def coefficient_matrix(vector: np.ndarray, basis_size: int) -> np.ndarray:
    """Reshape a product-space eigenvector into ``C[n1, n2]`` (first mode = rows)."""
    vector = np.asarray(vector)
    if vector.shape != (basis_size**2,):
        raise DimensionMismatch(f"vector of shape {vector.shape} is not {basis_size}^2 long")
    C = vector.reshape(basis_size, basis_size)
    # eigenvectors of a real symmetric H are real up to a global phase
    k = np.argmax(np.abs(C))
    phase = C.flat[k] / abs(C.flat[k])
    C = C / phase
    if np.max(np.abs(C.imag)) < 1e-10 * np.max(np.abs(C)):
        C = C.real
    return C / np.linalg.norm(C)


class Symmetry(str, Enum):
    A1 = "A1"
    A2 = "A2"
    B1 = "B1"
    B2 = "B2"
    E = "E"


SYMMETRY_TOL = 1e-6


def classify_symmetry(C: np.ndarray, tol: float = SYMMETRY_TOL) -> Symmetry:
    """C4v label of a 2-D eigenstate from its oscillator coefficients.

    Exchange symmetry is read from ``C`` vs ``C^T``; reflection parity from
    which index-parity class (even-even, odd-odd, mixed) carries the weight.
    Mixed-parity support means a member of a degenerate E pair.
    """
    C = np.asarray(C)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise DimensionMismatch(f"coefficient matrix must be square, got {C.shape}")
    norm = np.linalg.norm(C)
    if norm == 0:
        raise Unclassifiable("zero coefficient matrix")
    C = C / norm
    parity = np.add.outer(np.arange(C.shape[0]) % 2, np.arange(C.shape[1]) % 2)
    weight = np.abs(C) ** 2
    even_even = weight[parity == 0].sum()
    odd_odd = weight[parity == 2].sum()
    mixed = weight[parity == 1].sum()
    if mixed >= 1 - tol:
        return Symmetry.E
    symmetric = np.linalg.norm(C - C.T) <= tol
    antisymmetric = np.linalg.norm(C + C.T) <= tol
    if even_even >= 1 - tol:
        if symmetric:
            return Symmetry.A1
        if antisymmetric:
            return Symmetry.B1
    elif odd_odd >= 1 - tol:
        if symmetric:
            return Symmetry.B2
        if antisymmetric:
            return Symmetry.A2
    raise Unclassifiable(
        f"weights even/odd/mixed = {even_even:.3g}/{odd_odd:.3g}/{mixed:.3g}, "
        f"||C-C^T|| = {np.linalg.norm(C - C.T):.3g}"
    )


def ho_wavefunctions(grid, count: int) -> np.ndarray:
    """Oscillator functions ``phi_0..phi_{count-1}`` on ``grid``, one per column.

    Unnormalised: ``phi_0 = exp(-x^2/2)`` and
    ``phi_n = sqrt(2/n) x phi_{n-1} - sqrt(1 - 1/n) phi_{n-2}``.
    """
    if count < 2:
        raise InvalidCutoff(f"need at least two functions, got {count}")
    x = np.asarray(grid, dtype=float)
    out = np.empty((x.size, count))
    gauss = np.exp(-0.5 * x**2)
    out[:, 0] = gauss
    out[:, 1] = np.sqrt(2.0) * x * gauss
    for n in range(2, count):
        out[:, n] = np.sqrt(2.0 / n) * x * out[:, n - 1] - np.sqrt(1.0 - 1.0 / n) * out[:, n - 2]
    return out


def wavefunction_2d(C: np.ndarray, grid, grid2=None) -> np.ndarray:
    """``psi(x1, x2) = sum_nm C[n, m] phi_n(x1) phi_m(x2)``; rows index ``x1``."""
    C = np.asarray(C)
    if C.ndim != 2:
        raise DimensionMismatch(f"coefficient matrix must be 2-D, got {C.shape}")
    phi1 = ho_wavefunctions(grid, max(C.shape[0], 2))[:, : C.shape[0]]
    g2 = grid if grid2 is None else grid2
    phi2 = ho_wavefunctions(g2, max(C.shape[1], 2))[:, : C.shape[1]]
    return phi1 @ C @ phi2.T
