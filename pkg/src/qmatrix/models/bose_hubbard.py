"""Bose-Hubbard dimer and ring trimer in the truncated Fock product basis.

Interaction convention for the dimer: ``c/2 (n1 - n2)^2``.  With this
choice the fixed-N Hamiltonian maps exactly onto ``2 eps Jz + 2 v Jx +
2 c Jz^2`` under the Jordan-Schwinger representation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..eigen import Spectrum, eigh
from ..errors import DimensionMismatch, InvalidCutoff, SectorEmpty
from ..operators import ModeSpace, angular_momentum, mode_annihilators

SECTOR_TOL = 1e-6


@dataclass(frozen=True)
class DimerParams:
    n_particles: int = 6
    epsilon: float = 1.0
    v: float = 1.0
    c: float = 1.0
    penalty: float = 10000.0

    def __post_init__(self):
        if self.n_particles < 1:
            raise InvalidCutoff(f"need at least one particle, got {self.n_particles}")

    @property
    def space(self) -> ModeSpace:
        return ModeSpace.uniform(self.n_particles + 1, 2)


@dataclass(frozen=True)
class TrimerParams:
    """Three sites on a ring threaded by flux ``flux``.

    ``interaction`` is the on-site ``U``; :meth:`scaled` builds it from the
    dimensionless ``u = U N / K``.  ``cutoff=None`` means a per-site Fock
    cutoff equal to ``n_particles``, which makes the N-particle sector exact.
    """

    n_particles: int = 32
    hopping: float = 1.0
    flux: float = 0.8 * np.pi
    interaction: float = 0.0
    cutoff: int | None = None

    def __post_init__(self):
        if self.n_particles < 1:
            raise InvalidCutoff(f"need at least one particle, got {self.n_particles}")
        if self.cutoff is not None and self.cutoff < 1:
            raise InvalidCutoff(f"cutoff must be positive, got {self.cutoff}")

    @classmethod
    def scaled(cls, n_particles: int, u: float, hopping: float = 1.0,
               flux: float = 0.8 * np.pi, cutoff: int | None = None) -> "TrimerParams":
        return cls(n_particles, hopping, flux, hopping * u / n_particles, cutoff)

    @property
    def site_cutoff(self) -> int:
        return self.n_particles if self.cutoff is None else self.cutoff

    @property
    def u(self) -> float:
        return self.interaction * self.n_particles / self.hopping

    @property
    def space(self) -> ModeSpace:
        return ModeSpace.uniform(self.site_cutoff + 1, 3)

    @property
    def sector_exact(self) -> bool:
        return self.site_cutoff >= self.n_particles


def _number_ops(annihilators):
    return [a.conj().T @ a for a in annihilators]


def bose_hubbard_dimer(p: DimerParams, sparse: bool = False):
    """Dimer Hamiltonian on the full ``(N+1)^2`` product space."""
    a1, a2 = mode_annihilators(p.space, sparse=sparse)
    n1, n2 = _number_ops((a1, a2))
    diff = n1 - n2
    hop = a1.conj().T @ a2 + a2.conj().T @ a1
    return p.epsilon * diff + p.v * hop + (p.c / 2) * (diff @ diff)


def dimer_number_operator(p: DimerParams, sparse: bool = False):
    n1, n2 = _number_ops(mode_annihilators(p.space, sparse=sparse))
    return n1 + n2


def sector_indices(number_op, n: int, tol: float = SECTOR_TOL) -> np.ndarray:
    """Product-basis indices whose occupation sum is ``n``."""
    diag = number_op.diagonal() if sp.issparse(number_op) else np.diagonal(number_op)
    idx = np.flatnonzero(np.abs(diag.real - n) < tol)
    if idx.size == 0:
        raise SectorEmpty(f"no basis states with particle number {n}")
    return idx


def project_to_sector(H, number_op, n: int) -> np.ndarray:
    """Dense block of ``H`` on the ``N = n`` eigenspace of the diagonal ``number_op``."""
    if H.shape != number_op.shape:
        raise DimensionMismatch(f"H {H.shape} vs number operator {number_op.shape}")
    if sp.issparse(number_op):
        off = number_op - sp.diags(number_op.diagonal())
        offdiag = abs(off).max() if off.nnz else 0.0
    else:
        offdiag = np.max(np.abs(number_op - np.diag(np.diagonal(number_op))))
    if offdiag > 0:
        raise DimensionMismatch("number operator must be diagonal in the product basis")
    idx = sector_indices(number_op, n)
    if sp.issparse(H):
        return sp.csr_array(H)[idx, :][:, idx].toarray().astype(np.complex128)
    return np.asarray(H, dtype=np.complex128)[np.ix_(idx, idx)]


def jordan_schwinger_hamiltonian(p: DimerParams) -> np.ndarray:
    """Fixed-N dimer as a spin ``j = N/2``: ``2 eps Jz + 2 v Jx + 2 c Jz^2``."""
    ang = angular_momentum(p.n_particles / 2)
    return 2 * p.epsilon * ang.jz + 2 * p.v * ang.jx + 2 * p.c * (ang.jz @ ang.jz)


def fixed_number_spectrum(p: DimerParams, method: str = "projector") -> Spectrum:
    """The N+1 levels of the N-particle sector by one of three routes.

    ``penalty``: diagonalise ``H - lambda (N_op - N)`` on the full space and
    keep the eigenvectors with ``<N_op> = N``; eigenvectors are full-space.
    ``projector``: diagonalise the sector block; eigenvectors are in the
    sector basis.  ``jordan_schwinger``: diagonalise the spin form; the
    eigenvectors are in the ``|j, m>`` basis with ``m = (n1 - n2)/2``.
    """
    N = p.n_particles
    if method == "penalty":
        H = bose_hubbard_dimer(p)
        N_op = dimer_number_operator(p)
        shifted = H - p.penalty * (N_op - N * np.eye(H.shape[0]))
        w, V = eigh(shifted)
        occupation = np.einsum("ik,ij,jk->k", V.conj(), N_op, V).real
        keep = np.flatnonzero(np.abs(occupation - N) < SECTOR_TOL)
        if keep.size == 0:
            raise SectorEmpty(f"no eigenstates with particle number {N}")
        return Spectrum(w[keep], V[:, keep])
    if method == "projector":
        H_N = project_to_sector(bose_hubbard_dimer(p, sparse=True),
                                dimer_number_operator(p, sparse=True), N)
        return eigh(H_N)
    if method == "jordan_schwinger":
        return eigh(jordan_schwinger_hamiltonian(p))
    raise ValueError(f"unknown method {method!r}; use penalty, projector or jordan_schwinger")


def number_expectations(V: np.ndarray, number_op) -> np.ndarray:
    """``<v_k|N_op|v_k>`` for every column of ``V``."""
    NV = number_op @ V
    return np.einsum("ik,ik->k", V.conj(), NV).real


# --- trimer -------------------------------------------------------------------

def _trimer_hops(p: TrimerParams):
    a1, a2, a3 = mode_annihilators(p.space, sparse=True)
    forward = a2.conj().T @ a1 + a3.conj().T @ a2 + a1.conj().T @ a3
    return (a1, a2, a3), forward


def bose_hubbard_trimer(p: TrimerParams) -> sp.csr_array:
    """Sparse ring-trimer Hamiltonian on the full three-mode product space."""
    modes, forward = _trimer_hops(p)
    phase = np.exp(1j * p.flux / 3)
    H = -p.hopping / 2 * (phase * forward + np.conj(phase) * forward.conj().T)
    onsite = sum(a.conj().T @ a.conj().T @ a @ a for a in modes)
    H = H + (p.interaction / 2) * onsite
    return sp.csr_array(H)


def current_operator(p: TrimerParams) -> sp.csr_array:
    """``dH/dPhi``, the derivative of the hopping phases with respect to the flux."""
    _, forward = _trimer_hops(p)
    dphase = 1j / 3 * np.exp(1j * p.flux / 3)
    J = -p.hopping / 2 * (dphase * forward + np.conj(dphase) * forward.conj().T)
    return sp.csr_array(J)


def trimer_number_operator(p: TrimerParams) -> sp.csr_array:
    n_ops = _number_ops(mode_annihilators(p.space, sparse=True))
    return sp.csr_array(n_ops[0] + n_ops[1] + n_ops[2])


@dataclass(frozen=True)
class TrimerSectorResult:
    energies: np.ndarray
    currents: np.ndarray
    eigenvectors: np.ndarray


def trimer_sector_spectrum(p: TrimerParams) -> TrimerSectorResult:
    """Energies and current expectation values of every N-particle eigenstate."""
    N_op = trimer_number_operator(p)
    H_N = project_to_sector(bose_hubbard_trimer(p), N_op, p.n_particles)
    J_N = project_to_sector(current_operator(p), N_op, p.n_particles)
    w, V = eigh(H_N)
    currents = np.einsum("ik,ij,jk->k", V.conj(), J_N, V)
    return TrimerSectorResult(w, currents.real, V)
