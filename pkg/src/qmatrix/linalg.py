"""Dense and sparse complex linear algebra used throughout the package.

Dense operators are plain ``complex128`` numpy arrays; sparse ones are
``scipy.sparse.csr_array`` with sorted column indices.  The functions here
add shape checking and the package's error types on top.
"""
from __future__ import annotations

from math import ceil, factorial, log2

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .eigen import Spectrum, eigh, eigvalsh, fix_phases, hermitian_defect
from .errors import DimensionMismatch, ExpmOverflow, NotPSD

__all__ = [
    "Spectrum", "eigh", "eigvalsh", "fix_phases", "is_hermitian",
    "as_matrix", "kron", "kron_sparse", "matmul", "add", "scale", "adjoint",
    "trace", "norm_fro", "commutator", "expm", "sqrtm_psd",
    "from_dense", "to_dense", "spmatvec", "identity", "sparse_identity",
    "TOL_HERM", "TOL_RECON", "TOL_PSD", "TOL_EXPM",
]

TOL_HERM = 1e-10
TOL_RECON = 1e-9
TOL_PSD = 1e-10
TOL_EXPM = 1e-12

PADE_DEGREE = 8
# squarings beyond this mean ||A|| > 2**63; treat as overflow
MAX_SQUARINGS = 64


def as_matrix(A) -> np.ndarray:
    """Coerce to a 2-D complex array (sparse input is densified)."""
    if sp.issparse(A):
        A = A.toarray()
    M = np.asarray(A, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise DimensionMismatch(f"expected a nonempty 2-D matrix, got shape {M.shape}")
    return M


def _square(A, what: str) -> np.ndarray:
    M = as_matrix(A)
    if M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"{what} needs a square matrix, got {M.shape}")
    return M


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def is_hermitian(A, tol: float = TOL_HERM) -> bool:
    M = as_matrix(A)
    if M.shape[0] != M.shape[1]:
        return False
    return hermitian_defect(M) <= tol * max(norm_fro(M), np.finfo(float).tiny)


def kron(A, B) -> np.ndarray:
    """Kronecker product; block ``(i, j)`` of the result is ``A[i, j] * B``."""
    return np.kron(as_matrix(A), as_matrix(B))


def matmul(*mats) -> np.ndarray:
    if not mats:
        raise DimensionMismatch("matmul needs at least one operand")
    out = as_matrix(mats[0])
    for M in mats[1:]:
        M = as_matrix(M)
        if out.shape[1] != M.shape[0]:
            raise DimensionMismatch(f"cannot multiply {out.shape} by {M.shape}")
        out = out @ M
    return out


def add(*mats) -> np.ndarray:
    out = as_matrix(mats[0]).copy()
    for M in mats[1:]:
        M = as_matrix(M)
        if M.shape != out.shape:
            raise DimensionMismatch(f"cannot add {out.shape} and {M.shape}")
        out += M
    return out


def scale(c: complex, A) -> np.ndarray:
    return c * as_matrix(A)


def adjoint(A) -> np.ndarray:
    return as_matrix(A).conj().T.copy()


def trace(A) -> complex:
    return complex(np.trace(_square(A, "trace")))


def norm_fro(A) -> float:
    if sp.issparse(A):
        return float(spla.norm(A))
    return float(np.linalg.norm(np.asarray(A)))


def commutator(A, B):
    """``AB - BA``; works for dense and sparse operands alike."""
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"commutator of {A.shape} and {B.shape}")
    return A @ B - B @ A


def _pade_coefficients(m: int) -> np.ndarray:
    return np.array([
        factorial(2 * m - k) * factorial(m) / (factorial(2 * m) * factorial(k) * factorial(m - k))
        for k in range(m + 1)
    ])


_PADE = _pade_coefficients(PADE_DEGREE)


def expm(A) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a diagonal Pade approximant.

    ``A`` is scaled by ``2**-s`` until its 1-norm is at most 0.5, the
    degree-8 Pade approximant is evaluated, and the result squared ``s``
    times.
    """
    M = _square(A, "expm")
    if not np.all(np.isfinite(M)):
        raise ExpmOverflow("expm input has non-finite entries")
    n = M.shape[0]
    norm1 = float(np.max(np.sum(np.abs(M), axis=0)))
    s = 0 if norm1 <= 0.5 else int(ceil(log2(norm1 / 0.5)))
    if s > MAX_SQUARINGS:
        raise ExpmOverflow(f"||A||_1 = {norm1:.3e} exceeds the scaling budget")
    X = M / 2.0**s

    eye = np.eye(n, dtype=np.complex128)
    even = _PADE[0] * eye
    odd = _PADE[1] * X
    power = eye
    for k in range(2, PADE_DEGREE + 1):
        power = power @ X if k > 2 else X @ X
        if k % 2 == 0:
            even = even + _PADE[k] * power
        else:
            odd = odd + _PADE[k] * power
    R = np.linalg.solve(even - odd, even + odd)
    for _ in range(s):
        R = R @ R
    if not np.all(np.isfinite(R)):
        raise ExpmOverflow("matrix exponential overflowed")
    return R


def sqrtm_psd(A, tol_psd: float = TOL_PSD) -> np.ndarray:
    """Spectral square root of a Hermitian positive-semidefinite matrix.

    Slightly negative eigenvalues (down to ``-tol_psd*||A||_F``) are
    clamped to zero; anything more negative raises :class:`NotPSD`.
    """
    M = _square(A, "sqrtm_psd")
    w, V = eigh(M)
    floor = -tol_psd * norm_fro(M)
    if w.size and w[0] < floor:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3e} is below {floor:.3e}")
    root = np.sqrt(np.clip(w, 0.0, None))
    R = (V * root[np.newaxis, :]) @ V.conj().T
    return 0.5 * (R + R.conj().T)


# --- sparse -----------------------------------------------------------------

def from_dense(A) -> sp.csr_array:
    S = sp.csr_array(as_matrix(A))
    S.eliminate_zeros()
    S.sort_indices()
    return S


def to_dense(S) -> np.ndarray:
    if sp.issparse(S):
        return S.toarray().astype(np.complex128)
    return as_matrix(S)


def sparse_identity(n: int) -> sp.csr_array:
    return sp.csr_array(sp.identity(n, dtype=np.complex128, format="csr"))


def kron_sparse(A, B) -> sp.csr_array:
    out = sp.csr_array(sp.kron(sp.csr_array(A), sp.csr_array(B), format="csr"))
    out.sort_indices()
    return out


def spmatvec(A, v) -> np.ndarray:
    """Sparse matrix times vector, summing each row in ascending column order."""
    A = sp.csr_array(A)
    v = np.asarray(v)
    if v.ndim != 1 or A.shape[1] != v.shape[0]:
        raise DimensionMismatch(f"cannot apply {A.shape} matrix to vector of shape {v.shape}")
    if not A.has_sorted_indices:
        A = A.sorted_indices()
    return A @ v
