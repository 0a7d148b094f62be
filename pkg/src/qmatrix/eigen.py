"""Dense Hermitian eigensolver.

Householder reduction of a complex Hermitian matrix to a real symmetric
tridiagonal one, followed by the implicit-shift QL iteration on the
tridiagonal.  The QL sweep is the hot loop and is compiled with numba when
available; the pure-Python version is kept as the fallback and as the
reference the compiled one is generated from.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NotHermitian

TOL_HERM = 1e-10
SWEEPS_PER_DIM = 30


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with eigenvectors stored column-wise."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __len__(self) -> int:
        return self.eigenvalues.shape[0]

    def __iter__(self):
        # allows ``E, V = eigh(H)``
        yield self.eigenvalues
        yield self.eigenvectors


def _tql_implicit_py(d, e, zt, max_iter):
    # d: diagonal, e[i] couples d[i] and d[i+1] (e[n-1] unused),
    # zt: rows are the accumulated rotation vectors.
    n = d.shape[0]
    # absolute floor: couplings below eps*||T|| are negligible even where the
    # neighbouring diagonal entries vanish and the relative test never fires
    floor = 0.0
    for i in range(n):
        floor = max(floor, abs(d[i]) + 2.0 * abs(e[i]))
    floor *= 2.220446049250313e-16
    total = 0
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd or abs(e[m]) <= floor:
                    break
                m += 1
            if m == l:
                break
            if total >= max_iter:
                return -1
            total += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                for k in range(zt.shape[1]):
                    f = zt[i + 1, k]
                    zt[i + 1, k] = s * zt[i, k] + c * f
                    zt[i, k] = c * zt[i, k] - s * f
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return total


try:
    from numba import njit

    _tql_implicit = njit(cache=True, nogil=True)(_tql_implicit_py)
except ImportError:  # pragma: no cover
    _tql_implicit = _tql_implicit_py


def hermitian_defect(H: np.ndarray) -> float:
    """max |H - H^dagger| over all entries."""
    if H.size == 0:
        return 0.0
    return float(np.max(np.abs(H - H.conj().T)))


def householder_tridiagonal(H: np.ndarray, accumulate: bool = True):
    """Reduce Hermitian ``H`` to real tridiagonal form.

    Returns ``(d, e, Q)`` with ``H = Q T Q^dagger`` where ``T`` has diagonal
    ``d`` and real nonnegative off-diagonal ``e`` (length n-1).  With
    ``accumulate=False`` the transformation is not formed and ``Q`` is None.
    """
    H = np.asarray(H)
    # real symmetric input stays in real arithmetic (half the memory traffic)
    dtype = np.float64 if np.isrealobj(H) else np.complex128
    A = np.array(H, dtype=dtype, copy=True)
    n = A.shape[0]
    Q = np.eye(n, dtype=dtype) if accumulate else None
    for k in range(n - 2):
        x = A[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if x0 != 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        # trailing block B <- P B P with P = I - 2 v v^dagger
        B = A[k + 1:, k + 1:]
        p = B @ v
        K = np.vdot(v, p).real
        w = p - K * v
        vw = np.stack((v, w), axis=1)
        B -= 2.0 * (vw @ vw[:, ::-1].conj().T)
        A[k + 1:, k] = 0.0
        A[k, k + 1:] = 0.0
        A[k + 1, k] = -phase * alpha
        A[k, k + 1] = np.conj(A[k + 1, k])
        if accumulate:
            Qs = Q[:, k + 1:]
            Qs -= 2.0 * np.outer(Qs @ v, v.conj())
    d = A.diagonal().real.copy()
    off = A.diagonal(-1).copy()
    # diagonal unitary that makes the off-diagonal real and nonnegative
    phases = np.ones(n, dtype=dtype)
    e = np.abs(off)
    for k in range(n - 1):
        if e[k] > 0.0:
            phases[k + 1] = phases[k] * off[k] / e[k]
        else:
            phases[k + 1] = phases[k]
    if accumulate:
        Q = Q * phases[np.newaxis, :]
    return d, e, Q


def _ldexp(A: np.ndarray, k: int) -> np.ndarray:
    if not k:
        return A
    if np.iscomplexobj(A):
        return np.ldexp(A.real, k) + 1j * np.ldexp(A.imag, k)
    return np.ldexp(A, k)


def fix_phases(V: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real and >= 0."""
    if V.size == 0:
        return V
    idx = np.argmax(np.abs(V), axis=0)
    pivots = V[idx, np.arange(V.shape[1])]
    mags = np.abs(pivots)
    factors = np.where(mags > 0, np.conj(pivots) / np.where(mags > 0, mags, 1.0), 1.0)
    return V * factors[np.newaxis, :]


def eigh(H, tol_herm: float = TOL_HERM, vectors: bool = True) -> Spectrum:
    """Eigen-decomposition of a Hermitian matrix.

    Eigenvalues come back ascending; eigenvectors are phase fixed so the
    largest-magnitude component of each column is real and nonnegative.
    Raises :class:`NotHermitian` when ``max|H - H^dagger| > tol_herm*||H||_F``
    and :class:`NoConvergence` if the QL iteration exceeds ``30*n`` sweeps.
    """
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise NotHermitian(f"eigh needs a square matrix, got shape {H.shape}")
    n = H.shape[0]
    if n == 0:
        return Spectrum(np.zeros(0), np.zeros((0, 0), dtype=np.complex128))
    if not np.all(np.isfinite(H)):
        raise NotHermitian("matrix has non-finite entries")
    # scale by a power of two (exact) so that norms, and the squared norms
    # inside the reflections, neither underflow nor overflow
    biggest = float(np.max(np.abs(H)))
    shift = int(np.frexp(biggest)[1]) if biggest > 0 else 0
    H = _ldexp(H, -shift)
    defect = hermitian_defect(H)
    if defect > tol_herm * float(np.linalg.norm(H)):
        raise NotHermitian(f"max|H - H^dagger| = {np.ldexp(defect, shift):.3e} exceeds {tol_herm:g}*||H||")
    Hs = 0.5 * (H + H.conj().T)
    if np.iscomplexobj(Hs) and not np.any(Hs.imag):
        Hs = Hs.real

    d, off, Q = householder_tridiagonal(Hs, accumulate=vectors)
    e = np.zeros(n)
    e[: n - 1] = off
    zt = np.eye(n) if vectors else np.zeros((n, 0))
    sweeps = _tql_implicit(d, e, zt, SWEEPS_PER_DIM * n)
    if sweeps < 0:
        raise NoConvergence(f"QL iteration exceeded {SWEEPS_PER_DIM * n} sweeps (n={n})")
    d = np.ldexp(d, shift)

    order = np.argsort(d, kind="stable")
    w = d[order]
    if not vectors:
        return Spectrum(w, np.zeros((n, 0), dtype=np.complex128))
    V = (Q @ zt[order].T).astype(np.complex128, copy=False)
    return Spectrum(w, fix_phases(V))


def eigvalsh(H, tol_herm: float = TOL_HERM) -> np.ndarray:
    return eigh(H, tol_herm=tol_herm, vectors=False).eigenvalues
