"""Elementary operator matrices and their tensor-product lifts.

Convention: ``ladder(N)`` covers Fock states ``|0>..|N>`` and therefore
returns ``(N+1) x (N+1)`` matrices.  Angular momentum bases are ordered
``m = -j, ..., +j``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .errors import BadModeIndex, DimensionMismatch, InvalidCutoff, InvalidJ, InvalidScale
from .linalg import kron_sparse, sparse_identity


@dataclass(frozen=True)
class LadderSet:
    cutoff: int
    a: np.ndarray
    a_dag: np.ndarray
    number: np.ndarray

    @property
    def dim(self) -> int:
        return self.cutoff + 1


@dataclass(frozen=True)
class QuadratureSet:
    scale: float
    x: np.ndarray
    p: np.ndarray


@dataclass(frozen=True)
class AngularMomentumSet:
    """Angular momentum matrices for total angular momentum ``two_j / 2``.

    ``body_frame`` sets flip the sign of ``jy`` (and hence swap the roles of
    the raising and lowering matrices) so that ``[Jx, Jy] = -i Jz``.
    """

    two_j: int
    j_plus: np.ndarray
    j_minus: np.ndarray
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray
    body_frame: bool = False

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def dim(self) -> int:
        return self.two_j + 1


@dataclass(frozen=True)
class ModeSpace:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise DimensionMismatch(f"mode dimensions must be positive, got {self.dims}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def uniform(cls, dim: int, modes: int) -> "ModeSpace":
        return cls((dim,) * modes)

    @property
    def n_modes(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    def basis_occupations(self) -> np.ndarray:
        """Occupation tuple of every product-basis state, first mode slowest."""
        grids = np.indices(self.dims).reshape(self.n_modes, -1)
        return grids.T


def _check_cutoff(N) -> int:
    if int(N) != N or N < 1:
        raise InvalidCutoff(f"cutoff must be a positive integer, got {N!r}")
    return int(N)


def annihilation(N: int, sparse: bool = False):
    """Annihilation matrix on ``|0>..|N>``: ``sqrt(1..N)`` on the superdiagonal."""
    N = _check_cutoff(N)
    a = np.diag(np.sqrt(np.arange(1, N + 1)), 1).astype(np.complex128)
    return sp.csr_array(a) if sparse else a


def ladder(N: int) -> LadderSet:
    a = annihilation(N)
    a_dag = a.conj().T.copy()
    return LadderSet(int(N), a, a_dag, a_dag @ a)


def quadratures(N: int, s: float = 1.0) -> QuadratureSet:
    """Position and momentum matrices ``x = s(a^+ + a)/sqrt2``, ``p = i(a^+ - a)/(s sqrt2)``."""
    if not s > 0:
        raise InvalidScale(f"scale must be positive, got {s!r}")
    lad = ladder(N)
    x = (s / np.sqrt(2)) * (lad.a_dag + lad.a)
    p = (1j / (s * np.sqrt(2))) * (lad.a_dag - lad.a)
    return QuadratureSet(float(s), x, p)


def twice_j(j) -> int:
    try:
        twice = Fraction(j) * 2
    except (TypeError, ValueError) as exc:
        raise InvalidJ(f"cannot interpret j={j!r}") from exc
    if twice.denominator != 1 or twice < 0:
        raise InvalidJ(f"j must be a nonnegative integer or half-integer, got {j!r}")
    return int(twice)


def angular_momentum(j) -> AngularMomentumSet:
    """Space-fixed angular momentum matrices in the ``|j, m>`` basis, m ascending."""
    two_j = twice_j(j)
    jj = two_j / 2
    m = np.arange(two_j + 1) - jj
    # J+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>, i.e. the subdiagonal here
    jp = np.diag(np.sqrt(jj * (jj + 1) - m[:-1] * (m[:-1] + 1)), -1).astype(np.complex128)
    jm = jp.conj().T.copy()
    jx = (jm + jp) / 2
    jy = 1j * (jm - jp) / 2
    jz = (jp @ jm - jm @ jp) / 2
    return AngularMomentumSet(two_j, jp, jm, jx, jy, jz)


def body_fixed(ang: AngularMomentumSet) -> AngularMomentumSet:
    """Same set with ``Jy`` negated: ``[Jx, Jy] = -i Jz``."""
    return replace(
        ang,
        jy=-ang.jy,
        j_plus=ang.j_minus,
        j_minus=ang.j_plus,
        body_frame=not ang.body_frame,
    )


def _factors(op, mode: int, space: ModeSpace, sparse: bool):
    if not 1 <= mode <= space.n_modes:
        raise BadModeIndex(f"mode {mode} outside 1..{space.n_modes}")
    d = space.dims[mode - 1]
    if op.shape != (d, d):
        raise DimensionMismatch(f"operator of shape {op.shape} does not fit mode {mode} of dim {d}")
    if sparse:
        eyes = [sparse_identity(k) for k in space.dims]
        eyes[mode - 1] = sp.csr_array(op, dtype=np.complex128)
    else:
        eyes = [np.eye(k, dtype=np.complex128) for k in space.dims]
        eyes[mode - 1] = np.asarray(op, dtype=np.complex128)
    return eyes


def lift(op, mode: int, space: ModeSpace) -> np.ndarray:
    """``I x ... x op x ... x I`` with ``op`` in slot ``mode`` (1-based)."""
    if sp.issparse(op):
        op = op.toarray()
    return reduce(np.kron, _factors(op, mode, space, sparse=False))


def lift_sparse(op, mode: int, space: ModeSpace) -> sp.csr_array:
    return reduce(kron_sparse, _factors(op, mode, space, sparse=True))


def mode_annihilators(space: ModeSpace, sparse: bool = False) -> list:
    """Lifted annihilation operators, one per mode."""
    out = []
    for k, d in enumerate(space.dims, start=1):
        if d < 2:
            raise InvalidCutoff(f"mode {k} has dimension {d}; need at least 2")
        a = annihilation(d - 1, sparse=sparse)
        out.append(lift_sparse(a, k, space) if sparse else lift(a, k, space))
    return out


def total_number(space: ModeSpace, ladders: Sequence[LadderSet] | None = None, sparse: bool = False):
    """Sum of the lifted number operators; diagonal in the product basis."""
    if ladders is None:
        ladders = [ladder(d - 1) for d in space.dims]
    if len(ladders) != space.n_modes:
        raise DimensionMismatch(f"{len(ladders)} ladder sets for {space.n_modes} modes")
    terms = []
    for k, lad in enumerate(ladders, start=1):
        if lad.dim != space.dims[k - 1]:
            raise DimensionMismatch(f"ladder of dim {lad.dim} does not fit mode {k}")
        terms.append(lift_sparse(lad.number, k, space) if sparse else lift(lad.number, k, space))
    return reduce(lambda x, y: x + y, terms)
