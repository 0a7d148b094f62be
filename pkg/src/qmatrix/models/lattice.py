"""Tight-binding chain in a static field (Wannier-Stark ladder)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidCutoff


@dataclass(frozen=True)
class TightBindingParams:
    """Sites ``nmin..nmax`` with period ``d``, force ``F``, bandwidth ``delta``.

    ``hopping_sign=+1`` puts ``+delta/4`` on the off-diagonals; ``-1`` gives
    the ``-delta/4`` form.  The spectrum does not depend on the choice.
    """

    nmin: int = -60
    nmax: int = 60
    d: float = 2 * np.pi
    force: float = 0.005
    delta: float = 1.0
    epsilon: float = 0.0
    hopping_sign: int = 1

    def __post_init__(self):
        if not self.nmin < self.nmax:
            raise InvalidCutoff(f"need nmin < nmax, got {self.nmin}..{self.nmax}")
        if self.hopping_sign not in (1, -1):
            raise ValueError(f"hopping_sign must be +1 or -1, got {self.hopping_sign}")

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.nmin, self.nmax + 1)

    @property
    def n_sites(self) -> int:
        return self.nmax - self.nmin + 1

    @property
    def bloch_period(self) -> float:
        if self.force == 0:
            return float("inf")
        return 2 * np.pi / abs(self.d * self.force)


def tight_binding_hamiltonian(p: TightBindingParams, force: float | None = None) -> np.ndarray:
    """Tridiagonal Hamiltonian; ``force`` overrides ``p.force`` (used for field flips)."""
    F = p.force if force is None else force
    n = p.sites
    hop = p.hopping_sign * p.delta / 4 * np.ones(n.size - 1)
    H = np.diag(p.epsilon + p.d * F * n) + np.diag(hop, 1) + np.diag(hop, -1)
    return H.astype(np.complex128)
