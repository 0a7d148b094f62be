"""Rigid rotor Hamiltonians and their closed-form reference levels."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyInput
from ..operators import twice_j, angular_momentum, body_fixed


@dataclass(frozen=True)
class RotorParams:
    j: float = 2
    ix: float = 1 / 3
    iy: float = 1 / 2
    iz: float = 1.0

    def __post_init__(self):
        twice_j(self.j)
        if min(self.ix, self.iy, self.iz) <= 0:
            raise ValueError(f"moments of inertia must be positive: {self.ix, self.iy, self.iz}")


def rotor_hamiltonian(p: RotorParams, frame: str = "body") -> np.ndarray:
    """``Jx^2/2Ix + Jy^2/2Iy + Jz^2/2Iz`` with body-fixed (default) or space-fixed J."""
    ang = angular_momentum(p.j)
    if frame == "body":
        ang = body_fixed(ang)
    elif frame != "space":
        raise ValueError(f"frame must be 'body' or 'space', got {frame!r}")
    H = (ang.jx @ ang.jx / (2 * p.ix)
         + ang.jy @ ang.jy / (2 * p.iy)
         + ang.jz @ ang.jz / (2 * p.iz))
    return 0.5 * (H + H.conj().T)


def symmetric_top_levels(j, ix: float, iz: float) -> np.ndarray:
    """``j(j+1)/2Ix + (1/2Iz - 1/2Ix) k^2`` for ``k = -j..j``, ascending."""
    two_j = twice_j(j)
    jj = two_j / 2
    k = np.arange(two_j + 1) - jj
    return np.sort(jj * (jj + 1) / (2 * ix) + (1 / (2 * iz) - 1 / (2 * ix)) * k**2)


def asymmetric_top_j2_levels(ix: float, iy: float, iz: float) -> np.ndarray:
    """The five j=2 asymmetric-top energies in closed form, ascending."""
    a, b, c = 1 / ix, 1 / iy, 1 / iz
    e1 = 2 * c + a / 2 + b / 2
    e2 = 2 * b + c / 2 + a / 2
    e3 = 2 * a + b / 2 + c / 2
    s = a + b + c
    # s^2 - 3(ab+bc+ca) = ((a-b)^2 + (b-c)^2 + (c-a)^2) / 2 >= 0
    root = np.sqrt(((a - b) ** 2 + (b - c) ** 2 + (c - a) ** 2) / 2)
    return np.sort(np.array([e1, e2, e3, s + root, s - root]))


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def mode_bin(self) -> tuple[float, float]:
        k = int(np.argmax(self.counts))
        return float(self.edges[k]), float(self.edges[k + 1])


def level_density_histogram(eigenvalues, scale: float = 1.0, bins: int = 50) -> Histogram:
    """Counts of ``eigenvalues/scale`` in ``bins`` uniform bins over the data range."""
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    vals = np.asarray(eigenvalues, dtype=float).ravel()
    if vals.size == 0:
        raise EmptyInput("no eigenvalues to histogram")
    counts, edges = np.histogram(vals / scale, bins=bins)
    return Histogram(edges, counts)

