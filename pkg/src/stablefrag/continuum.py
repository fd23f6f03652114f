"""Grid approximations of bridges, excursions and their drifted ladder masses,
plus Poisson cutting of a conditioned tree.

A GridPath holds values x(j) at j/m for j = 0..m.  Ladder masses of the
drifted excursion y(j) = x(j) - t j/m are gaps between strict running-minimum
records divided by m, so they always partition the grid.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .fragmentation import RankedMasses, ranked_masses, strict_record_epochs
from .gwtree import PlaneTree, conditioned_counts
from .offspring import OffspringLaw, bn

__all__ = [
    "GridPath",
    "brownian_bridge",
    "lattice_bridge",
    "vervaat",
    "drift_records",
    "drift_ladder_masses",
    "poisson_cut_clocks",
    "poisson_cut_masses",
    "poisson_cut_process",
]

KINDS = ("bridge", "excursion", "drifted")


@dataclass(frozen=True)
class GridPath:
    values: np.ndarray
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown path kind {self.kind!r}")
        if len(self.values) < 2:
            raise ValueError("a grid path needs at least two points")
        self.values.setflags(write=False)

    @property
    def m(self) -> int:
        return len(self.values) - 1

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.m + 1) / self.m


def brownian_bridge(m: int, rng: np.random.Generator) -> GridPath:
    """Exact Brownian bridge at the points j/m."""
    if m < 2:
        raise ValueError("m must be >= 2")
    x = np.zeros(m + 1)
    np.cumsum(rng.standard_normal(m) * np.sqrt(1.0 / m), out=x[1:])
    x -= np.arange(m + 1) / m * x[-1]
    x[-1] = 0.0
    return GridPath(x, "bridge")


def lattice_bridge(
    law: OffspringLaw,
    m: int,
    rng: np.random.Generator,
    adjust: bool = True,
    max_attempts: int = 10**6,
) -> GridPath:
    """Walk with i.i.d. steps c-1 (c ~ law) conditioned to end at -1, over B_m.

    With ``adjust`` the linear drift (j/m)/B_m is added so the endpoint is 0.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    counts, _ = conditioned_counts(law, m, rng, max_attempts)
    b = bn(law, m)
    x = np.zeros(m + 1)
    np.cumsum(counts - 1, out=x[1:])
    x /= b
    if adjust:
        x += np.arange(m + 1) / m / b
        x[-1] = 0.0
    return GridPath(x, "bridge")


def vervaat(bridge: GridPath) -> GridPath:
    """Rotate the bridge to start at its first global minimum and lift it to 0."""
    if bridge.kind != "bridge":
        raise ValueError("vervaat expects a bridge")
    x = bridge.values
    m = bridge.m
    j = int(np.argmin(x[:m]))
    low = x[j]
    e = np.empty(m + 1)
    e[: m - j] = x[j:m]
    e[m - j : m] = x[:j]
    e -= low
    e[0] = 0.0
    e[m] = 0.0
    return GridPath(e, "excursion")


def _drifted(excursion: GridPath, t: float) -> np.ndarray:
    if excursion.kind != "excursion":
        raise ValueError("expected an excursion")
    if t < 0:
        raise ValueError("t must be >= 0")
    return excursion.values - t * excursion.grid


def drift_records(excursion: GridPath, t: float) -> np.ndarray:
    """Strict running-minimum epochs of x(j) - t j/m, always ending at m."""
    return strict_record_epochs(_drifted(excursion, t))


def drift_ladder_masses(excursion: GridPath, t: float) -> RankedMasses:
    rec = drift_records(excursion, t)
    return ranked_masses(np.diff(rec, prepend=0), excursion.m)


def poisson_cut_clocks(tree: PlaneTree, rng: np.random.Generator) -> np.ndarray:
    """Exponential cut times per parent edge (entry 0 unused).

    An edge is cut by time t when its clock is below t B_n/n, which happens
    with probability 1 - exp(-t B_n/n); reusing the clocks nests the cuts.
    """
    clocks = rng.standard_exponential(tree.n)
    clocks[0] = np.inf
    return clocks


def _cut_masses(tree: PlaneTree, clocks: np.ndarray, rate: float) -> RankedMasses:
    kept = clocks >= rate
    sizes = _kernels.subtree_component_sizes(tree.parent, kept)
    return ranked_masses(sizes, tree.n)


def poisson_cut_masses(
    tree: PlaneTree, law: OffspringLaw, t: float, rng: np.random.Generator
) -> RankedMasses:
    if t < 0:
        raise ValueError("t must be >= 0")
    return _cut_masses(tree, poisson_cut_clocks(tree, rng), t * bn(law, tree.n) / tree.n)


def poisson_cut_process(
    tree: PlaneTree, law: OffspringLaw, times, rng: np.random.Generator
) -> list[RankedMasses]:
    """Masses at each time from one set of clocks, so fragments refine in t."""
    ts = np.asarray(times, dtype=np.float64)
    if np.any(ts < 0):
        raise ValueError("times must be >= 0")
    clocks = poisson_cut_clocks(tree, rng)
    scale = bn(law, tree.n) / tree.n
    return [_cut_masses(tree, clocks, t * scale) for t in ts]
