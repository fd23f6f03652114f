"""Fragment sizes from fragmented Prim paths, a union-find oracle, and the
rescaled fragmentation process of a conditioned tree.

Component sizes are read off a path as gaps between strict running-minimum
records: epochs k >= 1 with W(k) < min_{m<k} W(m).  A path that returns to its
running minimum without going below it has not finished a component.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .gwtree import PlaneTree
from .offspring import OffspringLaw, bn
from .prim import PrimOrder, PrimPath, as_edge_weights, frag_prim_path, prim_order

__all__ = [
    "RankedMasses",
    "strict_record_epochs",
    "ladder_components",
    "ranked_masses",
    "UnionFind",
    "components_oracle",
    "component_labels",
    "refines",
    "FragmentationTrajectory",
    "threshold_at",
    "fragmentation_process",
]


@dataclass(frozen=True)
class RankedMasses:
    """Fragment sizes (non-increasing integers) over a common total.

    Keeping integer sizes makes mass conservation an exact statement.
    """

    sizes: np.ndarray
    total: int

    def __post_init__(self) -> None:
        s = np.asarray(self.sizes, dtype=np.int64)
        if np.any(s <= 0):
            raise ValueError("fragment sizes must be positive")
        if np.any(np.diff(s) > 0):
            raise ValueError("sizes must be non-increasing")
        if int(s.sum()) > self.total:
            raise ValueError("sizes exceed the total mass")
        s.setflags(write=False)
        object.__setattr__(self, "sizes", s)

    @property
    def masses(self) -> np.ndarray:
        return self.sizes / self.total

    def exact(self) -> list[Fraction]:
        return [Fraction(int(k), self.total) for k in self.sizes]

    @property
    def conserved(self) -> bool:
        return int(self.sizes.sum()) == self.total

    def largest(self, i: int = 0) -> float:
        return float(self.sizes[i]) / self.total if i < len(self.sizes) else 0.0

    def count_above(self, x: float) -> int:
        return int(np.count_nonzero(self.masses > x))

    def __len__(self) -> int:
        return len(self.sizes)


def strict_record_epochs(values, include_end: bool = True) -> np.ndarray:
    """Indices k >= 1 where ``values[k]`` is strictly below all earlier values.

    With ``include_end`` the last index is always reported, so the gaps
    partition {1, ..., len(values)-1}.
    """
    x = np.asarray(values)
    if len(x) < 2:
        return np.zeros(0, dtype=np.int64)
    prior_min = np.minimum.accumulate(x[:-1])
    rec = np.flatnonzero(x[1:] < prior_min) + 1
    if include_end and (len(rec) == 0 or rec[-1] != len(x) - 1):
        rec = np.append(rec, len(x) - 1)
    return rec.astype(np.int64)


def ladder_components(path) -> np.ndarray:
    """Component sizes in exploration order, as gaps between strict records."""
    values = path.values if isinstance(path, PrimPath) else path
    rec = strict_record_epochs(values)
    return np.diff(rec, prepend=0)


def ranked_masses(sizes, n: int) -> RankedMasses:
    s = np.asarray(sizes, dtype=np.int64)
    if int(s.sum()) != n:
        raise ValueError(f"sizes sum to {int(s.sum())}, expected {n}")
    return RankedMasses(np.sort(s)[::-1], n)


class UnionFind:
    """Disjoint sets with path halving and union by size."""

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]

    def sizes(self) -> list[int]:
        return [self.size[v] for v in range(len(self.parent)) if self.parent[v] == v]


def _forest(tree: PlaneTree, weights, s: float) -> UnionFind:
    w = as_edge_weights(tree, weights, check_distinct=False)
    uf = UnionFind(tree.n)
    for v in range(1, tree.n):
        if w[v] <= s:
            uf.union(int(tree.parent[v]), v)
    return uf


def components_oracle(tree: PlaneTree, weights, s: float) -> Counter:
    """Multiset of component sizes of the forest keeping edges of weight <= s."""
    return Counter(_forest(tree, weights, s).sizes())


def component_labels(tree: PlaneTree, weights, s: float) -> np.ndarray:
    uf = _forest(tree, weights, s)
    return np.array([uf.find(v) for v in range(tree.n)], dtype=np.int64)


def refines(fine, coarse) -> bool:
    """True when every block of ``fine`` lies inside a single block of ``coarse``."""
    seen: dict[int, int] = {}
    for f, c in zip(np.asarray(fine).tolist(), np.asarray(coarse).tolist()):
        if seen.setdefault(f, c) != c:
            return False
    return True


def threshold_at(n: int, b_n: float, t: float) -> float:
    """s_n(t) = 1 - (B_n/n) t, clipped at 0."""
    return max(0.0, 1.0 - (b_n / n) * t)


@dataclass
class FragmentationTrajectory:
    times: np.ndarray
    states: list[RankedMasses]
    n: int
    law: str
    b_n: float
    seed: int | None = None
    thresholds: np.ndarray = field(default=None, repr=False)

    def largest(self) -> np.ndarray:
        return np.array([m.largest() for m in self.states])


def fragmentation_process(
    tree: PlaneTree,
    weights,
    law: OffspringLaw,
    times,
    order: PrimOrder | None = None,
    seed: int | None = None,
    check_distinct: bool = True,
) -> FragmentationTrajectory:
    """Ranked fragment masses of the tree at each rescaled time t.

    The forest at time t keeps edges of weight <= 1 - (B_n/n) t; beyond
    t = n/B_n every vertex is alone.
    """
    ts = np.asarray(times, dtype=np.float64)
    if np.any(ts < 0) or np.any(np.diff(ts) < 0):
        raise ValueError("times must be non-negative and sorted")
    n = tree.n
    b_n = bn(law, n)
    w = as_edge_weights(tree, weights, check_distinct)
    if order is None:
        order = prim_order(tree, w, check_distinct=False)
    states, thresholds = [], []
    for t in ts:
        s = threshold_at(n, b_n, t)
        thresholds.append(s)
        if t > n / b_n:
            states.append(RankedMasses(np.ones(n, dtype=np.int64), n))
            continue
        sizes = ladder_components(frag_prim_path(tree, w, s, order))
        states.append(ranked_masses(sizes, n))
    return FragmentationTrajectory(ts, states, n, law.tag, b_n, seed, np.array(thresholds))
