"""Prim ordering of a weighted plane tree and the associated coding paths.

Edge weights are stored per vertex: ``weights[v]`` is the weight of the edge
joining v to its parent, and ``weights[0]`` is unused (kept at 0).  Only the
relative order of the weights matters for the Prim order; the threshold s
decides which edges survive in the fragmentation forest.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .gwtree import PlaneTree

__all__ = [
    "as_edge_weights",
    "uniform_weights",
    "PrimOrder",
    "PrimPath",
    "prim_order",
    "prim_path",
    "frag_prim_path",
    "children_counts_at",
    "modified_walk",
    "thinned_counts",
    "prim_exploration_reference",
]


def as_edge_weights(tree: PlaneTree, weights, check_distinct: bool = True) -> np.ndarray:
    """Normalise ``weights`` to a length-n float array indexed by child vertex.

    Accepts either n values (entry 0 ignored) or n-1 values for vertices 1..n-1.
    """
    w = np.asarray(weights, dtype=np.float64)
    n = tree.n
    if w.ndim != 1:
        raise ValueError("weights must be one-dimensional")
    if len(w) == n - 1:
        w = np.concatenate([[0.0], w])
    elif len(w) == n:
        w = w.copy()
        w[0] = 0.0
    else:
        raise ValueError(f"expected {n - 1} or {n} weights for a tree of size {n}, got {len(w)}")
    edge = w[1:]
    if np.any(~np.isfinite(edge)) or np.any((edge < 0.0) | (edge > 1.0)):
        raise ValueError("weights must lie in [0, 1]")
    if check_distinct and len(np.unique(edge)) != len(edge):
        raise ValueError("edge weights must be pairwise distinct")
    return w


def uniform_weights(n: int, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. uniform parent-edge weights for a tree of size n (entry 0 unused)."""
    w = rng.random(n)
    w[0] = 0.0
    return w


@dataclass(frozen=True)
class PrimOrder:
    """``order[k]`` is the k-th explored vertex; ``rank`` is the inverse map."""

    order: np.ndarray
    rank: np.ndarray

    def __len__(self) -> int:
        return len(self.order)


@dataclass(frozen=True)
class PrimPath:
    values: np.ndarray
    threshold: float = 1.0

    @property
    def n(self) -> int:
        return len(self.values) - 1

    def increments(self) -> np.ndarray:
        return np.diff(self.values)


def prim_order(tree: PlaneTree, weights, check_distinct: bool = True) -> PrimOrder:
    """Vertices in the order Prim's algorithm adds them, starting at the root."""
    w = as_edge_weights(tree, weights, check_distinct)
    order = _kernels.prim_order(tree.offsets, tree.kids, w)
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    return PrimOrder(order, rank)


def children_counts_at(tree: PlaneTree, weights, s: float) -> np.ndarray:
    """c_s(v): number of children of v joined by an edge of weight <= s."""
    w = np.asarray(weights, dtype=np.float64)
    if len(w) == tree.n - 1:
        w = np.concatenate([[0.0], w])
    kept = w[1:] <= s
    return np.bincount(tree.parent[1:][kept], minlength=tree.n).astype(np.int64)


def _walk(steps: np.ndarray) -> np.ndarray:
    out = np.zeros(len(steps) + 1, dtype=np.int64)
    np.cumsum(steps - 1, out=out[1:])
    return out


def prim_path(tree: PlaneTree, weights, order: PrimOrder | None = None) -> PrimPath:
    if order is None:
        order = prim_order(tree, weights)
    return PrimPath(_walk(tree.children[order.order]), 1.0)


def frag_prim_path(
    tree: PlaneTree, weights, s: float, order: PrimOrder | None = None
) -> PrimPath:
    """Prim path of the forest keeping edges of weight <= s.

    The Prim order does not depend on s, so it can be computed once and
    passed in when many thresholds are evaluated.
    """
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"threshold must lie in [0, 1], got {s}")
    if order is None:
        order = prim_order(tree, weights)
    counts = children_counts_at(tree, weights, s)
    return PrimPath(_walk(counts[order.order]), float(s))


def thinned_counts(xi, uniforms, t: float) -> np.ndarray:
    """xi_t(i): how many of the xi(i)+1 uniforms attached to step i are <= t."""
    xi = np.asarray(xi, dtype=np.int64)
    if len(uniforms) != len(xi):
        raise ValueError(f"{len(xi)} increments but {len(uniforms)} uniform rows")
    out = np.empty(len(xi), dtype=np.int64)
    for i, (x, row) in enumerate(zip(xi, uniforms)):
        if x < -1:
            raise ValueError("increments must be >= -1")
        row = np.asarray(row, dtype=np.float64)
        if row.shape != (x + 1,):
            raise ValueError(f"step {i}: need {x + 1} uniforms, got {row.size}")
        out[i] = int(np.count_nonzero(row <= t))
    return out


def modified_walk(xi, uniforms, t: float) -> np.ndarray:
    """X_t(0..n) with X_t(k) = sum_{i<=k} (xi_t(i) - 1).

    Each step i carries xi(i)+1 uniforms; a child survives when its uniform
    is <= t.  At t=1 this returns the walk with increments xi.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return _walk(thinned_counts(xi, uniforms, t))


def prim_exploration_reference(tree: PlaneTree, weights, s: float) -> tuple[np.ndarray, np.ndarray]:
    """Literal exploration of the forest at threshold s, for small trees.

    At each step the next vertex is the Prim-smallest unexplored neighbour of
    the explored set in the forest, or the Prim-smallest unexplored vertex if
    there is none.  Returns (order, Z) with Z(k) the number of forest
    neighbours of the first k explored vertices, Z(0) = Z(n+1) = 0.
    """
    n = tree.n
    if n > 2000:
        raise ValueError("reference exploration is quadratic; use frag_prim_path")
    w = as_edge_weights(tree, weights)
    rank = prim_order(tree, w).rank
    adj: list[set[int]] = [set() for _ in range(n)]
    for v in range(1, n):
        if w[v] <= s:
            p = int(tree.parent[v])
            adj[p].add(v)
            adj[v].add(p)
    by_rank = sorted(range(n), key=lambda v: rank[v])
    explored: set[int] = set()
    frontier: set[int] = set()
    order = []
    z = [0]
    for _ in range(n):
        if frontier:
            v = min(frontier, key=lambda u: rank[u])
        else:
            v = next(u for u in by_rank if u not in explored)
        order.append(v)
        explored.add(v)
        frontier.discard(v)
        frontier |= adj[v] - explored
        z.append(len(frontier))
    z.append(0)
    return np.array(order, dtype=np.int64), np.array(z, dtype=np.int64)
