"""Conditioned Galton-Watson trees and their Lukasiewicz paths.

Trees are flat arrays in depth-first (lexicographic) order: vertex 0 is the
root, ``children[v]`` is c(v) and ``parent[v] < v`` for every non-root vertex.
A Lukasiewicz path is the integer vector W(0..n) with W(0) = 0 and
W(k+1) = W(k) + c(k) - 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .offspring import OffspringLaw, sample_tail

__all__ = [
    "PlaneTree",
    "ConditioningError",
    "tree_from_children",
    "tree_from_lukasiewicz",
    "lukasiewicz_of",
    "check_lukasiewicz",
    "cycle_rotate",
    "conditioned_counts",
    "sample_conditioned_gw",
]

# Counts >= HEAD_CUT are drawn individually from the tail of the law.
HEAD_CUT = 64
MAX_BATCH = 1 << 14


class ConditioningError(RuntimeError):
    """Rejection sampling gave up before hitting the conditioning event."""


@dataclass(frozen=True, eq=False)
class PlaneTree:
    children: np.ndarray
    parent: np.ndarray

    def __post_init__(self) -> None:
        self.children.setflags(write=False)
        self.parent.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.children)

    @cached_property
    def offsets(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum(self.children)]).astype(np.int64)

    @cached_property
    def kids(self) -> np.ndarray:
        """Children of every vertex, grouped by parent, siblings left to right."""
        return (np.argsort(self.parent[1:], kind="stable") + 1).astype(np.int64)

    def children_of(self, v: int) -> np.ndarray:
        return self.kids[self.offsets[v] : self.offsets[v + 1]]

    def edges(self) -> list[tuple[int, int]]:
        return [(int(self.parent[v]), v) for v in range(1, self.n)]

    def __eq__(self, other) -> bool:
        return isinstance(other, PlaneTree) and np.array_equal(self.children, other.children)

    def __hash__(self) -> int:
        return hash(self.children.tobytes())

    def __repr__(self) -> str:
        return f"PlaneTree(n={self.n}, children={self.children.tolist() if self.n <= 20 else '...'})"


def check_lukasiewicz(path) -> np.ndarray:
    w = np.asarray(path, dtype=np.int64)
    if w.ndim != 1 or len(w) < 2:
        raise ValueError("a Lukasiewicz path needs at least two values")
    if w[0] != 0:
        raise ValueError("path must start at 0")
    if w[-1] != -1:
        raise ValueError(f"path must end at -1, ends at {w[-1]}")
    if np.any(np.diff(w) < -1):
        raise ValueError("increments must be >= -1")
    if np.any(w[:-1] < 0):
        raise ValueError("path goes negative before its last step")
    return w


def tree_from_children(children) -> PlaneTree:
    c = np.asarray(children, dtype=np.int64)
    check_lukasiewicz(np.concatenate([[0], np.cumsum(c - 1)]))
    return PlaneTree(c.copy(), _kernels.decode_parents(c))


def tree_from_lukasiewicz(path) -> PlaneTree:
    w = check_lukasiewicz(path)
    c = np.diff(w) + 1
    return PlaneTree(c, _kernels.decode_parents(c))


def lukasiewicz_of(tree: PlaneTree) -> np.ndarray:
    return np.concatenate([[0], np.cumsum(tree.children - 1)]).astype(np.int64)


def cycle_rotate(counts) -> np.ndarray:
    """Rotate a count vector with sum n-1 into a valid Lukasiewicz excursion.

    The rotation starts right after the first global minimum of the partial
    sums of (c_i - 1); by the cycle lemma it is the only valid one.
    """
    c = np.asarray(counts, dtype=np.int64)
    n = len(c)
    if c.sum() != n - 1:
        raise ValueError(f"counts sum to {c.sum()}, need {n - 1}")
    start = (int(np.argmin(np.cumsum(c - 1))) + 1) % n
    return np.roll(c, -start)


def conditioned_counts(
    law: OffspringLaw,
    n: int,
    rng: np.random.Generator,
    max_attempts: int = 10**6,
) -> tuple[np.ndarray, int]:
    """n i.i.d. draws from ``law`` conditioned on summing to n-1.

    Only the histogram of a sample decides acceptance, so each attempt draws a
    multinomial histogram over small values plus individual tail draws; the
    accepted histogram is expanded and uniformly shuffled, which reproduces the
    conditional law of the i.i.d. sequence.  Returns (counts, attempts).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if (n - 1) % law.span:
        raise ValueError(f"no tree of size {n}: support of {law.tag} has span {law.span}")
    target = n - 1
    cut = law.table_size if law.kind != "stable-tail" else HEAD_CUT
    pvals = law.head_split(cut)
    cut = len(pvals) - 1
    values = np.arange(cut, dtype=np.int64)
    has_tail = pvals[-1] > 0
    attempts = 0
    batch = 16
    while attempts < max_attempts:
        b = min(batch, max_attempts - attempts)
        hist = rng.multinomial(n, pvals, size=b)
        sums = hist[:, :cut] @ values
        tail_values = None
        if has_tail:
            n_tail = hist[:, cut]
            tail_values = sample_tail(law, cut, int(n_tail.sum()), rng)
            rows = np.repeat(np.arange(b), n_tail)
            sums = sums + np.rint(np.bincount(rows, weights=tail_values, minlength=b)).astype(np.int64)
        hits = np.flatnonzero(sums == target)
        if hits.size:
            row = int(hits[0])
            attempts += row + 1
            counts = np.repeat(values, hist[row, :cut])
            if has_tail and hist[row, cut]:
                counts = np.concatenate([counts, tail_values[rows == row]])
            return rng.permutation(counts), attempts
        attempts += b
        batch = min(2 * batch, MAX_BATCH)
    raise ConditioningError(
        f"conditioning too rare: law={law.tag} n={n} gave no hit in {attempts} attempts"
    )


def sample_conditioned_gw(
    law: OffspringLaw,
    n: int,
    rng: np.random.Generator,
    max_attempts: int = 10**6,
) -> PlaneTree:
    """A Galton-Watson tree with offspring law ``law`` conditioned on n vertices."""
    counts, _ = conditioned_counts(law, n, rng, max_attempts)
    c = cycle_rotate(counts)
    return PlaneTree(c, _kernels.decode_parents(c))
