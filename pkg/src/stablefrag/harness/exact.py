"""Exhaustive enumeration oracles for small trees.

Only the relative order of the edge weights affects the Prim order, so the
weights are enumerated as rank permutations.  For the fragmented forest at
time t the number K of edges with weight <= t is Binomial(n-1, t) and, given
K, the kept edges are the K lowest-ranked ones, independently of the ranks.
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict

import numpy as np

from ..gwtree import PlaneTree, tree_from_children
from ..offspring import OffspringLaw
from ..prim import prim_order

__all__ = [
    "MAX_ENUM_N",
    "enumerate_excursions",
    "enumerate_conditioned_trees",
    "lex_path_law",
    "prim_path_law",
    "fragmented_counts_law",
    "modified_walk_law",
]

MAX_ENUM_N = 8


def _guard(n: int) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > MAX_ENUM_N:
        raise ValueError(f"exhaustive enumeration is limited to n <= {MAX_ENUM_N}, got {n}")


def enumerate_excursions(n: int) -> list[tuple[int, ...]]:
    """All child-count sequences of plane trees with n vertices (depth-first)."""
    _guard(n)
    out: list[tuple[int, ...]] = []

    def extend(prefix: list[int], height: int) -> None:
        k = len(prefix)
        if k == n:
            if height == -1:
                out.append(tuple(prefix))
            return
        if height < 0:
            return
        # the remaining n-k-1 steps can drop at most n-k-1 levels
        for c in range(0, n - k):
            h = height + c - 1
            if h > n - k - 2:
                break
            prefix.append(c)
            extend(prefix, h)
            prefix.pop()

    extend([], 0)
    return out


def enumerate_conditioned_trees(law: OffspringLaw, n: int) -> list[tuple[PlaneTree, float]]:
    """Every tree of size n with its probability prod mu(c(u)), normalised."""
    seqs = enumerate_excursions(n)
    weights = np.array([np.prod(law.pmf(np.array(c))) for c in seqs])
    total = weights.sum()
    if total <= 0:
        raise ValueError(f"law {law.tag} puts no mass on trees of size {n}")
    return [(tree_from_children(c), float(w / total)) for c, w in zip(seqs, weights) if w > 0]


def lex_path_law(law: OffspringLaw, n: int) -> dict[tuple[int, ...], float]:
    """Exact law of the depth-first child-count sequence (equivalently W^lex)."""
    return {tuple(t.children.tolist()): p for t, p in enumerate_conditioned_trees(law, n)}


def _rank_orders(tree: PlaneTree):
    """Yield (weights, order) for each of the (n-1)! equally likely rank patterns."""
    n = tree.n
    for perm in itertools.permutations(range(1, n)):
        w = np.concatenate([[0.0], np.array(perm, dtype=float) / n])
        yield w, prim_order(tree, w).order


def prim_path_law(law: OffspringLaw, n: int) -> dict[tuple[int, ...], float]:
    """Exact law of the child counts read in Prim order (equivalently W^prim)."""
    law_out: dict[tuple[int, ...], float] = defaultdict(float)
    share = 1.0 / math.factorial(n - 1)
    for tree, p in enumerate_conditioned_trees(law, n):
        for _, order in _rank_orders(tree):
            law_out[tuple(tree.children[order].tolist())] += p * share
    return dict(law_out)


def _binom_pmf(k: int, m: int, t: float) -> float:
    return math.comb(m, k) * float(t) ** k * (1.0 - float(t)) ** (m - k)


def fragmented_counts_law(law: OffspringLaw, n: int, t: float) -> dict[tuple[int, ...], float]:
    """Exact law of (c_t(v(0)), ..., c_t(v(n-1))) along the Prim order."""
    law_out: dict[tuple[int, ...], float] = defaultdict(float)
    share = 1.0 / math.factorial(n - 1)
    for tree, p in enumerate_conditioned_trees(law, n):
        parents = tree.parent[1:]
        for w, order in _rank_orders(tree):
            edge_rank = np.argsort(np.argsort(w[1:]))
            for k in range(n):
                kept = edge_rank < k
                q = p * share * _binom_pmf(k, n - 1, t)
                if q > 0:
                    counts = np.bincount(parents[kept], minlength=n)
                    law_out[tuple(counts[order].tolist())] += q
    return dict(law_out)


def modified_walk_law(law: OffspringLaw, n: int, t: float) -> dict[tuple[int, ...], float]:
    """Exact law of (xi_t(1), ..., xi_t(n)) given that the walk first hits -1 at n.

    Steps xi(k) = c - 1 have probability mu(c); each of the xi(k)+1 marks
    survives independently with probability t.
    """
    law_out: dict[tuple[int, ...], float] = defaultdict(float)
    walks = enumerate_excursions(n)
    probs = np.array([np.prod(law.pmf(np.array(c))) for c in walks])
    probs /= probs.sum()
    for c, p in zip(walks, probs.tolist()):
        for kept in itertools.product(*[range(ci + 1) for ci in c]):
            q = p
            for ci, ki in zip(c, kept):
                q *= _binom_pmf(ki, ci, t)
            if q > 0:
                law_out[tuple(kept)] += q
    return dict(law_out)
