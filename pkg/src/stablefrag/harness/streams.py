"""Deterministic per-replicate random streams and a threaded replicate runner."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

import numpy as np

__all__ = ["replicate_rng", "side_seeds", "resolve_threads", "run_replicates"]

T = TypeVar("T")


def replicate_rng(seed: int, rep: int) -> np.random.Generator:
    """Generator for replicate ``rep``; depends only on (seed, rep)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(rep,)))


def side_seeds(seed: int, k: int = 2) -> list[int]:
    """k independent 64-bit seeds derived from ``seed`` (one per pipeline)."""
    children = np.random.SeedSequence(seed).spawn(k)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("FRAG_THREADS", "1"))
    if threads < 1:
        raise ValueError("thread count must be >= 1")
    return threads


def run_replicates(
    fn: Callable[[int, np.random.Generator], T],
    reps: int,
    seed: int,
    threads: int | None = None,
) -> list[T]:
    """Evaluate fn(rep, rng) for rep = 0..reps-1; results are in replicate order
    whatever the thread count."""
    if reps < 1:
        raise ValueError("replicate count must be >= 1")
    threads = resolve_threads(threads)
    job = lambda r: fn(r, replicate_rng(seed, r))  # noqa: E731
    if threads == 1:
        return [job(r) for r in range(reps)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(job, range(reps)))
