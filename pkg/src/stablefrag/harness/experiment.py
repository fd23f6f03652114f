"""Monte Carlo pipelines producing ranked fragment masses, and the two-sample
convergence runner built on them.

Each pipeline maps (size, times, rng) to one RankedMasses per time:

* ``bernoulli-fragment``: conditioned tree, uniform weights, threshold 1 - (B_n/n) t.
* ``poisson-cut``: conditioned tree, each edge cut with probability 1 - exp(-t B_n/n).
* ``drift-ladder``: Vervaat transform of a lattice bridge, ladder masses of x - t s.
* ``brownian-excursion``: the same with an exact Brownian bridge (alpha = 2).
"""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from ..continuum import brownian_bridge, drift_ladder_masses, lattice_bridge, poisson_cut_process, vervaat
from ..fragmentation import RankedMasses, fragmentation_process
from ..gwtree import sample_conditioned_gw
from ..offspring import OffspringLaw, law_from_tag
from ..prim import uniform_weights
from .stats import ks_two_sample, size_biased_l1
from .streams import run_replicates, side_seeds

__all__ = [
    "PIPELINES",
    "ExperimentConfig",
    "TimeReport",
    "ComparisonReport",
    "run_pipeline",
    "run_convergence",
    "masses_record",
    "write_jsonl",
]

Pipeline = Callable[[OffspringLaw, int, np.ndarray, np.random.Generator], list[RankedMasses]]


def _bernoulli(law, n, times, rng):
    tree = sample_conditioned_gw(law, n, rng)
    w = uniform_weights(n, rng)
    return fragmentation_process(tree, w, law, times, check_distinct=False).states


def _poisson(law, n, times, rng):
    tree = sample_conditioned_gw(law, n, rng)
    return poisson_cut_process(tree, law, times, rng)


def _drift(law, m, times, rng):
    exc = vervaat(lattice_bridge(law, m, rng))
    return [drift_ladder_masses(exc, t) for t in times]


def _brownian(law, m, times, rng):
    exc = vervaat(brownian_bridge(m, rng))
    return [drift_ladder_masses(exc, t) for t in times]


PIPELINES: dict[str, Pipeline] = {
    "bernoulli-fragment": _bernoulli,
    "poisson-cut": _poisson,
    "drift-ladder": _drift,
    "brownian-excursion": _brownian,
}


@dataclass
class ExperimentConfig:
    """Two-sided experiment: side i runs ``pipelines[i]`` at ``sizes[i]``.

    A single entry in ``pipelines`` or ``sizes`` is used on both sides.  Sizes
    are tree sizes n for tree pipelines and grid resolutions m for the
    excursion pipelines.  Side seeds default to two streams spawned from
    ``seed``; setting ``side_seeds`` explicitly overrides them.
    """

    law: str = "geometric-half"
    sizes: list[int] = field(default_factory=lambda: [1000])
    times: list[float] = field(default_factory=lambda: [1.0])
    reps: int = 1000
    seed: int = 0
    pipelines: list[str] = field(default_factory=lambda: ["bernoulli-fragment"])
    threshold: float = 0.05
    side_seeds: list[int] | None = None
    threads: int | None = None
    out: str | None = None

    def __post_init__(self) -> None:
        if self.reps < 1:
            raise ValueError("replicate count must be >= 1")
        if any(t < 0 for t in self.times):
            raise ValueError("times must be >= 0")
        if not 1 <= len(self.pipelines) <= 2 or not 1 <= len(self.sizes) <= 2:
            raise ValueError("give one or two pipelines and one or two sizes")
        for p in self.pipelines:
            if p not in PIPELINES:
                raise ValueError(f"unknown pipeline {p!r}; choose from {sorted(PIPELINES)}")
        self.times = [float(t) for t in self.times]
        self.sizes = [int(s) for s in self.sizes]

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    def side(self, i: int) -> tuple[str, int]:
        return self.pipelines[min(i, len(self.pipelines) - 1)], self.sizes[min(i, len(self.sizes) - 1)]


@dataclass
class TimeReport:
    t: float
    ks_largest: float
    ks_second: float
    ks_count: float
    l1_size_biased: float
    passed: bool


@dataclass
class ComparisonReport:
    sides: list[dict]
    reps: int
    threshold: float
    times: list[TimeReport]
    runtime: float

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.times)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def run_pipeline(
    pipeline: str,
    law: OffspringLaw,
    size: int,
    times,
    reps: int,
    seed: int,
    threads: int | None = None,
) -> list[list[RankedMasses]]:
    """``reps`` replicates of a pipeline; result[r][i] is replicate r at times[i]."""
    fn = PIPELINES[pipeline]
    ts = np.asarray(times, dtype=float)
    return run_replicates(lambda r, rng: fn(law, size, ts, rng), reps, seed, threads)


def _stat(sample, i: int, f) -> np.ndarray:
    return np.array([f(rep[i]) for rep in sample])


def compare_samples(a, b, times, threshold: float) -> list[TimeReport]:
    out = []
    for i, t in enumerate(times):
        ks1 = ks_two_sample(_stat(a, i, lambda m: m.largest(0)), _stat(b, i, lambda m: m.largest(0)))
        ks2 = ks_two_sample(_stat(a, i, lambda m: m.largest(1)), _stat(b, i, lambda m: m.largest(1)))
        ksc = ks_two_sample(_stat(a, i, lambda m: m.count_above(0.01)), _stat(b, i, lambda m: m.count_above(0.01)))
        l1 = size_biased_l1([r[i].masses for r in a], [r[i].masses for r in b], seed=i)
        out.append(TimeReport(float(t), ks1, ks2, ksc, l1, ks1 < threshold))
    return out


def run_convergence(config: ExperimentConfig) -> ComparisonReport:
    """Run both sides on independent streams and compare fixed-time marginals."""
    start = time.perf_counter()
    law = law_from_tag(config.law)
    seeds = config.side_seeds or side_seeds(config.seed, 2)
    samples, sides = [], []
    for i in range(2):
        pipeline, size = config.side(i)
        samples.append(run_pipeline(pipeline, law, size, config.times, config.reps, seeds[i], config.threads))
        sides.append({"pipeline": pipeline, "size": size, "law": law.tag, "seed": int(seeds[i])})
    reports = compare_samples(samples[0], samples[1], config.times, config.threshold)
    return ComparisonReport(sides, config.reps, config.threshold, reports, time.perf_counter() - start)


def masses_record(rep: int, t: float, masses: RankedMasses) -> dict:
    return {"rep": rep, "t": t, "masses": masses.masses.tolist()}


def write_jsonl(path, results, times) -> None:
    """One line per (rep, t), replicates in order."""
    with open(path, "w", encoding="utf-8") as fh:
        for rep, states in enumerate(results):
            for t, m in zip(times, states):
                fh.write(json.dumps(masses_record(rep, float(t), m)) + "\n")
