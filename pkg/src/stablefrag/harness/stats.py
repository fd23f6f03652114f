"""Two-sample statistics used by the convergence experiments."""
from __future__ import annotations

import numpy as np
from scipy import stats

__all__ = ["ks_two_sample", "size_biased_sample", "size_biased_l1", "uniformity_pvalue"]


def ks_two_sample(a, b) -> float:
    """Sup distance between the empirical CDFs of ``a`` and ``b``."""
    x = np.sort(np.asarray(a, dtype=float))
    y = np.sort(np.asarray(b, dtype=float))
    if x.size == 0 or y.size == 0:
        raise ValueError("both samples must be nonempty")
    grid = np.concatenate([x, y])
    fx = np.searchsorted(x, grid, side="right") / x.size
    fy = np.searchsorted(y, grid, side="right") / y.size
    return float(np.max(np.abs(fx - fy)))


def size_biased_sample(masses_list, rng: np.random.Generator) -> np.ndarray:
    """One size-biased pick per mass vector: the mass of the fragment holding a
    uniform point."""
    out = np.empty(len(masses_list))
    for i, m in enumerate(masses_list):
        m = np.asarray(m, dtype=float)
        out[i] = m[rng.choice(len(m), p=m / m.sum())]
    return out


def size_biased_l1(sample_a, sample_b, seed: int = 0) -> float:
    """Wasserstein-1 distance between size-biased picks of two samples of
    ranked mass vectors; a secondary whole-vector diagnostic."""
    rng = np.random.default_rng(seed)
    a = size_biased_sample(sample_a, rng)
    b = size_biased_sample(sample_b, rng)
    return float(stats.wasserstein_distance(a, b))


def uniformity_pvalue(values, bins: int = 20) -> float:
    """Chi-square p-value for values on [0, 1] being uniform over ``bins`` cells."""
    counts, _ = np.histogram(np.asarray(values, dtype=float), bins=bins, range=(0.0, 1.0))
    return float(stats.chisquare(counts).pvalue)
