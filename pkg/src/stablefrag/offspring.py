"""Critical offspring laws in a stable domain of attraction.

Four families are supported:

* ``geometric-half``: mu(k) = 2^-(k+1), variance 2.
* ``poisson-one``: mu(k) = e^-1 / k!, variance 1.
* ``stable-tail:<alpha>``: mu(k) = k^(-1-alpha) / zeta(alpha) for k >= 1 and
  mu(0) = 1 - zeta(1+alpha)/zeta(alpha); infinite variance, index alpha.
* ``finite-table``: an explicit probability vector.

Sampling is by inverse CDF on the survival function, which keeps precision
in the far tail.  The stable family uses a precomputed survival table plus the
Hurwitz-zeta tail beyond it.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache, reduce

import numpy as np
from scipy import special

__all__ = [
    "OffspringLaw",
    "make_geometric_half",
    "make_poisson_one",
    "make_stable_tail",
    "make_finite_table",
    "law_from_tag",
    "sample_offspring",
    "sample_offspring_array",
    "inverse_cdf",
    "sample_tail",
    "bn",
]

STABLE_TABLE_SIZE = 1 << 20


@dataclass(frozen=True)
class OffspringLaw:
    """A critical offspring distribution.

    ``survival[k]`` holds P(Y >= k) for k = 0..len(survival)-1.  For laws with
    finite support the last entry is 0; for the stable family the last entry
    is the (positive) mass beyond the table, handled analytically.
    """

    kind: str
    alpha: float
    variance: float
    tail_constant: float | None
    survival: np.ndarray = field(repr=False)
    span: int = 1

    def __post_init__(self) -> None:
        self.survival.setflags(write=False)

    @property
    def tag(self) -> str:
        if self.kind == "stable-tail":
            return f"stable-tail:{self.alpha:g}"
        if self.kind == "finite-table":
            return "table:" + json.dumps([float(p) for p in self.pmf_table()])
        return self.kind

    @property
    def finite_variance(self) -> bool:
        return math.isfinite(self.variance)

    @property
    def aperiodic(self) -> bool:
        return self.span == 1

    @property
    def table_size(self) -> int:
        return len(self.survival) - 1

    def sf(self, k):
        """P(Y >= k), vectorised over integer ``k``."""
        k = np.asarray(k)
        out = np.empty(k.shape, dtype=float)
        inside = k < len(self.survival)
        out[inside] = self.survival[np.maximum(k[inside], 0)]
        if np.any(~inside):
            if self.kind == "stable-tail":
                out[~inside] = _stable_sf(self.alpha, k[~inside].astype(float))
            else:
                out[~inside] = 0.0
        return out if out.ndim else float(out)

    def pmf(self, k):
        k = np.asarray(k)
        out = np.where(k >= 0, self.sf(k) - self.sf(k + 1), 0.0)
        if self.kind == "stable-tail":
            # direct formula avoids cancellation for large k
            kk = np.maximum(k, 1).astype(float)
            direct = kk ** (-1.0 - self.alpha) / special.zeta(self.alpha)
            out = np.where(k >= 1, direct, out)
        return out if out.ndim else float(out)

    def pmf_table(self) -> np.ndarray:
        s = self.survival
        return s[:-1] - s[1:]

    def mean(self) -> float:
        if self.kind == "stable-tail":
            return 1.0
        # sum_k P(Y >= k) over k >= 1
        return float(self.survival[1:].sum())

    def head_split(self, cut: int) -> np.ndarray:
        """Probabilities of {0}, ..., {cut-1} followed by P(Y >= cut)."""
        cut = min(cut, self.table_size)
        head = self.survival[:cut] - self.survival[1 : cut + 1]
        return np.append(head, self.survival[cut])


def _stable_sf(alpha: float, k: np.ndarray) -> np.ndarray:
    return special.zeta(1.0 + alpha, k) / special.zeta(alpha)


def _check_law(survival: np.ndarray, kind: str) -> None:
    pmf = survival[:-1] - survival[1:]
    if np.any(pmf < -1e-15):
        raise ValueError(f"{kind}: negative probabilities")
    if not pmf[0] > 0:
        raise ValueError(f"{kind}: mu(0) must be positive")
    if not pmf[0] + (pmf[1] if len(pmf) > 1 else 0.0) < 1.0:
        raise ValueError(f"{kind}: mu(0) + mu(1) must be < 1")


def make_geometric_half(table: int = 64) -> OffspringLaw:
    k = np.arange(table + 2, dtype=float)
    survival = np.exp2(-k)
    survival[-1] = 0.0  # remainder lumped into the last atom
    _check_law(survival, "geometric-half")
    return OffspringLaw("geometric-half", 2.0, 2.0, None, survival)


def make_poisson_one(table: int = 40) -> OffspringLaw:
    k = np.arange(table + 1)
    pmf = np.exp(-1.0 - special.gammaln(k + 1.0))
    pmf[-1] += 1.0 - pmf.sum()
    survival = np.append(np.cumsum(pmf[::-1])[::-1], 0.0)
    _check_law(survival, "poisson-one")
    return OffspringLaw("poisson-one", 2.0, 1.0, None, survival)


@lru_cache(maxsize=8)
def make_stable_tail(alpha: float, table: int = STABLE_TABLE_SIZE) -> OffspringLaw:
    """mu(k) = k^(-1-alpha)/zeta(alpha) for k >= 1; exactly critical."""
    if not 1.0 < alpha < 2.0:
        raise ValueError(f"alpha must lie in (1, 2), got {alpha}")
    mu0 = 1.0 - special.zeta(1.0 + alpha) / special.zeta(alpha)
    assert mu0 > 0.0, "mu(0) must be positive on (1, 2)"
    k = np.arange(1, table + 1, dtype=float)
    survival = np.concatenate([[1.0], _stable_sf(alpha, k)])
    _check_law(survival, "stable-tail")
    return OffspringLaw(
        "stable-tail", float(alpha), math.inf, 1.0 / special.zeta(alpha), survival
    )


def make_finite_table(probs) -> OffspringLaw:
    """Law from an explicit table mu(0), mu(1), ..., mu(K).

    Periodic tables (support inside a proper sublattice) are accepted; their
    ``span`` is recorded and conditioned sampling checks it.
    """
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1 or len(p) < 2 or np.any(p < 0):
        raise ValueError("finite table must be a nonnegative 1-d vector")
    if abs(p.sum() - 1.0) > 1e-12:
        raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
    k = np.arange(len(p))
    mean = float((k * p).sum())
    if abs(mean - 1.0) > 1e-10:
        raise ValueError(f"law is not critical: mean {mean!r}")
    survival = np.append(np.cumsum(p[::-1])[::-1], 0.0)
    survival[0] = 1.0
    _check_law(survival, "finite-table")
    support = [int(j) for j in k[p > 0]]
    span = reduce(math.gcd, support)
    variance = float((k**2 * p).sum() - mean**2)
    return OffspringLaw("finite-table", 2.0, variance, None, survival, span=span)


_NAMED = {
    "geometric-half": make_geometric_half,
    "poisson-one": make_poisson_one,
}


def law_from_tag(tag) -> OffspringLaw:
    """Parse a CLI/config tag: a family name, ``stable-tail:<alpha>``, a
    ``table:[...]`` JSON list, or an already-decoded list of probabilities."""
    if isinstance(tag, OffspringLaw):
        return tag
    if isinstance(tag, (list, tuple)):
        return make_finite_table(tag)
    if tag in _NAMED:
        return _NAMED[tag]()
    if tag.startswith("stable-tail:"):
        return make_stable_tail(float(tag.split(":", 1)[1]))
    if tag.startswith("table:"):
        return make_finite_table(json.loads(tag.split(":", 1)[1]))
    raise ValueError(f"unknown offspring law tag {tag!r}")


def inverse_cdf(law: OffspringLaw, u):
    """Smallest k with P(Y <= k) >= u."""
    u = np.asarray(u, dtype=float)
    if u.ndim == 0:
        return int(_inverse_sf(law, 1.0 - u[None])[0])
    return _inverse_sf(law, 1.0 - u)


def _inverse_sf(law: OffspringLaw, v: np.ndarray) -> np.ndarray:
    # smallest k with P(Y >= k+1) <= v
    tail = law.survival[1:]
    k = np.searchsorted(-tail, -v, side="left").astype(np.int64)
    beyond = k >= len(tail)
    if np.any(beyond):
        if law.kind != "stable-tail":
            k[beyond] = len(tail) - 1
        else:
            k[beyond] = _stable_tail_inverse(law, v[beyond])
    return k


def _stable_tail_inverse(law: OffspringLaw, v: np.ndarray) -> np.ndarray:
    # smallest k >= table with sf(k+1) <= v; start from the integral approximation
    a = law.alpha
    z = special.zeta(a)
    k = np.floor((a * v * z) ** (-1.0 / a)).astype(np.int64)
    k = np.maximum(k, law.table_size)
    for _ in range(64):
        up = law.sf(k + 1) > v
        down = (k > law.table_size) & (law.sf(k) <= v)
        if not (up.any() or down.any()):
            return k
        k = k + up - down
    raise RuntimeError("stable tail inversion failed to settle")


def sample_offspring(law: OffspringLaw, rng: np.random.Generator) -> int:
    return int(inverse_cdf(law, rng.random()))


def sample_offspring_array(law: OffspringLaw, size, rng: np.random.Generator) -> np.ndarray:
    return inverse_cdf(law, rng.random(size))


def sample_tail(law: OffspringLaw, cut: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draws from the law conditioned on Y >= cut."""
    v = (1.0 - rng.random(size)) * law.sf(cut)  # uniform on (0, P(Y >= cut)]
    return _inverse_sf(law, v)


def bn(law: OffspringLaw, n) -> float:
    """Normalising constant B_n with (S_n - n)/B_n converging to the stable law
    whose Laplace transform is exp(lambda^alpha) (exp(lambda^2/2) when alpha=2)."""
    if n <= 0:
        raise ValueError("n must be positive")
    if law.finite_variance:
        return math.sqrt(law.variance * n)
    if law.kind == "stable-tail":
        a = law.alpha
        scale = law.tail_constant * special.gamma(2.0 - a) / (a * (a - 1.0))
        return (n * scale) ** (1.0 / a)
    raise ValueError(f"no scaling rule for law {law.kind!r}")
