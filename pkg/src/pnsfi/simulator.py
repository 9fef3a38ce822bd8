"""Response-type SCM population with known counterfactuals, and RCTs run on it.

Each unit carries the pair (y_x, y_x') as one of four response types.
Random assignment makes the feature exogenous by construction, so the
arm rates estimate P(y|x) and P(y|x') while PN, PS and PNS are known
exactly from the type distribution.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence, TypeVar

import numpy as np

from . import kernels
from .bounds import ConditionalRates, UndefinedPNError, UndefinedPSError
from .estimation import ArmCounts, RctResult

__all__ = [
    "ResponseType",
    "ResponseDistribution",
    "RctConfig",
    "Population",
    "EmptyArmError",
    "ground_truth_pns",
    "ground_truth_pn",
    "ground_truth_ps",
    "exact_rates",
    "is_monotone",
    "sample_population",
    "run_rct",
    "replication_seed",
    "replicate",
    "simulate_counts",
]

SIMPLEX_TOL = 1e-12
MASK64 = (1 << 64) - 1

T = TypeVar("T")


class ResponseType(enum.IntEnum):
    """Counterfactual pair (y_x, y_x')."""

    ALWAYS = 0  # (1, 1)
    CAUSATIVE = 1  # (1, 0)
    PREVENTIVE = 2  # (0, 1)
    NEVER = 3  # (0, 0)

    @property
    def y_x(self) -> bool:
        return self < 2

    @property
    def y_xp(self) -> bool:
        return self % 2 == 0


class EmptyArmError(ValueError):
    pass


@dataclass(frozen=True)
class ResponseDistribution:
    p_always: float
    p_causative: float
    p_preventive: float
    p_never: float

    def __post_init__(self):
        masses = self.as_tuple()
        for name, value in zip(("p_always", "p_causative", "p_preventive", "p_never"), masses):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
        total = math.fsum(masses)
        if abs(total - 1.0) > SIMPLEX_TOL:
            raise ValueError(f"response-type masses must sum to 1, got {total!r}")

    @classmethod
    def from_sequence(cls, masses: Sequence[float]) -> ResponseDistribution:
        if len(masses) != 4:
            raise ValueError(f"expected 4 masses (always, causative, preventive, never), got {len(masses)}")
        return cls(*(float(m) for m in masses))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p_always, self.p_causative, self.p_preventive, self.p_never)

    def thresholds(self) -> np.ndarray:
        """Cumulative cut points for inverse-CDF sampling of the type code."""
        masses = self.as_tuple()
        cuts = np.cumsum(masses[:3], dtype=np.float64)
        # zero-mass trailing types must never be drawn through rounding slack
        for k in range(3):
            if not any(masses[k + 1 :]):
                cuts[k] = 1.0
        return cuts


def ground_truth_pns(dist: ResponseDistribution) -> float:
    return dist.p_causative


def ground_truth_pn(dist: ResponseDistribution) -> float:
    """P(y'_{x'} | x, y): causative share of units recognized under x."""
    denom = dist.p_causative + dist.p_always
    if denom <= 0.0:
        raise UndefinedPNError("PN is undefined with no always or causative mass")
    return dist.p_causative / denom


def ground_truth_ps(dist: ResponseDistribution) -> float:
    """P(y_x | x', y'): causative share of units not recognized under x'."""
    denom = dist.p_causative + dist.p_never
    if denom <= 0.0:
        raise UndefinedPSError("PS is undefined with no causative or never mass")
    return dist.p_causative / denom


def exact_rates(dist: ResponseDistribution) -> ConditionalRates:
    return ConditionalRates(
        min(1.0, dist.p_always + dist.p_causative),
        min(1.0, dist.p_always + dist.p_preventive),
    )


def is_monotone(dist: ResponseDistribution) -> bool:
    return dist.p_preventive <= SIMPLEX_TOL


@dataclass(frozen=True)
class RctConfig:
    """Assignment protocol.

    ``fixed_arms`` splits a random permutation into arms of exactly
    ``round(treated_fraction * n)`` and the rest; ``paired`` reads every unit
    under both conditions (same cohort covered and uncovered).
    """

    population_size: int
    treated_fraction: float = 0.5
    seed: int = 0
    fixed_arms: bool = False
    paired: bool = False

    def __post_init__(self):
        if int(self.population_size) != self.population_size or self.population_size < 2:
            raise ValueError(f"population_size must be an integer >= 2, got {self.population_size!r}")
        if not 0.0 < self.treated_fraction < 1.0:
            raise ValueError(f"treated_fraction must lie in (0, 1), got {self.treated_fraction!r}")
        if not 0 <= int(self.seed) <= MASK64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if self.paired and not self.fixed_arms:
            raise ValueError("paired read-out requires fixed_arms")
        if self.fixed_arms and not self.paired:
            n_t = self.fixed_treated
            if n_t < 1 or n_t > self.population_size - 1:
                raise EmptyArmError(
                    f"fixed split of {self.population_size} at {self.treated_fraction} leaves an empty arm"
                )

    @property
    def fixed_treated(self) -> int:
        return int(round(self.treated_fraction * self.population_size))


@dataclass(frozen=True)
class Population:
    types: np.ndarray = field(repr=False)

    def __post_init__(self):
        types = np.ascontiguousarray(self.types, dtype=np.uint8)
        types.setflags(write=False)
        object.__setattr__(self, "types", types)

    def __len__(self) -> int:
        return int(self.types.size)

    def counts(self) -> dict[ResponseType, int]:
        raw = kernels.type_counts(self.types)
        return {t: int(raw[t]) for t in ResponseType}

    def __eq__(self, other) -> bool:
        return isinstance(other, Population) and np.array_equal(self.types, other.types)

    __hash__ = None


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


def sample_population(dist: ResponseDistribution, n: int, seed: int) -> Population:
    if n < 1:
        raise ValueError(f"population size must be >= 1, got {n}")
    u = _rng(seed).random(n)
    return Population(kernels.classify(u, dist.thresholds()))


def _result(rec_t: int, tot_t: int, rec_c: int, tot_c: int) -> RctResult:
    if tot_t == 0 or tot_c == 0:
        raise EmptyArmError(f"randomization left an empty arm (treated={tot_t}, control={tot_c})")
    return RctResult(controlled=ArmCounts(rec_t, tot_t), experimental=ArmCounts(rec_c, tot_c))


def run_rct(pop: Population, cfg: RctConfig) -> RctResult:
    """Assign units to x (revealed) / x' (covered) and read out their outcomes.

    The population's own size is used; ``cfg.population_size`` only matters
    to :func:`simulate_counts`.
    """
    n = len(pop)
    if n == 0:
        raise EmptyArmError("empty population")
    if cfg.paired:
        return _result(*kernels.tally_paired(pop.types))
    rng = _rng(cfg.seed)
    if cfg.fixed_arms:
        n_t = int(round(cfg.treated_fraction * n))
        treated = np.zeros(n, dtype=np.uint8)
        treated[rng.permutation(n)[:n_t]] = 1
    else:
        treated = (rng.random(n) < cfg.treated_fraction).view(np.uint8)
    return _result(*kernels.tally(pop.types, treated))


def simulate_counts(dist: ResponseDistribution, cfg: RctConfig) -> RctResult:
    """Sample a population and run one RCT on it from a single seeded stream.

    Equivalent to ``run_rct(sample_population(...), ...)`` in distribution;
    the Bernoulli mode uses the fused kernel and never materializes the
    population.
    """
    rng = _rng(cfg.seed)
    n = cfg.population_size
    thresholds = dist.thresholds()
    if cfg.fixed_arms:
        types = kernels.classify(rng.random(n), thresholds)
        if cfg.paired:
            return _result(*kernels.tally_paired(types))
        treated = np.zeros(n, dtype=np.uint8)
        treated[rng.permutation(n)[: cfg.fixed_treated]] = 1
        return _result(*kernels.tally(types, treated))
    u_type = rng.random(n)
    u_assign = rng.random(n)
    return _result(*kernels.simulate_arms(u_type, u_assign, thresholds, cfg.treated_fraction))


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def replication_seed(master_seed: int, index: int) -> int:
    """Per-replication seed: replication index mixed into the master seed."""
    return _splitmix64((master_seed & MASK64) ^ _splitmix64(index & MASK64))


def replicate(
    fn: Callable[[int], T], master_seed: int, replications: int, workers: int = 1
) -> list[T]:
    """Run ``fn(seed_i)`` for each replication, results in index order.

    Seeds depend only on ``(master_seed, i)``, so the output is the same for
    any ``workers``.
    """
    seeds = [replication_seed(master_seed, i) for i in range(replications)]
    if workers <= 1:
        return [fn(s) for s in seeds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, seeds))
