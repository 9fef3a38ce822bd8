"""Containment and coverage checks of the bounds against simulated ground truth."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .bounds import CausationBounds, ProbabilityInterval, UndefinedProbabilityError, causation_bounds
from .estimation import bounds_with_uncertainty
from .simulator import (
    RctConfig,
    ResponseDistribution,
    exact_rates,
    ground_truth_pn,
    ground_truth_pns,
    ground_truth_ps,
    is_monotone,
    replicate,
    replication_seed,
    simulate_counts,
)

__all__ = [
    "ConfigError",
    "SimulationConfig",
    "DistributionSummary",
    "ground_truths",
    "containment",
    "coverage",
    "run_study",
]

KEYS = ("pn", "ps", "pns")
CONTAINMENT_TOL = 1e-12


class ConfigError(ValueError):
    pass


def ground_truths(dist: ResponseDistribution) -> dict[str, Optional[float]]:
    out: dict[str, Optional[float]] = {"pns": ground_truth_pns(dist)}
    for key, fn in (("pn", ground_truth_pn), ("ps", ground_truth_ps)):
        try:
            out[key] = fn(dist)
        except UndefinedProbabilityError:
            out[key] = None
    return {k: out[k] for k in KEYS}


def containment(
    bounds: CausationBounds, truths: dict[str, Optional[float]], tol: float = CONTAINMENT_TOL
) -> dict[str, Optional[bool]]:
    """Per component: does the interval contain the truth?

    ``None`` when the truth is undefined.  An undefined interval with a
    defined truth counts as containing it: it bounds nothing, like [0, 1].
    """
    verdicts: dict[str, Optional[bool]] = {}
    for key in KEYS:
        truth = truths[key]
        interval = bounds.get(key)
        if truth is None:
            verdicts[key] = None
        elif isinstance(interval, ProbabilityInterval):
            verdicts[key] = interval.contains(truth, tol)
        else:
            verdicts[key] = True
    return verdicts


def _all_contained(verdicts: dict[str, Optional[bool]]) -> bool:
    return all(v is not False for v in verdicts.values())


def coverage(
    dist: ResponseDistribution,
    cfg: RctConfig,
    replications: int,
    level: float = 0.95,
    workers: int = 1,
) -> tuple[dict[str, Optional[float]], float]:
    """Fraction of seeded RCT replications whose uncertainty envelope holds the truth.

    Returns per-component coverage and the fraction in which every defined
    component is covered at once.  ``cfg.seed`` is the master seed.
    """
    if replications < 1:
        raise ValueError(f"replications must be >= 1, got {replications}")
    truths = ground_truths(dist)

    def one(seed: int) -> dict[str, Optional[bool]]:
        run_cfg = RctConfig(
            cfg.population_size, cfg.treated_fraction, seed, fixed_arms=cfg.fixed_arms, paired=cfg.paired
        )
        envelope = bounds_with_uncertainty(simulate_counts(dist, run_cfg), level)
        return containment(envelope, truths)

    verdicts = replicate(one, cfg.seed, replications, workers)
    per_key: dict[str, Optional[float]] = {}
    for key in KEYS:
        if truths[key] is None:
            per_key[key] = None
        else:
            per_key[key] = sum(bool(v[key]) for v in verdicts) / replications
    joint = sum(_all_contained(v) for v in verdicts) / replications
    return per_key, joint


@dataclass(frozen=True)
class SimulationConfig:
    distributions: tuple[tuple[str, ResponseDistribution], ...]
    population_size: int = 100_000
    treated_fraction: float = 0.5
    fixed_arms: bool = False
    paired: bool = False
    replications: int = 0
    confidence: float = 0.95
    seed: int = 0
    mode: str = "sampled"
    workers: int = 1

    @classmethod
    def from_dict(cls, data: Any) -> SimulationConfig:
        if not isinstance(data, dict):
            raise ConfigError("simulation config must be a JSON object")
        unknown = set(data) - {
            "distributions", "population_size", "treated_fraction", "fixed_arms", "paired",
            "replications", "confidence", "seed", "mode", "workers",
        }
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        raw = data.get("distributions")
        if not isinstance(raw, list) or not raw:
            raise ConfigError("'distributions' must be a nonempty list")
        dists = []
        for i, item in enumerate(raw):
            name = f"dist{i}"
            try:
                if isinstance(item, dict):
                    name = str(item.get("name", name))
                    if "masses" in item:
                        dist = ResponseDistribution.from_sequence(item["masses"])
                    else:
                        dist = ResponseDistribution(
                            *(float(item[k]) for k in ("p_always", "p_causative", "p_preventive", "p_never"))
                        )
                else:
                    dist = ResponseDistribution.from_sequence(item)
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"distribution {i} ({name}): {exc}") from None
            dists.append((name, dist))

        mode = data.get("mode", "sampled")
        if mode not in ("exact", "sampled"):
            raise ConfigError(f"mode must be 'exact' or 'sampled', got {mode!r}")
        replications = data.get("replications")
        if replications is None:
            if mode == "sampled":
                raise ConfigError("sampled mode needs 'replications' >= 1")
            replications = 0
        elif not isinstance(replications, int) or isinstance(replications, bool) or replications < 1:
            raise ConfigError(f"replications must be an integer >= 1, got {replications!r}")
        confidence = data.get("confidence", 0.95)
        if not isinstance(confidence, (int, float)) or not 0.0 < confidence < 1.0:
            raise ConfigError(f"confidence must lie in (0, 1), got {confidence!r}")
        workers = data.get("workers", 1)
        if not isinstance(workers, int) or workers < 1:
            raise ConfigError(f"workers must be a positive integer, got {workers!r}")

        cfg = cls(
            distributions=tuple(dists),
            population_size=data.get("population_size", 100_000),
            treated_fraction=data.get("treated_fraction", 0.5),
            fixed_arms=bool(data.get("fixed_arms", False)),
            paired=bool(data.get("paired", False)),
            replications=replications,
            confidence=float(confidence),
            seed=data.get("seed", 0),
            mode=mode,
            workers=workers,
        )
        try:
            cfg.rct_config()
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        return cfg

    def rct_config(self, seed: Optional[int] = None) -> RctConfig:
        return RctConfig(
            self.population_size,
            self.treated_fraction,
            self.seed if seed is None else seed,
            fixed_arms=self.fixed_arms,
            paired=self.paired,
        )


@dataclass(frozen=True)
class DistributionSummary:
    name: str
    dist: ResponseDistribution
    monotone: bool
    truths: dict[str, Optional[float]]
    exact_bounds: CausationBounds
    contained: dict[str, Optional[bool]]
    replications: int = 0
    coverage: dict[str, Optional[float]] = field(default_factory=dict)
    coverage_all: Optional[float] = None

    @property
    def all_contained(self) -> bool:
        return _all_contained(self.contained)


def run_study(cfg: SimulationConfig) -> list[DistributionSummary]:
    summaries = []
    for index, (name, dist) in enumerate(cfg.distributions):
        truths = ground_truths(dist)
        exact = causation_bounds(exact_rates(dist))
        summary = dict(
            name=name,
            dist=dist,
            monotone=is_monotone(dist),
            truths=truths,
            exact_bounds=exact,
            contained=containment(exact, truths),
        )
        if cfg.mode == "sampled":
            per_key, joint = coverage(
                dist,
                cfg.rct_config(replication_seed(cfg.seed, index)),
                cfg.replications,
                cfg.confidence,
                cfg.workers,
            )
            summary.update(replications=cfg.replications, coverage=per_key, coverage_all=joint)
        summaries.append(DistributionSummary(**summary))
    return summaries
