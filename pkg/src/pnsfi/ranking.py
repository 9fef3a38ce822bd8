"""Ranking and threshold selection of features by causation-bound importance."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .bounds import CausationBounds, ConditionalRates, ProbabilityInterval, causation_bounds

__all__ = [
    "FeatureRecord",
    "RankingCriterion",
    "RankedFeature",
    "DEFAULT_CRITERION",
    "feature_flags",
    "rank_features",
    "select_features",
]

TARGETS = ("pn", "ps", "pns")
STATISTICS = ("lower", "midpoint", "upper")
_STAT_ALIASES = {"mid": "midpoint", "lo": "lower", "hi": "upper"}


def feature_flags(rates: ConditionalRates, bounds: CausationBounds) -> frozenset[str]:
    flags = set()
    if rates.is_negative_effect:
        flags.add("negative-effect")
    for key in ("pn", "ps"):
        if not isinstance(bounds.get(key), ProbabilityInterval):
            flags.add(f"{key}-undefined")
    return frozenset(flags)


@dataclass(frozen=True)
class FeatureRecord:
    name: str
    rates: ConditionalRates
    bounds: CausationBounds
    flags: frozenset[str] = field(default_factory=frozenset)

    @classmethod
    def from_rates(cls, name: str, rates: ConditionalRates, extra_flags: Iterable[str] = ()) -> FeatureRecord:
        bounds = causation_bounds(rates)
        return cls(name, rates, bounds, feature_flags(rates, bounds) | frozenset(extra_flags))


@dataclass(frozen=True)
class RankingCriterion:
    target: str = "pns"
    statistic: str = "lower"

    def __post_init__(self):
        target = self.target.lower()
        statistic = _STAT_ALIASES.get(self.statistic.lower(), self.statistic.lower())
        if target not in TARGETS:
            raise ValueError(f"unknown target {self.target!r}; expected one of {TARGETS}")
        if statistic not in STATISTICS:
            raise ValueError(f"unknown statistic {self.statistic!r}; expected one of {STATISTICS}")
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "statistic", statistic)

    @classmethod
    def parse(cls, text: str) -> RankingCriterion:
        """Parse ``"pns:lower"``, ``"pn:mid"`` and similar."""
        target, sep, statistic = text.partition(":")
        if not sep:
            raise ValueError(f"criterion must look like <pn|ps|pns>:<lower|mid|upper>, got {text!r}")
        return cls(target.strip(), statistic.strip())

    def score(self, bounds: CausationBounds) -> Optional[float]:
        component = bounds.get(self.target)
        if not isinstance(component, ProbabilityInterval):
            return None
        return getattr(component, self.statistic)

    def __str__(self) -> str:
        return f"{self.target}:{self.statistic}"


DEFAULT_CRITERION = RankingCriterion("pns", "lower")


@dataclass(frozen=True)
class RankedFeature:
    name: str
    score: Optional[float]
    interval: Optional[ProbabilityInterval]
    overlaps_next: bool = False


def rank_features(records: list[FeatureRecord], criterion: RankingCriterion = DEFAULT_CRITERION) -> list[RankedFeature]:
    """Descending by score, ties broken by name; undefined scores go last.

    ``overlaps_next`` marks a feature whose interval overlaps the next
    ranked one, i.e. the two are not separated by their bounds.
    """
    if not records:
        raise ValueError("no features to rank")
    scored = [(r.name, criterion.score(r.bounds), r.bounds.get(criterion.target)) for r in records]
    defined = sorted((s for s in scored if s[1] is not None), key=lambda s: (-s[1], s[0]))
    absent = sorted((s for s in scored if s[1] is None), key=lambda s: s[0])

    ranked = []
    for i, (name, score, component) in enumerate(defined):
        interval = component if isinstance(component, ProbabilityInterval) else None
        overlaps = False
        if i + 1 < len(defined):
            nxt = defined[i + 1][2]
            overlaps = interval.overlaps(nxt)
        ranked.append(RankedFeature(name, score, interval, overlaps))
    ranked.extend(RankedFeature(name, None, None) for name, _, _ in absent)
    return ranked


def select_features(
    records: list[FeatureRecord], criterion: RankingCriterion = DEFAULT_CRITERION, threshold: float = 0.0
) -> list[str]:
    """Names whose score reaches ``threshold``, in rank order."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must lie in [0, 1], got {threshold!r}")
    if not records:
        return []
    return [r.name for r in rank_features(records, criterion) if r.score is not None and r.score >= threshold]
