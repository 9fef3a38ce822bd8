"""From per-arm RCT counts to conditional rates and uncertainty envelopes."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from statistics import NormalDist

from .bounds import (
    CausationBounds,
    ConditionalRates,
    ProbabilityInterval,
    Undefined,
    PN_REASON,
    PS_REASON,
    causation_bounds,
)

__all__ = [
    "ArmCounts",
    "RctResult",
    "RateConfidence",
    "rates_from_counts",
    "counts_from_rate",
    "wilson_interval",
    "bounds_with_uncertainty",
]


@dataclass(frozen=True)
class ArmCounts:
    recognized: int
    total: int

    def __post_init__(self):
        for name in ("recognized", "total"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise ValueError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.total < 1:
            raise ValueError(f"arm total must be >= 1, got {self.total}")
        if not 0 <= self.recognized <= self.total:
            raise ValueError(
                f"recognized must lie in [0, total={self.total}], got {self.recognized}"
            )

    @property
    def rate(self) -> float:
        return self.recognized / self.total

    def scaled(self, factor: int) -> ArmCounts:
        return ArmCounts(self.recognized * factor, self.total * factor)


@dataclass(frozen=True)
class RctResult:
    """Counts for the controlled arm (feature revealed, x) and the experimental arm (covered, x')."""

    controlled: ArmCounts
    experimental: ArmCounts


@dataclass(frozen=True)
class RateConfidence:
    point: float
    ci_lower: float
    ci_upper: float
    level: float

    def __post_init__(self):
        if not 0.0 <= self.ci_lower <= self.point <= self.ci_upper <= 1.0:
            raise ValueError(
                f"inconsistent confidence interval {self.ci_lower!r} <= "
                f"{self.point!r} <= {self.ci_upper!r}"
            )


def rates_from_counts(rct: RctResult) -> ConditionalRates:
    return ConditionalRates(rct.controlled.rate, rct.experimental.rate)


def counts_from_rate(rate: float, total: int, tol: float = 1e-9) -> ArmCounts:
    """Recover integer counts from a published rate and arm size.

    The rate must correspond to an integer count within ``tol * total``.
    """
    exact = rate * total
    recognized = round(exact)
    if abs(exact - recognized) > tol * max(total, 1):
        raise ValueError(f"rate {rate!r} is not a whole count out of {total}")
    return ArmCounts(int(recognized), int(total))


def _z_score(level: float) -> float:
    if not 0.0 < level < 1.0:
        raise ValueError(f"confidence level must lie in (0, 1), got {level!r}")
    return NormalDist().inv_cdf(0.5 + level / 2.0)


def wilson_interval(arm: ArmCounts, level: float = 0.95) -> RateConfidence:
    """Wilson score interval for ``arm.recognized / arm.total``."""
    z = _z_score(level)
    n = arm.total
    p_hat = arm.rate
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (p_hat + z2 / (2.0 * n)) / denom
    margin = (z / denom) * math.sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n))
    # the exact interval always contains p_hat; pin rounding at the boundaries
    lower = 0.0 if arm.recognized == 0 else min(p_hat, max(0.0, center - margin))
    upper = 1.0 if arm.recognized == n else max(p_hat, min(1.0, center + margin))
    return RateConfidence(point=p_hat, ci_lower=lower, ci_upper=upper, level=level)


def _envelope(corners: list[CausationBounds], key: str) -> ProbabilityInterval:
    parts = [getattr(b, key) for b in corners]
    return ProbabilityInterval(min(p.lower for p in parts), max(p.upper for p in parts))


def bounds_with_uncertainty(rct: RctResult, level: float = 0.95) -> CausationBounds:
    """Conservative outer bounds over the rectangle of the two Wilson intervals.

    Every bound endpoint is monotone in each rate separately, so its extrema
    over the rectangle sit at the four corners.
    """
    x_ci = wilson_interval(rct.controlled, level)
    xp_ci = wilson_interval(rct.experimental, level)
    corners = [
        causation_bounds(ConditionalRates(p, pp))
        for p, pp in itertools.product(
            (x_ci.ci_lower, x_ci.ci_upper), (xp_ci.ci_lower, xp_ci.ci_upper)
        )
    ]
    pns = _envelope(corners, "pns")
    # a denominator that reaches zero inside the rectangle leaves the ratio unbounded
    pn = Undefined(PN_REASON) if x_ci.ci_lower <= 0.0 else _envelope(corners, "pn")
    ps = Undefined(PS_REASON) if xp_ci.ci_upper >= 1.0 else _envelope(corners, "ps")
    return CausationBounds(pn=pn, ps=ps, pns=pns)
