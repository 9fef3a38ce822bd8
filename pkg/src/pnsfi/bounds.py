"""Bounds on PN, PS and PNS from experimental recognition rates.

Under exogeneity the causal rates P(y_x), P(y_x') equal the conditional
rates P(y|x), P(y|x'), and the three probabilities of causation are
bounded by::

    max(0, p - p')          <= PNS <= min(p, 1 - p')
    max(0, p - p') / p      <= PN  <= min(p, 1 - p') / p
    max(0, p - p') / (1-p') <= PS  <= min(p, 1 - p') / (1 - p')

with ``p = P(y|x)`` (feature revealed) and ``p' = P(y|x')`` (feature
covered).  Everything here is pure arithmetic on floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

__all__ = [
    "ConditionalRates",
    "ProbabilityInterval",
    "Undefined",
    "CausationBounds",
    "UndefinedProbabilityError",
    "UndefinedPNError",
    "UndefinedPSError",
    "pns_interval",
    "pn_interval",
    "ps_interval",
    "causation_bounds",
    "monotone_point_estimates",
]

# machine-readable reasons carried by absent components
PN_REASON = "p_y_given_x_zero"
PS_REASON = "p_not_y_given_xp_zero"


class UndefinedProbabilityError(ValueError):
    """A probability of causation whose conditioning event has probability zero."""

    reason = "undefined"

    def __init__(self, message: str | None = None):
        super().__init__(message or self.reason)


class UndefinedPNError(UndefinedProbabilityError):
    reason = PN_REASON


class UndefinedPSError(UndefinedProbabilityError):
    reason = PS_REASON


def _check_probability(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:  # also rejects NaN
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


@dataclass(frozen=True)
class ConditionalRates:
    """Recognition rates with the feature revealed (x) and covered (x')."""

    p_y_given_x: float
    p_y_given_xp: float

    def __post_init__(self):
        object.__setattr__(self, "p_y_given_x", _check_probability("p_y_given_x", self.p_y_given_x))
        object.__setattr__(self, "p_y_given_xp", _check_probability("p_y_given_xp", self.p_y_given_xp))

    @property
    def p_not_y_given_x(self) -> float:
        return 1.0 - self.p_y_given_x

    @property
    def p_not_y_given_xp(self) -> float:
        return 1.0 - self.p_y_given_xp

    @property
    def effect(self) -> float:
        """Risk difference P(y|x) - P(y|x')."""
        return self.p_y_given_x - self.p_y_given_xp

    @property
    def is_negative_effect(self) -> bool:
        return self.p_y_given_x < self.p_y_given_xp


@dataclass(frozen=True)
class ProbabilityInterval:
    lower: float
    upper: float

    def __post_init__(self):
        lower = _check_probability("lower", self.lower)
        upper = _check_probability("upper", self.upper)
        if lower > upper:
            raise ValueError(f"empty interval [{lower!r}, {upper!r}]")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= value <= self.upper + tol

    def issubset(self, other: ProbabilityInterval, tol: float = 0.0) -> bool:
        return other.lower - tol <= self.lower and self.upper <= other.upper + tol

    def overlaps(self, other: ProbabilityInterval) -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    def scaled(self, denominator: float) -> ProbabilityInterval:
        """Divide both endpoints by ``denominator`` and clamp to [0, 1]."""
        lo = _clamp01(self.lower / denominator)
        hi = _clamp01(self.upper / denominator)
        return ProbabilityInterval(min(lo, hi), hi)

    def __iter__(self):
        yield self.lower
        yield self.upper


@dataclass(frozen=True)
class Undefined:
    """Placeholder for a bound whose conditioning event has probability zero."""

    reason: str

    def __bool__(self) -> bool:
        return False


Component = Union[ProbabilityInterval, Undefined]


@dataclass(frozen=True)
class CausationBounds:
    pn: Component
    ps: Component
    pns: ProbabilityInterval

    def get(self, target: str) -> Component:
        return getattr(self, target.lower())

    def components(self) -> dict[str, Component]:
        return {"pn": self.pn, "ps": self.ps, "pns": self.pns}

    @property
    def all_defined(self) -> bool:
        return isinstance(self.pn, ProbabilityInterval) and isinstance(self.ps, ProbabilityInterval)

    def issubset(self, other: CausationBounds, tol: float = 0.0) -> bool:
        """Component-wise containment; undefined components are skipped."""
        for key, mine in self.components().items():
            theirs = other.components()[key]
            if isinstance(mine, ProbabilityInterval) and isinstance(theirs, ProbabilityInterval):
                if not mine.issubset(theirs, tol):
                    return False
        return True


def _pns_endpoints(p: float, pp: float) -> tuple[float, float]:
    lower = max(0.0, p - pp)
    upper = min(p, 1.0 - pp)
    return lower, upper


def pns_interval(rates: ConditionalRates) -> ProbabilityInterval:
    """Bounds on the probability of necessity and sufficiency."""
    lower, upper = _pns_endpoints(rates.p_y_given_x, rates.p_y_given_xp)
    return ProbabilityInterval(lower, upper)


def pn_interval(rates: ConditionalRates) -> ProbabilityInterval:
    """Bounds on the probability of necessity.

    Raises :class:`UndefinedPNError` when ``P(y|x) == 0``.
    """
    if rates.p_y_given_x <= 0.0:
        raise UndefinedPNError("PN is undefined when P(y|x) = 0")
    return pns_interval(rates).scaled(rates.p_y_given_x)


def ps_interval(rates: ConditionalRates) -> ProbabilityInterval:
    """Bounds on the probability of sufficiency.

    Raises :class:`UndefinedPSError` when ``P(y'|x') == 0``.
    """
    denom = rates.p_not_y_given_xp
    if denom <= 0.0:
        raise UndefinedPSError("PS is undefined when P(y'|x') = 0")
    return pns_interval(rates).scaled(denom)


def causation_bounds(rates: ConditionalRates) -> CausationBounds:
    """PN, PS and PNS intervals for one feature; absent components carry a reason."""
    pns = pns_interval(rates)
    try:
        pn: Component = pn_interval(rates)
    except UndefinedPNError as exc:
        pn = Undefined(exc.reason)
    try:
        ps: Component = ps_interval(rates)
    except UndefinedPSError as exc:
        ps = Undefined(exc.reason)
    return CausationBounds(pn=pn, ps=ps, pns=pns)


def monotone_point_estimates(rates: ConditionalRates) -> tuple[float, float, float]:
    """Point values ``(pn, ps, pns)`` valid only when the caller asserts monotonicity.

    With no preventive units the bounds collapse to their lower endpoints.
    Monotonicity is a counterfactual assumption and is never checked here.
    """
    return (
        pn_interval(rates).lower,
        ps_interval(rates).lower,
        pns_interval(rates).lower,
    )
