"""Interval feature importance from probabilities of causation.

PN-FI, PS-FI and PNS-FI scores are bounded from the recognition rates of a
feature-revealed and a feature-covered arm, and the bounds are checked
against a response-type SCM simulator with known counterfactuals.
"""

from .bounds import (
    CausationBounds,
    ConditionalRates,
    ProbabilityInterval,
    Undefined,
    UndefinedPNError,
    UndefinedProbabilityError,
    UndefinedPSError,
    causation_bounds,
    monotone_point_estimates,
    pn_interval,
    pns_interval,
    ps_interval,
)
from .estimation import (
    ArmCounts,
    RateConfidence,
    RctResult,
    bounds_with_uncertainty,
    rates_from_counts,
    wilson_interval,
)
from .ranking import FeatureRecord, RankingCriterion, rank_features, select_features
from .simulator import (
    Population,
    RctConfig,
    ResponseDistribution,
    ResponseType,
    exact_rates,
    ground_truth_pn,
    ground_truth_pns,
    ground_truth_ps,
    is_monotone,
    run_rct,
    sample_population,
)

__version__ = "0.1.0"
