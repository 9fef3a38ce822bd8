from fractions import Fraction as F

import numpy as np
import pytest

from pnsfi.bounds import ConditionalRates, UndefinedPNError, UndefinedPSError, causation_bounds
from pnsfi.simulator import (
    EmptyArmError,
    Population,
    RctConfig,
    ResponseDistribution,
    ResponseType,
    exact_rates,
    ground_truth_pn,
    ground_truth_pns,
    ground_truth_ps,
    is_monotone,
    replicate,
    replication_seed,
    run_rct,
    sample_population,
    simulate_counts,
)
from pnsfi.study import containment, coverage, ground_truths

MIXED = ResponseDistribution(0.50, 0.25, 0.10, 0.15)

# (y_x, y_x') per response type
OUTCOMES = {"always": (1, 1), "causative": (1, 0), "preventive": (0, 1), "never": (0, 0)}


def enumerate_population(masses, size=20):
    """A finite population realizing ``masses`` exactly, as a list of outcome pairs."""
    units = []
    for kind, m in zip(OUTCOMES, masses):
        units += [OUTCOMES[kind]] * int(F(m) * size)
    assert len(units) == size
    return units


def counted_truths(units):
    """PN, PS, PNS by counting counterfactual pairs over the units."""
    n = len(units)
    pns = F(sum(1 for yx, yxp in units if yx and not yxp), n)
    with_y = [u for u in units if u[0]]
    without_y = [u for u in units if not u[1]]
    pn = F(sum(1 for yx, yxp in with_y if not yxp), len(with_y)) if with_y else None
    ps = F(sum(1 for yx, yxp in without_y if yx), len(without_y)) if without_y else None
    return pn, ps, pns


def test_ground_truths_match_enumeration():
    masses = (F(1, 2), F(1, 4), F(1, 10), F(3, 20))
    pn, ps, pns = counted_truths(enumerate_population(masses))
    assert (pn, ps, pns) == (F(1, 3), F(5, 8), F(1, 4))
    assert ground_truth_pns(MIXED) == pytest.approx(float(pns), abs=1e-15)
    assert ground_truth_pn(MIXED) == pytest.approx(float(pn), abs=1e-15)
    assert ground_truth_ps(MIXED) == pytest.approx(float(ps), abs=1e-15)


@pytest.mark.parametrize(
    "masses, pn, ps, pns",
    [
        ((1, 0, 0, 0), 0.0, None, 0.0),
        ((0, 1, 0, 0), 1.0, 1.0, 1.0),
        ((0, 0, 0.5, 0.5), None, 0.0, 0.0),
    ],
)
def test_ground_truth_trivial(masses, pn, ps, pns):
    d = ResponseDistribution(*masses)
    assert ground_truth_pns(d) == pns
    assert ground_truths(d) == {"pn": pn, "ps": ps, "pns": pns}


def test_ground_truth_undefined_errors():
    with pytest.raises(UndefinedPNError):
        ground_truth_pn(ResponseDistribution(0, 0, 0.5, 0.5))
    with pytest.raises(UndefinedPSError):
        ground_truth_ps(ResponseDistribution(1, 0, 0, 0))


@pytest.mark.parametrize(
    "masses, expected",
    [
        ((0.50, 0.25, 0.10, 0.15), (0.75, 0.60)),
        ((1, 0, 0, 0), (1.0, 1.0)),
        ((0.59, 0.25, 0.04, 0.12), (0.84, 0.63)),
    ],
)
def test_exact_rates(masses, expected):
    r = exact_rates(ResponseDistribution(*masses))
    assert r.p_y_given_x == pytest.approx(expected[0], abs=1e-12)
    assert r.p_y_given_xp == pytest.approx(expected[1], abs=1e-12)


def test_monotone_pns_equals_lower_bound():
    # always=0.60, causative=0.15, never=0.25
    d = ResponseDistribution(0.60, 0.15, 0.0, 0.25)
    assert exact_rates(d) == ConditionalRates(0.75, 0.60)
    assert causation_bounds(exact_rates(d)).pns.lower == pytest.approx(ground_truth_pns(d), abs=1e-12)


@pytest.mark.parametrize(
    "masses, monotone",
    [((0.5, 0.3, 0, 0.2), True), ((0.5, 0.25, 0.1, 0.15), False), ((0, 0, 1, 0), False)],
)
def test_is_monotone(masses, monotone):
    assert is_monotone(ResponseDistribution(*masses)) is monotone


@pytest.mark.parametrize("masses", [(0.5, 0.5, 0.5, 0.0), (-0.1, 0.5, 0.3, 0.3), (0.2, 0.2, 0.2, 0.2)])
def test_distribution_validated(masses):
    with pytest.raises(ValueError):
        ResponseDistribution(*masses)


def test_response_type_outcomes():
    for t in ResponseType:
        assert (int(t.y_x), int(t.y_xp)) == OUTCOMES[t.name.lower()]


def test_degenerate_population():
    pop = sample_population(ResponseDistribution(1, 0, 0, 0), 100, seed=5)
    assert len(pop) == 100
    assert pop.counts()[ResponseType.ALWAYS] == 100


@pytest.mark.parametrize("k", range(4))
def test_degenerate_populations_each_type(k):
    masses = [0.0] * 4
    masses[k] = 1.0
    pop = sample_population(ResponseDistribution(*masses), 10_000, seed=k)
    assert pop.counts()[ResponseType(k)] == 10_000


def test_population_causative_count_within_three_sigma():
    pop = sample_population(MIXED, 10**6, seed=42)
    sigma = np.sqrt(10**6 * 0.25 * 0.75)
    assert abs(pop.counts()[ResponseType.CAUSATIVE] - 250_000) <= 3 * sigma


def test_population_deterministic():
    assert sample_population(MIXED, 1000, 9) == sample_population(MIXED, 1000, 9)
    assert sample_population(MIXED, 1000, 9) != sample_population(MIXED, 1000, 10)


def test_rct_all_always():
    pop = sample_population(ResponseDistribution(1, 0, 0, 0), 500, 1)
    res = run_rct(pop, RctConfig(500, 0.5, seed=3))
    assert res.controlled.recognized == res.controlled.total
    assert res.experimental.recognized == res.experimental.total


def test_rct_all_causative():
    pop = sample_population(ResponseDistribution(0, 1, 0, 0), 500, 1)
    res = run_rct(pop, RctConfig(500, 0.5, seed=3))
    assert res.controlled.rate == 1.0
    assert res.experimental.rate == 0.0


def test_rct_large_population_recovers_exact_rates():
    pop = sample_population(MIXED, 10**6, seed=42)
    res = run_rct(pop, RctConfig(10**6, 0.5, seed=43))
    assert res.controlled.rate == pytest.approx(0.75, abs=0.005)
    assert res.experimental.rate == pytest.approx(0.60, abs=0.005)


def test_rct_deterministic():
    pop = sample_population(MIXED, 5000, 1)
    cfg = RctConfig(5000, 0.3, seed=11)
    assert run_rct(pop, cfg) == run_rct(pop, cfg)


def test_rct_empty_arm_raises():
    pop = sample_population(MIXED, 2, 0)
    with pytest.raises(EmptyArmError):
        for seed in range(200):
            run_rct(pop, RctConfig(2, 0.5, seed=seed))


def test_empty_population_raises():
    with pytest.raises(EmptyArmError):
        run_rct(Population(np.zeros(0, dtype=np.uint8)), RctConfig(2, 0.5))


def test_fixed_arms_sizes():
    pop = sample_population(MIXED, 1200, 0)
    res = run_rct(pop, RctConfig(1200, 0.5, seed=1, fixed_arms=True))
    assert res.controlled.total == res.experimental.total == 600
    sim = simulate_counts(MIXED, RctConfig(1200, 0.5, seed=1, fixed_arms=True))
    assert sim.controlled.total == sim.experimental.total == 600


def test_paired_read_out_uses_every_unit_twice():
    pop = sample_population(MIXED, 600, 4)
    res = run_rct(pop, RctConfig(600, 0.5, fixed_arms=True, paired=True))
    c = pop.counts()
    assert res.controlled == type(res.controlled)(c[ResponseType.ALWAYS] + c[ResponseType.CAUSATIVE], 600)
    assert res.experimental.recognized == c[ResponseType.ALWAYS] + c[ResponseType.PREVENTIVE]


def test_rct_config_validation():
    with pytest.raises(ValueError):
        RctConfig(1, 0.5)
    with pytest.raises(ValueError):
        RctConfig(10, 1.0)
    with pytest.raises(ValueError):
        RctConfig(10, 0.5, seed=-1)
    with pytest.raises(ValueError):
        RctConfig(10, 0.5, paired=True)
    with pytest.raises(EmptyArmError):
        RctConfig(10, 0.01, fixed_arms=True)


def test_simulate_counts_matches_distribution():
    res = simulate_counts(MIXED, RctConfig(10**6, 0.5, seed=42))
    assert res.controlled.rate == pytest.approx(0.75, abs=0.005)
    assert res.experimental.rate == pytest.approx(0.60, abs=0.005)
    assert res.controlled.total + res.experimental.total == 10**6


def test_replication_seeds_distinct_and_stable():
    seeds = [replication_seed(42, i) for i in range(1000)]
    assert len(set(seeds)) == 1000
    assert all(0 <= s < 2**64 for s in seeds)
    assert replication_seed(42, 0) == replication_seed(42, 0)
    assert replication_seed(42, 0) != replication_seed(43, 0)


def test_replicate_independent_of_workers():
    fn = lambda seed: simulate_counts(MIXED, RctConfig(20_000, 0.5, seed=seed))  # noqa: E731
    assert replicate(fn, 7, 16, workers=1) == replicate(fn, 7, 16, workers=4)


def _simplex(rng, n):
    return [ResponseDistribution.from_sequence(row) for row in _normalized(rng.dirichlet(np.ones(4), size=n))]


def _normalized(rows):
    # keep the fsum == 1 invariant exact after float sampling
    out = []
    for row in rows:
        row = [float(v) for v in row]
        row[3] = max(0.0, 1.0 - (row[0] + row[1] + row[2]))
        out.append(row)
    return out


def test_containment_exact_rates():
    rng = np.random.default_rng(2024)
    for dist in _simplex(rng, 1000):
        verdicts = containment(causation_bounds(exact_rates(dist)), ground_truths(dist))
        assert all(v is not False for v in verdicts.values()), dist


def test_sharpness_across_ensemble():
    rng = np.random.default_rng(99)
    gaps = {k: ([], []) for k in ("pn", "ps", "pns")}
    for dist in _simplex(rng, 2000):
        bounds = causation_bounds(exact_rates(dist))
        for key, truth in ground_truths(dist).items():
            comp = bounds.get(key)
            if truth is not None and comp:
                gaps[key][0].append(truth - comp.lower)
                gaps[key][1].append(comp.upper - truth)
    for key, (below, above) in gaps.items():
        assert min(below) < 0.02, key
        assert min(above) < 0.02, key


def test_monotone_collapse():
    rng = np.random.default_rng(5)
    for row in rng.dirichlet(np.ones(3), size=200):
        a, c = float(row[0]), float(row[1])
        dist = ResponseDistribution(a, c, 0.0, max(0.0, 1.0 - a - c))
        bounds = causation_bounds(exact_rates(dist))
        for key, truth in ground_truths(dist).items():
            if truth is not None and bounds.get(key):
                assert bounds.get(key).lower == pytest.approx(truth, abs=1e-12)


def test_coverage_small_study():
    per_key, joint = coverage(MIXED, RctConfig(20_000, 0.5, seed=1), replications=50)
    assert joint >= 0.9
    assert set(per_key) == {"pn", "ps", "pns"}


def test_coverage_rejects_zero_replications():
    with pytest.raises(ValueError):
        coverage(MIXED, RctConfig(100, 0.5), replications=0)
