import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pnsfi.bounds import ConditionalRates, Undefined, causation_bounds
from pnsfi.estimation import (
    ArmCounts,
    RateConfidence,
    RctResult,
    bounds_with_uncertainty,
    counts_from_rate,
    rates_from_counts,
    wilson_interval,
)

from oracles import clopper_pearson, grid_envelope, wilson_reference


def rct(x, n_x, xp, n_xp):
    return RctResult(ArmCounts(x, n_x), ArmCounts(xp, n_xp))


@pytest.mark.parametrize(
    "counts, expected",
    [
        ((504, 600, 450, 600), (0.84, 0.75)),
        ((600, 600, 0, 600), (1.0, 0.0)),
        ((465, 600, 414, 600), (0.775, 0.69)),
    ],
)
def test_rates_from_counts(counts, expected):
    assert rates_from_counts(rct(*counts)) == ConditionalRates(*expected)


def test_table3_percentages_recovered_exactly():
    published = {450: 0.75, 504: 0.84, 465: 0.775, 414: 0.69, 375: 0.625, 486: 0.81}
    for recognized, rate in published.items():
        assert ArmCounts(recognized, 600).rate == rate
        assert counts_from_rate(rate, 600) == ArmCounts(recognized, 600)


def test_counts_from_rate_rejects_fractional_count():
    with pytest.raises(ValueError):
        counts_from_rate(0.8401, 600)


@pytest.mark.parametrize("bad", [(-1, 10), (11, 10), (0, 0), (1.5, 10)])
def test_arm_counts_validated(bad):
    with pytest.raises(ValueError):
        ArmCounts(*bad)


def test_wilson_degenerate_zero():
    ci = wilson_interval(ArmCounts(0, 600), 0.95)
    assert ci.point == 0.0 and ci.ci_lower == 0.0
    assert ci.ci_upper == pytest.approx(wilson_reference(0, 600, 0.95)[1], abs=1e-12)


def test_wilson_degenerate_full():
    ci = wilson_interval(ArmCounts(600, 600), 0.95)
    assert ci.point == 1.0 and ci.ci_upper == 1.0


def test_wilson_dog_nose_controlled():
    ci = wilson_interval(ArmCounts(504, 600), 0.95)
    assert ci.ci_lower < 0.84 < ci.ci_upper
    assert ci.ci_upper - ci.ci_lower < 0.07
    cp_lo, cp_hi = clopper_pearson(504, 600, 0.95)
    # Clopper-Pearson is conservative; Wilson is no wider
    assert ci.ci_upper - ci.ci_lower <= cp_hi - cp_lo


@given(st.integers(1, 5000).flatmap(lambda n: st.tuples(st.integers(0, n), st.just(n))),
       st.sampled_from([0.5, 0.8, 0.9, 0.95, 0.99]))
def test_wilson_matches_reference(counts, level):
    k, n = counts
    ci = wilson_interval(ArmCounts(k, n), level)
    lo, hi = wilson_reference(k, n, level)
    assert ci.ci_lower == pytest.approx(lo, abs=1e-12)
    assert ci.ci_upper == pytest.approx(hi, abs=1e-12)
    assert ci.ci_lower <= ci.point <= ci.ci_upper


def test_wilson_rejects_bad_level():
    with pytest.raises(ValueError):
        wilson_interval(ArmCounts(1, 2), 1.0)


def test_rate_confidence_invariant():
    with pytest.raises(ValueError):
        RateConfidence(point=0.5, ci_lower=0.6, ci_upper=0.7, level=0.95)


def test_envelope_large_n_limit():
    big = 10**12
    env = bounds_with_uncertainty(rct(84 * big // 100, big, 75 * big // 100, big), 0.95)
    point = causation_bounds(ConditionalRates(0.84, 0.75))
    for key in ("pn", "ps", "pns"):
        assert env.get(key).lower == pytest.approx(point.get(key).lower, abs=1e-5)
        assert env.get(key).upper == pytest.approx(point.get(key).upper, abs=1e-5)


def test_envelope_dog_eyes_contains_table5():
    env = bounds_with_uncertainty(rct(486, 600, 375, 600), 0.95)
    assert env.pns.lower < 0.185 and env.pns.upper > 0.375
    assert env.pn.lower < 0.228 and env.pn.upper > 0.463
    assert env.ps.lower < 0.493 and env.ps.upper == 1.0


def test_envelope_null_effect_small_arms():
    env = bounds_with_uncertainty(rct(1, 2, 1, 2), 0.95)
    assert env.pns.lower == 0.0


def test_envelope_marks_unbounded_denominators():
    env = bounds_with_uncertainty(rct(0, 50, 10, 50), 0.95)
    assert isinstance(env.pn, Undefined)
    env = bounds_with_uncertainty(rct(30, 50, 50, 50), 0.95)
    assert isinstance(env.ps, Undefined)


counts_tables = st.tuples(st.integers(1, 2000), st.integers(1, 2000)).flatmap(
    lambda ns: st.tuples(st.integers(0, ns[0]), st.just(ns[0]), st.integers(0, ns[1]), st.just(ns[1]))
)


@given(counts_tables, st.sampled_from([0.8, 0.95, 0.99]))
def test_envelope_contains_point_bounds(table, level):
    r = rct(*table)
    assert causation_bounds(rates_from_counts(r)).issubset(bounds_with_uncertainty(r, level))


def test_corner_envelope_matches_grid_oracle():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n_x, n_xp = rng.integers(20, 2000, size=2)
        x = int(rng.integers(1, n_x))
        xp = int(rng.integers(1, n_xp))
        r = rct(x, int(n_x), xp, int(n_xp))
        env = bounds_with_uncertainty(r, 0.95)
        p_ci = wilson_reference(x, n_x, 0.95)
        pp_ci = wilson_reference(xp, n_xp, 0.95)
        grid = grid_envelope(p_ci, pp_ci)
        for key, (g_lo, g_hi) in grid.items():
            comp = env.get(key)
            # grid points never leave the corner envelope ...
            assert g_lo >= comp.lower - 1e-9 and g_hi <= comp.upper + 1e-9
            # ... and the grid includes the corners, so it attains it
            assert g_lo == pytest.approx(comp.lower, abs=1e-9)
            assert g_hi == pytest.approx(comp.upper, abs=1e-9)
