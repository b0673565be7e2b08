import math
import warnings
from dataclasses import replace

import numpy as np
import pytest
from scipy import stats

from ruinlab import (
    BlackScholes,
    BusinessSpec,
    ExperimentSpec,
    GridSpec,
    InsufficientTail,
    LevyJumpDiffusion,
    RuinEstimate,
    bias_probe,
    certain_ruin_probe,
    compare_schemes,
    functional_samples,
    mc_ruin_probability,
    merge_estimates,
    slope_fit,
)
from ruinlab._stats import ks_critical, mean_and_se, wilson_interval
from ruinlab.estimate import max_losses

# Intervals

def test_wilson_interval_known_value():
    low, high = wilson_interval(10, 100)
    assert low == pytest.approx(0.0552, abs=1e-4)
    assert high == pytest.approx(0.1744, abs=1e-4)

def test_wilson_interval_at_the_edges():
    low, high = wilson_interval(0, 100)
    assert low == 0.0 and 0.0 < high < 0.05
    low, high = wilson_interval(100, 100)
    assert high == 1.0 and 0.95 < low < 1.0

def test_wilson_interval_validation():
    with pytest.raises(ValueError):
        wilson_interval(1, 0)
    with pytest.raises(ValueError):
        wilson_interval(5, 4)

@pytest.mark.parametrize("n", [500, 2000])
@pytest.mark.parametrize("p", [0.05, 0.1, 0.5])
def test_wilson_interval_exact_coverage(p, n):
    """Binomial-weighted share of outcomes whose interval holds p"""
    k = np.arange(n + 1)
    covered = np.array([lo <= p <= hi for lo, hi in (wilson_interval(int(i), n) for i in k)])
    assert stats.binom.pmf(k, n, p)[covered].sum() >= 0.93

@pytest.mark.slow
def test_wilson_interval_coverage_by_replication():
    rng = np.random.default_rng(2024)
    p, n = 0.1, 1000
    hits = 0
    for k in rng.binomial(n, p, size=2000):
        low, high = wilson_interval(int(k), n)
        hits += low <= p <= high
    assert hits / 2000 >= 0.93

def test_ks_critical_value():
    """c(0.01) = sqrt(ln(200) / 2) for two samples of equal size"""
    assert ks_critical(10_000) == pytest.approx(1.627624 * math.sqrt(2.0 / 10_000), rel=1e-6)
    assert ks_critical(100, level=0.05) == pytest.approx(1.358102 * math.sqrt(0.02), rel=1e-6)
    with pytest.raises(ValueError):
        ks_critical(0)

def test_mean_and_se():
    mean, se = mean_and_se(np.array([1.0, 2.0, 3.0, 4.0]))
    assert mean == 2.5
    assert se == pytest.approx(math.sqrt(5.0 / 3.0) / 2.0)

# Ruin probabilities

def test_sure_and_impossible_ruin():
    spec = ExperimentSpec(BusinessSpec(-1.0), LevyJumpDiffusion(0.0), GridSpec(1.0, 100), (0.5, 2.0), n_paths=100)
    low, high = mc_ruin_probability(spec, threads=1)
    assert (low.p_hat, high.p_hat) == (1.0, 0.0)
    assert (low.n_ruined, high.n_ruined) == (100, 0)

def test_estimates_are_monotone_in_capital(small_spec):
    estimates = mc_ruin_probability(small_spec, threads=1)
    assert [e.y for e in estimates] == list(small_spec.initial_capitals)
    p = [e.p_hat for e in estimates]
    assert p == sorted(p, reverse=True)
    for e in estimates:
        assert e.ci_low <= e.p_hat <= e.ci_high
        assert e.n_paths == 200 and e.seed == 42 and e.n_steps == 50

def test_estimates_do_not_depend_on_worker_count(small_spec):
    serial = mc_ruin_probability(small_spec, threads=1)
    parallel = mc_ruin_probability(small_spec, threads=2)
    assert [e.n_ruined for e in serial] == [e.n_ruined for e in parallel]
    np.testing.assert_array_equal(max_losses(small_spec, threads=1), max_losses(small_spec, threads=3))

def test_disjoint_index_ranges_merge_into_the_full_run(small_spec):
    half = replace(small_spec, n_paths=100)
    first = mc_ruin_probability(half, threads=1)
    second = mc_ruin_probability(half, threads=1, index_start=100)
    merged = merge_estimates(first, second)
    full = mc_ruin_probability(small_spec, threads=1)
    assert [e.n_ruined for e in merged] == [e.n_ruined for e in full]
    assert [e.n_paths for e in merged] == [200] * 3

def test_merge_refuses_foreign_estimates(small_spec):
    estimates = mc_ruin_probability(replace(small_spec, n_paths=20), threads=1)
    other = [replace(e, seed=e.seed + 1) for e in estimates]
    with pytest.raises(ValueError):
        merge_estimates(estimates, other)

def test_estimate_to_dict_has_every_field(small_spec):
    est = mc_ruin_probability(replace(small_spec, n_paths=10), threads=1)[0]
    assert set(est.to_dict()) == {
        "y", "T", "p_hat", "ci_low", "ci_high", "n_paths", "n_ruined", "seed",
        "n_steps", "jump_adapted", "index_start", "confidence",
    }

# Slope

def _power_law_estimates(beta=2.0, n=2**20):
    ys = [1.0, 2.0, 4.0, 8.0, 16.0]
    return [RuinEstimate.from_counts(y, 1.0, int(0.5 * n * y**-beta), n, 42) for y in ys]

def test_slope_of_an_exact_power_law():
    fit = slope_fit(_power_law_estimates(), beta_ref=2.0)
    assert fit.slope == pytest.approx(-2.0, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(0.5), abs=1e-12)
    assert fit.gap == pytest.approx(0.0, abs=1e-12)
    assert all(fit.used)

def test_slope_needs_four_tail_points():
    estimates = _power_law_estimates(n=2000)
    # counts 1000, 250, 62, 15, 3
    with pytest.raises(InsufficientTail):
        slope_fit(estimates)
    fit = slope_fit(estimates, min_ruined=3)
    assert fit.used == [True] * 5

def test_slope_gap_undefined_for_infinite_reference():
    assert slope_fit(_power_law_estimates(), beta_ref=math.inf).gap is None

# Probes

def test_certain_ruin_probe_is_nondecreasing_in_horizon():
    spec = ExperimentSpec(
        BusinessSpec(-0.05, 0.1), BlackScholes(0.05, 0.4), GridSpec(1.0, 10), (1.0,), n_paths=200
    )
    estimates = certain_ruin_probe(spec, 1.0, (5.0, 10.0, 20.0), threads=1)
    assert [e.T for e in estimates] == [5.0, 10.0, 20.0]
    p = [e.p_hat for e in estimates]
    assert p == sorted(p)
    assert estimates[-1].n_steps >= 200

def test_certain_ruin_probe_validation(small_spec):
    with pytest.raises(ValueError):
        certain_ruin_probe(small_spec, 1.0, (10.0, 5.0))
    with pytest.raises(ValueError):
        certain_ruin_probe(small_spec, 0.0, (5.0,))

def test_bias_probe_reports_one_row_per_capital(small_spec):
    rows = bias_probe(replace(small_spec, n_paths=50), threads=1)
    assert [r.y for r in rows] == list(small_spec.initial_capitals)
    for r in rows:
        assert r.delta == r.p_hat_refined - r.p_hat
        assert r.to_dict()["delta"] == r.delta

# Functionals and schemes

def test_functional_samples(small_spec):
    samples = functional_samples(replace(small_spec, n_paths=30), threads=1)
    assert samples.n == 30
    assert samples.T == 1.0
    assert sorted(samples.j_T) == [1.5, 2.0]
    assert np.all(samples.i_T > 0)

def test_direct_and_representation_schemes_agree_in_law(small_spec):
    result = compare_schemes(replace(small_spec, n_paths=400), threads=1)
    assert result.n == 400
    assert result.critical_1pct == ks_critical(400)
    assert result.agree

# Cut-off approximation

def test_tempered_runs_warn_about_the_cutoff(brownian_business, tempered_returns):
    spec = ExperimentSpec(brownian_business, tempered_returns, GridSpec(1.0, 20), (1.0,), n_paths=4)
    with pytest.warns(UserWarning, match="cut-off approximation"):
        functional_samples(spec, threads=1)
    with pytest.warns(UserWarning, match=r"\|x\| < 0.001"):
        mc_ruin_probability(spec, threads=1)

def test_exact_jump_laws_do_not_warn(small_spec, kou_returns):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        mc_ruin_probability(small_spec, threads=1)
        functional_samples(replace(small_spec, returns=kou_returns, n_paths=10), threads=1)
