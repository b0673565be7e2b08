"""Desk-scale Monte Carlo checks. Deselected by default; run with ``pytest -m slow``."""

import math
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from ruinlab import (
    ExperimentSpec,
    GridSpec,
    bound_report,
    certain_ruin_levy,
    certain_ruin_probe,
    compare_schemes,
    finite_time_bound,
    functional_samples,
    mc_ruin_probability,
    moments_from_samples,
    pathwise_violations,
    simulate_path,
    slope_fit,
)
from ruinlab.bounds import expected_j_alpha
from ruinlab.cli import run
from ruinlab.config import experiment_from_config, load_config

pytestmark = pytest.mark.slow

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def a3_spec(brownian_business, bs_returns):
    return ExperimentSpec(
        brownian_business, bs_returns, GridSpec(1.0, 100), (5.0, 10.0, 20.0, 40.0, 80.0),
        n_paths=10**6, seed=42, alpha_list=(1.5,),
    )


def test_expected_j_alpha_matches_monte_carlo(bs_returns, brownian_business):
    alphas = (0.5, 1.0, 2.0, 2.75)
    spec = ExperimentSpec(brownian_business, bs_returns, GridSpec(1.0, 1000), (1.0,), n_paths=10**5, alpha_list=alphas)
    samples = functional_samples(spec)
    for alpha in alphas:
        j = samples.j_T[alpha]
        se = j.std(ddof=1) / math.sqrt(j.size)
        assert abs(j.mean() - expected_j_alpha(bs_returns, alpha, 1.0)) < 3.0 * se
    # psi(2.75) = 0
    assert expected_j_alpha(bs_returns, 2.75, 1.0) == pytest.approx(1.0, abs=1e-9)


def test_bound_dominates_at_every_capital(a3_spec):
    estimates = mc_ruin_probability(a3_spec)
    report = bound_report(a3_spec.business, moments_from_samples(functional_samples(a3_spec), 1.5))
    scaled = []
    for est in estimates:
        value = finite_time_bound(report, est.y)
        assert value >= est.ci_high
        scaled.append(value * est.y**1.5)
    assert np.ptp(scaled) <= 1e-12 * max(scaled)


def test_tempered_tail_slope():
    spec = experiment_from_config(load_config(CONFIG_DIR / "tempered.json"))
    fit = slope_fit(mc_ruin_probability(spec), beta_ref=3.0)
    assert -3.75 <= fit.slope <= -2.25


def test_certain_ruin_probe_approaches_one():
    spec = experiment_from_config(load_config(CONFIG_DIR / "bs_low.json"))
    assert certain_ruin_levy(spec.returns, spec.business).verdict == "certain_ruin"
    estimates = certain_ruin_probe(spec, 1.0, (25.0, 50.0, 100.0, 200.0))
    p = [e.p_hat for e in estimates]
    assert p == sorted(p)
    assert p[-1] >= 0.95


def test_schemes_agree_in_law(a3_spec):
    assert compare_schemes(replace(a3_spec, n_paths=10**4)).agree


@pytest.mark.parametrize("fixture", ["bs_returns", "kou_returns", "tempered_returns"])
def test_pathwise_inequalities_hold(fixture, request, brownian_business):
    spec = ExperimentSpec(
        brownian_business, request.getfixturevalue(fixture), GridSpec(1.0, 100), (1.0,),
        n_paths=10**4, alpha_list=(0.5, 1.5, 3.0),
    )
    for k in range(spec.n_paths):
        assert pathwise_violations(simulate_path(spec, k)) == []


def test_reruns_are_byte_identical(tmp_path):
    config = CONFIG_DIR / "bs.json"
    for out in ("a", "b"):
        assert run(["simulate", "--config", str(config), "--out", str(tmp_path / out), "--set", "mc.n_paths=5000"]) == 0
    (first,) = (tmp_path / "a").iterdir()
    second = tmp_path / "b" / first.name
    assert (first / "estimates.csv").read_bytes() == (second / "estimates.csv").read_bytes()
