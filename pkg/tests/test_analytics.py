import math

import pytest
from hypothesis import assume, given
import hypothesis.strategies as st
from scipy import integrate
from scipy.special import exp1

from ruinlab import (
    AdditiveIntegral,
    BlackScholes,
    BusinessSpec,
    CompoundPoisson,
    DoubleExponential,
    Exponential,
    Gaussian,
    HatJumpDiffusion,
    HorizonInconclusive,
    Inapplicable,
    LaplaceExponent,
    LevyJumpDiffusion,
    PointMass,
    RootAtDomainBoundary,
    TemperedStableTails,
    WeightTable,
    asymptotic_optimality_conditions,
    beta_report,
    beta_T_classifier,
    certain_ruin_additive,
    certain_ruin_levy,
    drift_limit,
    find_beta_infinity,
    jump_moment_finite,
    laplace_exponent,
    scale_returns,
)

# Laplace exponent

def test_black_scholes_exponent(bs_returns):
    psi = laplace_exponent(bs_returns)
    assert psi(1.0) == pytest.approx(-0.14, abs=1e-12)
    assert psi.provenance == "closed_form"

def test_levy_point_mass_exponent(levy_returns):
    """a_R = 0.1, sigma = 0.2, jumps of size -0.3 at rate 0.5"""
    a0 = 0.1 + 0.5 * 0.3
    expected = -(a0 - 0.02) * 2.0 + 0.02 * 4.0 + 0.5 * (0.7**-2.0 - 1.0)
    assert laplace_exponent(levy_returns)(2.0) == pytest.approx(expected, rel=1e-12)

def test_levy_exponential_jumps_in_closed_form():
    returns = LevyJumpDiffusion(0.1, 0.0, CompoundPoisson(1.0, Exponential(2.0)))
    psi = laplace_exponent(returns)
    assert psi.provenance == "closed_form"
    # E (1+Y)^-1 for Y ~ Exp(2) is 2 e^2 E1(2)
    small = 1.0 * (0.5 - 1.5 * math.exp(-2.0))
    expected = -(0.1 - small) + (2.0 * math.exp(2.0) * exp1(2.0) - 1.0)
    assert psi(1.0) == pytest.approx(expected, rel=1e-8)

@pytest.mark.parametrize("alpha", [0.3, 1.0, 2.5, 4.0, 7.5])
def test_levy_exponential_closed_form_matches_quadrature(alpha):
    eta = 3.0
    jumps = CompoundPoisson(1.0, Exponential(eta))
    psi = laplace_exponent(LevyJumpDiffusion(0.0, 0.0, jumps))
    moment, _ = integrate.quad(lambda y: eta * math.exp(-eta * y) * (1.0 + y) ** -alpha, 0.0, math.inf)
    expected = alpha * jumps.small_mean() + moment - 1.0
    assert psi(alpha) == pytest.approx(expected, rel=1e-9)

def test_hat_gaussian_jumps_exponent():
    returns = HatJumpDiffusion(0.4, 0.2, CompoundPoisson(1.0, Gaussian(0.2, 0.1)))
    psi = laplace_exponent(returns)
    assert psi.provenance == "closed_form"
    for alpha in (0.5, 1.0, 3.0):
        expected = -0.4 * alpha + 0.02 * alpha**2 + math.expm1(-0.2 * alpha + 0.005 * alpha**2)
        assert psi(alpha) == pytest.approx(expected, rel=1e-12)

@pytest.mark.parametrize("alpha", [0.5, 2.0, 2.9])
def test_tempered_exponent_is_finite_up_to_the_edge(tempered_returns, alpha):
    psi = laplace_exponent(tempered_returns)
    assert psi.alpha_max == 3.0
    assert math.isfinite(psi(alpha))

def test_beta_report_of_tempered_tails(tempered_returns):
    report = beta_report(tempered_returns)
    assert report.beta_T.value == 3.0
    assert not any("convexity" in d for d in report.diagnostics)
    assert report.to_dict()["beta_inf"]["status"] in ("finite", "no_positive_root", "unknown")

def test_tempered_exponent_matches_quadrature_on_finite_activity():
    """alpha_neg = alpha_pos = -1 gives exponential jump sizes with mass c / lambda per side"""
    jumps = TemperedStableTails(2.0, 3.0, 4.0, 6.0, -1.0, -1.0)
    psi = laplace_exponent(HatJumpDiffusion(0.0, 0.0, jumps))
    small = 3.0 * _truncated_exp_mean(6.0) - 2.0 * _truncated_exp_mean(4.0)
    for alpha in (1.0, 3.5):
        raw = 2.0 * (1.0 / (4.0 - alpha) - 1.0 / 4.0) + 3.0 * (1.0 / (6.0 + alpha) - 1.0 / 6.0)
        assert psi(alpha) == pytest.approx(raw + alpha * small, rel=1e-8)

def _truncated_exp_mean(lam):
    """int_0^1 y exp(-lam y) dy"""
    return (1.0 - math.exp(-lam) * (1.0 + lam)) / lam**2

def test_kou_exponent_is_finite_below_the_edge(kou_returns):
    psi = laplace_exponent(kou_returns)
    assert psi.alpha_max == 4.0
    expected = -0.2 * 2.0 + 0.02 * 4.0 + (4.0 / 2.0 - 1.0)
    assert psi(2.0) == pytest.approx(expected, rel=1e-12)

def test_additive_returns_have_no_exponent():
    returns = AdditiveIntegral(WeightTable((0.0, 1.0), (1.0, 1.0)), 0.1, 0.2)
    with pytest.raises(Inapplicable):
        laplace_exponent(returns)

@pytest.mark.parametrize("fixture", ["bs_returns", "levy_returns", "kou_returns", "tempered_returns"])
def test_exponent_is_convex(fixture, request):
    psi = laplace_exponent(request.getfixturevalue(fixture))
    assert psi.convexity_violations(2.5) == []

# beta_inf

def test_beta_inf_black_scholes(bs_returns):
    """2 a / sigma^2 - 1 = 0.6 / 0.16 - 1"""
    beta = find_beta_infinity(laplace_exponent(bs_returns))
    assert beta.status == "finite"
    assert beta.value == pytest.approx(2.75, abs=1e-9)

@given(a=st.floats(0.05, 1.0), s=st.floats(0.1, 1.0))
def test_beta_inf_matches_closed_form(a, s):
    target = 2.0 * a / s**2 - 1.0
    assume(target > 0.01)
    beta = find_beta_infinity(laplace_exponent(BlackScholes(a, s)))
    assert beta.value == pytest.approx(target, abs=1e-8)

def test_beta_inf_without_safety_loading():
    beta = find_beta_infinity(laplace_exponent(BlackScholes(0.05, 0.4)))
    assert beta.value is None and beta.status == "no_positive_root"

def test_beta_inf_root_of_a_jump_model():
    returns = HatJumpDiffusion(0.5, 0.2, CompoundPoisson(1.0, DoubleExponential(0.0, 5.0, 4.0)))
    psi = laplace_exponent(returns)
    beta = find_beta_infinity(psi)
    assert 0.0 < beta.value < 4.0
    assert psi(beta.value) == pytest.approx(0.0, abs=1e-8)

def test_beta_inf_exact_root_on_a_candidate():
    beta = find_beta_infinity(LaplaceExponent(lambda a: a * (a - 2.0), "synthetic"))
    assert beta.value == 2.0

def test_beta_inf_negative_up_to_the_domain_edge():
    with pytest.raises(RootAtDomainBoundary):
        find_beta_infinity(LaplaceExponent(lambda a: -a, "synthetic", alpha_max=3.0))

def test_beta_inf_negative_everywhere():
    beta = find_beta_infinity(LaplaceExponent(lambda a: -a, "synthetic"))
    assert beta.status == "no_positive_root"

# beta_T

def test_beta_T_by_family(bs_returns, levy_returns, kou_returns, tempered_returns):
    assert beta_T_classifier(bs_returns).value == math.inf
    assert beta_T_classifier(levy_returns).value == math.inf
    assert beta_T_classifier(kou_returns).value == 4.0
    assert beta_T_classifier(tempered_returns).value == 3.0

def test_beta_T_unknown_for_weak_tempering():
    returns = HatJumpDiffusion(0.0, 0.0, TemperedStableTails(1.0, 1.0, 1.5, 1.0, 0.5, 0.5))
    beta = beta_T_classifier(returns)
    assert beta.value is None and beta.status == "unknown"

def test_beta_T_additive_is_a_grid_lower_bound():
    returns = AdditiveIntegral(
        WeightTable((0.0, 10.0), (1.0, 2.0)), 0.1, 0.2, CompoundPoisson(1.0, PointMass(-0.3))
    )
    beta = beta_T_classifier(returns, horizon=10.0)
    assert beta.status == "lower_bound"
    assert beta.value == 20.0

def test_jump_moment_criterion(levy_returns, kou_returns):
    assert jump_moment_finite(levy_returns, 10.0).finite
    check = jump_moment_finite(kou_returns, 3.0)
    assert check.finite and check.value == pytest.approx(4.0 / math.e, rel=1e-12)
    assert not jump_moment_finite(kou_returns, 4.0).finite
    assert not jump_moment_finite(kou_returns, 5.0).finite

def test_jump_moment_of_tempered_tails_at_and_past_the_edge(tempered_returns):
    assert jump_moment_finite(tempered_returns, 2.9).finite
    # at alpha = lambda_neg the tail is y^-1.5, still integrable
    edge = jump_moment_finite(tempered_returns, 3.0)
    assert edge.finite and edge.value > jump_moment_finite(tempered_returns, 2.9).value
    assert not jump_moment_finite(tempered_returns, 3.5).finite
    weak = HatJumpDiffusion(0.0, 0.0, TemperedStableTails(1.0, 1.0, 3.0, 1.0, -0.5, 0.5))
    assert not jump_moment_finite(weak, 3.0).finite

def test_beta_report_diagnoses_safety_loading(kou_returns):
    report = beta_report(kou_returns)
    assert report.beta_T.value == 4.0
    assert report.beta_inf.status == "no_positive_root"
    assert any(d.startswith("safety loading") and "fails" in d for d in report.diagnostics)
    assert report.to_dict()["beta_T"]["value"] == 4.0

# Certain ruin

def test_drift_limit_levy_jump_diffusion(levy_returns):
    expected = 0.1 - 0.02 + 0.5 * math.log(0.7) + 0.5 * 0.3
    assert drift_limit(levy_returns) == pytest.approx(expected, rel=1e-12)

def test_certain_ruin_black_scholes():
    report = certain_ruin_levy(BlackScholes(0.05, 0.4), BusinessSpec(-0.05, 0.1))
    assert report.verdict == "certain_ruin"
    assert report.D == pytest.approx(-0.03, abs=1e-12)
    assert report.conditions == {"i": True, "ii": True, "iii": True}

def test_no_certain_ruin_with_positive_drift_limit(bs_returns):
    report = certain_ruin_levy(bs_returns, BusinessSpec(-0.05, 0.1))
    assert report.verdict == "condition_not_met"
    assert report.D == pytest.approx(0.22, abs=1e-12)

def test_certain_ruin_inapplicable_with_business_jumps(jump_business):
    report = certain_ruin_levy(BlackScholes(0.05, 0.4), jump_business)
    assert report.verdict == "inapplicable"
    assert report.D == pytest.approx(-0.03)
    assert report.notes == ["business process has jumps"]

def test_certain_ruin_rejects_p_outside_one_two(bs_returns, brownian_business):
    with pytest.raises(ValueError):
        certain_ruin_levy(bs_returns, brownian_business, p=2.0)

def test_certain_ruin_additive_constant_weight_matches_black_scholes():
    returns = AdditiveIntegral(WeightTable((0.0, 10.0), (1.0, 1.0)), 0.05, 0.4)
    report = certain_ruin_additive(returns, BusinessSpec(-0.05, 0.1))
    assert report.verdict == "certain_ruin"
    assert report.D == pytest.approx(-0.03, abs=1e-12)
    assert report.values["continuous_integral"] == pytest.approx(0.16, rel=1e-8)

def test_certain_ruin_additive_from_a_growing_weight():
    returns = AdditiveIntegral(WeightTable((0.0, 10.0, 100.0), (1.0, 1.5, 1.5)), 0.05, 0.4)
    report = certain_ruin_additive(returns, BusinessSpec(-0.05, 0.1))
    assert report.D == pytest.approx(0.05 * 1.5 - 0.08 * 2.25, abs=1e-12)
    assert report.verdict == "certain_ruin"

def test_certain_ruin_additive_horizon_too_short():
    returns = AdditiveIntegral(WeightTable((0.0, 5000.0, 10000.0), (1.0, 3.0, 3.0)), 0.05, 0.4)
    with pytest.raises(HorizonInconclusive):
        certain_ruin_additive(returns, BusinessSpec(-0.05, 0.1))
    report = certain_ruin_additive(returns, BusinessSpec(-0.05, 0.1), horizon=1e6)
    assert report.D == pytest.approx(0.05 * 3.0 - 0.08 * 9.0, abs=1e-12)

def test_certain_ruin_levy_on_additive_is_inapplicable():
    returns = AdditiveIntegral(WeightTable((0.0, 10.0), (1.0, 1.0)), 0.05, 0.4)
    assert certain_ruin_levy(returns, BusinessSpec(-0.05, 0.1)).verdict == "inapplicable"

# Scaling

@pytest.mark.parametrize("k", [2.0, 3.0])
@pytest.mark.parametrize("fixture", ["bs_returns", "kou_returns", "tempered_returns"])
def test_scaling_maps_the_exponent(fixture, k, request):
    """psi of k R_hat at alpha / k equals psi of R_hat at alpha"""
    returns = request.getfixturevalue(fixture)
    psi = laplace_exponent(returns)
    scaled = laplace_exponent(scale_returns(returns, k))
    for alpha in (0.5, 1.0, 2.0):
        assert scaled(alpha / k) == pytest.approx(psi(alpha), rel=1e-7, abs=1e-9)

def test_scaling_levy_jumps_is_inapplicable(levy_returns):
    with pytest.raises(Inapplicable):
        scale_returns(levy_returns, 2.0)

# Asymptotic optimality

def test_optimality_conditions(brownian_business, tempered_returns, bs_returns):
    good = asymptotic_optimality_conditions(brownian_business, beta_T_classifier(tempered_returns))
    assert good.all_hold
    bad = asymptotic_optimality_conditions(brownian_business, beta_T_classifier(bs_returns))
    assert not bad.beta_in_range and not bad.all_hold
