import hypothesis
import pytest

from ruinlab import (
    BlackScholes,
    BusinessSpec,
    CompoundPoisson,
    DoubleExponential,
    Exponential,
    ExperimentSpec,
    GridSpec,
    HatJumpDiffusion,
    LevyJumpDiffusion,
    PointMass,
    TemperedStableTails,
)

hypothesis.settings.register_profile("dev", max_examples=25, deadline=None)
hypothesis.settings.register_profile("ci", max_examples=100, deadline=None)
hypothesis.settings.load_profile("dev")


@pytest.fixture
def bs_returns():
    return BlackScholes(a_R=0.3, sigma_R=0.4)


@pytest.fixture
def brownian_business():
    """X = -0.1 t + 0.2 W"""
    return BusinessSpec(a_X=-0.1, sigma_X=0.2)


@pytest.fixture
def jump_business():
    return BusinessSpec(a_X=-0.5, sigma_X=0.3, jumps=CompoundPoisson(2.0, Exponential(1.0)))


@pytest.fixture
def levy_returns():
    return LevyJumpDiffusion(a_R=0.1, sigma_R=0.2, jumps=CompoundPoisson(0.5, PointMass(-0.3)))


@pytest.fixture
def kou_returns():
    """Hat model with one-sided negative exponential jumps, MGF edge at 4."""
    return HatJumpDiffusion(0.2, 0.2, CompoundPoisson(1.0, DoubleExponential(0.0, 5.0, 4.0)))


@pytest.fixture
def tempered_returns():
    return HatJumpDiffusion(0.0, 0.0, TemperedStableTails(1.0, 1.0, 3.0, 1.0, 0.5, 0.5))


@pytest.fixture
def small_spec(brownian_business, bs_returns):
    return ExperimentSpec(
        business=brownian_business,
        returns=bs_returns,
        grid=GridSpec(T=1.0, n_steps=50),
        initial_capitals=(0.05, 0.1, 0.2),
        n_paths=200,
        seed=42,
        alpha_list=(1.5,),
    )


@pytest.fixture
def config_tree():
    return {
        "business": {"drift": -0.1, "sigma": 0.2, "jumps": None},
        "returns": {"kind": "black_scholes", "drift": 0.3, "sigma": 0.4},
        "grid": {"T": 1.0, "n_steps": 20, "jump_adapted": True},
        "mc": {"n_paths": 50, "seed": 42},
        "capitals": [0.05, 0.1],
        "alphas": [1.5],
    }
