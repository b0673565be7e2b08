"""ruinlab - Ruin probabilities of an insurer investing in a risky asset"""

import logging
from importlib.metadata import version as _version

from ._errors import (
    AlphaOutOfRange,
    CorruptFile,
    DivergentMgf,
    DivergentTailIntegral,
    HorizonInconclusive,
    Inapplicable,
    InfiniteHorizonDivergent,
    InsufficientTail,
    IoFailure,
    JumpBelowMinusOne,
    MomentUnavailable,
    QuadratureFailure,
    RootAtDomainBoundary,
    RuinLabError,
    SchemaMismatch,
    SpecError,
    TailIntegralDiverges,
)
from ._jumps import DoubleExponential, Exponential, Gaussian, PointMass
from ._weights import WeightTable
from .analytics import (
    BetaEstimate,
    BetaReport,
    CertainRuinReport,
    LaplaceExponent,
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
from .bounds import (
    BoundReport,
    MomentSet,
    NovikovConstants,
    alpha_scan,
    bound_constants,
    bound_report,
    finite_time_bound,
    infinite_time_bound,
    moments,
    moments_from_samples,
)
from .estimate import (
    RuinEstimate,
    SlopeFit,
    bias_probe,
    certain_ruin_probe,
    compare_schemes,
    functional_samples,
    mc_ruin_probability,
    merge_estimates,
    slope_fit,
)
from .io import RunManifest, read_run, write_run
from .model import (
    AdditiveIntegral,
    BlackScholes,
    BusinessSpec,
    CompoundPoisson,
    ExperimentSpec,
    GridSpec,
    HatJumpDiffusion,
    LevyJumpDiffusion,
    TemperedStableTails,
    ValidationReport,
    delta_X,
    validate,
)
from .simulate import (
    SimulatedPath,
    detect_ruin,
    discounted_integral_direct,
    discounted_integral_representation,
    pathwise_violations,
    simulate_business_increments,
    simulate_path,
    simulate_return_path,
)

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    # errors
    "RuinLabError", "SpecError", "Inapplicable", "AlphaOutOfRange", "InsufficientTail",
    "DivergentTailIntegral", "DivergentMgf", "QuadratureFailure", "RootAtDomainBoundary",
    "TailIntegralDiverges", "InfiniteHorizonDivergent", "MomentUnavailable",
    "HorizonInconclusive", "JumpBelowMinusOne", "IoFailure", "SchemaMismatch", "CorruptFile",
    # model
    "Exponential", "DoubleExponential", "Gaussian", "PointMass", "WeightTable",
    "CompoundPoisson", "TemperedStableTails", "BusinessSpec", "BlackScholes",
    "LevyJumpDiffusion", "HatJumpDiffusion", "AdditiveIntegral", "GridSpec",
    "ExperimentSpec", "ValidationReport", "delta_X", "validate",
    # simulate
    "SimulatedPath", "simulate_return_path", "simulate_business_increments",
    "discounted_integral_direct", "discounted_integral_representation", "detect_ruin",
    "simulate_path", "pathwise_violations",
    # analytics
    "LaplaceExponent", "BetaEstimate", "BetaReport", "CertainRuinReport", "laplace_exponent",
    "find_beta_infinity", "beta_T_classifier", "beta_report", "jump_moment_finite",
    "drift_limit", "certain_ruin_levy", "certain_ruin_additive", "scale_returns",
    "asymptotic_optimality_conditions",
    # bounds
    "NovikovConstants", "MomentSet", "BoundReport", "bound_constants", "moments",
    "moments_from_samples", "bound_report", "finite_time_bound", "infinite_time_bound",
    "alpha_scan",
    # estimate
    "RuinEstimate", "SlopeFit", "mc_ruin_probability", "merge_estimates", "slope_fit",
    "certain_ruin_probe", "bias_probe", "functional_samples", "compare_schemes",
    # io
    "RunManifest", "write_run", "read_run",
    "__version__",
]

__version__ = _version("ruinlab")
del _version
