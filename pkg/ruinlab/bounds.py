"""Power-law upper bounds for the finite- and infinite-horizon ruin
probability, assembled from moments of the exponential functionals and
explicit constants that depend on the business triplet.
"""

import logging
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Sequence

from scipy import special

from ._errors import (
    AlphaOutOfRange,
    DivergentMgf,
    Inapplicable,
    InfiniteHorizonDivergent,
    MomentUnavailable,
    QuadratureFailure,
    SpecError,
    TailIntegralDiverges,
)
from ._jumps import BIG, SMALL
from ._stats import mean_and_se
from .analytics import laplace_exponent
from .estimate import FunctionalSamples, functional_samples
from .model import (
    DEFAULT_CUTOFF,
    BlackScholes,
    BusinessSpec,
    ExperimentSpec,
    HatJumpDiffusion,
    LevyJumpDiffusion,
    ReturnSpec,
)

logger = logging.getLogger(__name__)

DEFAULT_K = 8.0

DEFAULT_K_WARNING = (
    "Novikov constants K1, K2, K3 are not stated in the literature this bound follows; "
    "the default value 8 is for shape and monotonicity checks, not certified domination"
)
RESTORED_PREFACTOR_WARNING = (
    "the 4^alpha prefactor of the big-jump (1 < alpha <= 2) and compensated small-jump "
    "(alpha > 2) terms is restored; the displayed inequalities omit it"
)


@dataclass(frozen=True)
class NovikovConstants:
    """Constants of the maximal inequality for compensated Poisson integrals."""
    K1: float = DEFAULT_K
    K2: float = DEFAULT_K
    K3: float = DEFAULT_K
    provenance: str = "default"

    def __post_init__(self):
        for name in ("K1", "K2", "K3"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise SpecError(f"must be >= 0, got {value}", f"novikov.{name}")
        if self.provenance not in ("default", "user"):
            raise SpecError(f"provenance must be 'default' or 'user', got {self.provenance!r}", "novikov.provenance")


def _regime(alpha: float) -> str:
    if alpha <= 1.0:
        return "(0,1]"
    if alpha <= 2.0:
        return "(1,2]"
    return "(2,inf)"


@dataclass(frozen=True)
class BoundConstants:
    C1: float
    C2: float
    C3: float
    regime: str
    tail_integral: float
    warnings: tuple[str, ...] = ()


def _jump_integral(business: BusinessSpec, func, region) -> float:
    if business.jumps is None:
        return 0.0
    return business.jumps.integral(func, region)


def bound_constants(business: BusinessSpec, alpha: float, K: NovikovConstants | None = None) -> BoundConstants:
    """Constants ``C1, C2, C3`` of the bound for exponent ``alpha``.

    The Brownian part uses ``E|W_1|^alpha = 2^(alpha/2) Gamma((alpha+1)/2) / sqrt(pi)``.

    Raises
    ------
    TailIntegralDiverges
        If ``int_{|x|>1} |x|^alpha nu_X(dx)`` is infinite.

    Examples
    --------
    >>> c = bound_constants(BusinessSpec(a_X=-1.0), 1.0)
    >>> (c.C1, c.C2, c.C3)
    (4.0, 0.0, 0.0)
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    K = NovikovConstants() if K is None else K
    try:
        big = _jump_integral(business, lambda x: abs(x) ** alpha, BIG)
    except QuadratureFailure as err:
        raise TailIntegralDiverges(f"int_(|x|>1) |x|^{alpha} nu_X(dx) did not converge") from err
    if not math.isfinite(big):
        raise TailIntegralDiverges(f"int_(|x|>1) |x|^{alpha} nu_X(dx) is infinite")
    small_sq = _jump_integral(business, lambda x: x * x, SMALL)
    four = 4.0**alpha
    brownian = (
        2.0 ** ((5.0 * alpha + 2.0) / 2.0) * special.gamma((alpha + 1.0) / 2.0)
        * business.sigma_X**alpha / math.sqrt(math.pi)
    )
    regime = _regime(alpha)
    notes = []
    c1 = four * abs(business.a_X) ** alpha

    if regime == "(0,1]":
        c2 = brownian + K.K1 * four * small_sq ** (alpha / 2.0)
        c3 = four * big
    elif regime == "(1,2]":
        c1 += four * big**alpha
        c2 = brownian + K.K1 * four * small_sq ** (alpha / 2.0)
        c3 = 0.0
        notes.append(RESTORED_PREFACTOR_WARNING)
    else:
        c1 += four * big**alpha
        c2 = brownian + K.K2 * four * small_sq ** (alpha / 2.0)
        c3 = K.K3 * four * _jump_integral(business, lambda x: abs(x) ** alpha, SMALL)
        notes.append(RESTORED_PREFACTOR_WARNING)

    if K.provenance == "default":
        notes.append(DEFAULT_K_WARNING)
    return BoundConstants(float(c1), float(c2), float(c3), regime, big, tuple(notes))


## Moments


@dataclass
class MomentSet:
    """``E(I_T^alpha)``, ``E(J_T^(alpha/2))`` and ``E(J_T(alpha))``.

    A value is ``None`` when it was not computed. ``sources`` records per
    moment either ``{"kind": "closed_form"}`` or
    ``{"kind": "monte_carlo", "n": ..., "std_err": ...}``.
    """
    alpha: float
    horizon: float
    E_I_alpha: float | None = None
    E_J_half: float | None = None
    E_J_alpha: float | None = None
    sources: dict[str, dict] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _is_brownian_hat(returns: ReturnSpec) -> tuple[float, float] | None:
    """``(m, sigma)`` when ``R_hat_t = m t + sigma W_t``."""
    if isinstance(returns, BlackScholes):
        return returns.a_R - 0.5 * returns.sigma_R**2, returns.sigma_R
    if isinstance(returns, LevyJumpDiffusion) and returns.jumps is None:
        return returns.a_R - 0.5 * returns.sigma_R**2, returns.sigma_R
    if isinstance(returns, HatJumpDiffusion) and returns.jumps is None:
        return returns.a_hat, returns.sigma_hat
    return None


def perpetuity_moments(m: float, sigma: float, alpha: float) -> tuple[float, float]:
    """``E(I_inf^alpha)`` and ``E(J_inf^(alpha/2))`` for ``R_hat_t = m t + sigma W_t``.

    ``I_inf`` has the law of ``2 / (sigma^2 G)`` with ``G ~ Gamma(2m/sigma^2)``;
    both moments are finite iff ``alpha < 2m / sigma^2``.

    Raises
    ------
    MomentUnavailable
        If a moment is infinite.
    """
    if m <= 0:
        raise MomentUnavailable(f"R_hat has drift {m} <= 0; I_inf is infinite")
    if sigma == 0:
        return m**-alpha, (2.0 * m) ** (-alpha / 2.0)
    nu = 2.0 * m / sigma**2
    if alpha >= nu:
        raise MomentUnavailable(f"E(I_inf^alpha) is infinite for alpha={alpha} >= {nu}")
    e_i = math.exp(alpha * math.log(2.0 / sigma**2) + special.gammaln(nu - alpha) - special.gammaln(nu))
    e_j = math.exp(-0.5 * alpha * math.log(2.0 * sigma**2)
                   + special.gammaln(0.5 * (nu - alpha)) - special.gammaln(0.5 * nu))
    return e_i, e_j


def expected_j_alpha(returns: ReturnSpec, alpha: float, horizon: float) -> float:
    """``E(J_T(alpha)) = int_0^T exp(t psi(alpha)) dt`` for Levy returns.

    Raises
    ------
    InfiniteHorizonDivergent
        At ``T = inf`` when ``psi(alpha) >= 0``.
    """
    psi = laplace_exponent(returns)(alpha)
    if math.isinf(horizon):
        if psi >= 0:
            raise InfiniteHorizonDivergent(f"psi({alpha}) = {psi} >= 0: E(J_inf(alpha)) is infinite")
        return -1.0 / psi
    x = horizon * psi
    return horizon if x == 0 else horizon * math.expm1(x) / x


def moments_from_samples(samples: FunctionalSamples, alpha: float) -> MomentSet:
    """Monte Carlo moments from simulated terminal functionals."""
    alpha = float(alpha)
    if alpha not in samples.j_T:
        raise MomentUnavailable(f"J_T({alpha}) was not tracked in the simulation")
    out = MomentSet(alpha, samples.T)
    for name, values in (
        ("E_I_alpha", samples.i_T**alpha),
        ("E_J_half", samples.j_T[2.0] ** (alpha / 2.0)),
        ("E_J_alpha", samples.j_T[alpha]),
    ):
        mean, se = mean_and_se(values)
        setattr(out, name, mean)
        out.sources[name] = {"kind": "monte_carlo", "n": samples.n, "std_err": se}
    return out


def moments(
    returns: ReturnSpec,
    grid,
    alpha: float,
    mode: str = "closed_form",
    n_paths: int = 10_000,
    seed: int = 42,
    threads: int | None = None,
    cutoff: float = DEFAULT_CUTOFF,
) -> MomentSet:
    """Moments needed by the bound.

    ``mode="closed_form"`` gives ``E(J_T(alpha))`` from the Laplace exponent
    for Levy returns and, at ``T = inf`` with a Brownian ``R_hat``, all
    three moments. ``mode="mc"`` estimates all three by simulation at a
    finite horizon and attaches standard errors.

    ``grid`` is a :class:`~ruinlab.model.GridSpec` or, for the infinite
    horizon, ``math.inf``.
    """
    horizon = grid if isinstance(grid, (int, float)) else grid.T
    if mode == "mc":
        if math.isinf(horizon):
            raise MomentUnavailable("Monte Carlo moments need a finite horizon")
        spec = ExperimentSpec(
            business=BusinessSpec(0.0), returns=returns, grid=grid, initial_capitals=(1.0,),
            n_paths=n_paths, seed=seed, alpha_list=(alpha,), cutoff=cutoff,
        )
        return moments_from_samples(functional_samples(spec, threads), alpha)
    if mode != "closed_form":
        raise ValueError(f"mode must be 'closed_form' or 'mc', got {mode!r}")

    out = MomentSet(alpha, horizon)
    try:
        out.E_J_alpha = expected_j_alpha(returns, alpha, horizon)
        out.sources["E_J_alpha"] = {"kind": "closed_form"}
    except (Inapplicable, DivergentMgf) as err:
        logger.debug("no closed form for E(J_T(%g)): %s", alpha, err)
    if math.isinf(horizon):
        brownian = _is_brownian_hat(returns)
        if brownian is not None:
            out.E_I_alpha, out.E_J_half = perpetuity_moments(*brownian, alpha)
            out.sources["E_I_alpha"] = out.sources["E_J_half"] = {"kind": "closed_form"}
    elif _is_brownian_hat(returns) == (0.0, 0.0):
        out.E_I_alpha, out.E_J_half = horizon**alpha, horizon ** (alpha / 2.0)
        out.sources["E_I_alpha"] = out.sources["E_J_half"] = {"kind": "closed_form"}
    return out


## Assembled bound


@dataclass
class BoundReport:
    """Assembled bound ``(C1 E_I_alpha + C2 E_J_half + C3 E_J_alpha) / y^alpha``."""
    alpha: float
    regime: str
    C1: float
    C2: float
    C3: float
    moments: MomentSet
    flags: dict[str, bool] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    novikov: NovikovConstants = field(default_factory=NovikovConstants)

    @property
    def numerator(self) -> float:
        total = 0.0
        for coef, name in ((self.C1, "E_I_alpha"), (self.C2, "E_J_half"), (self.C3, "E_J_alpha")):
            if coef == 0.0:
                continue
            value = getattr(self.moments, name)
            if value is None or not math.isfinite(value):
                raise MomentUnavailable(f"{name} is needed (coefficient {coef}) but unavailable")
            total += coef * value
        return total

    def bound(self, y: float) -> float:
        if not y > 0:
            raise ValueError(f"initial capital must be > 0, got {y}")
        return self.numerator / y**self.alpha

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "regime": self.regime,
            "C1": self.C1,
            "C2": self.C2,
            "C3": self.C3,
            "moments": self.moments.to_dict(),
            "flags": dict(self.flags),
            "warnings": list(self.warnings),
            "novikov": asdict(self.novikov),
        }


def bound_report(business: BusinessSpec, moments_: MomentSet, K: NovikovConstants | None = None) -> BoundReport:
    """Combine constants for ``moments_.alpha`` with the given moments."""
    K = NovikovConstants() if K is None else K
    constants = bound_constants(business, moments_.alpha, K)
    notes = list(constants.warnings)
    for note in notes:
        warnings.warn(note, UserWarning, stacklevel=2)
    return BoundReport(
        alpha=moments_.alpha,
        regime=constants.regime,
        C1=constants.C1,
        C2=constants.C2,
        C3=constants.C3,
        moments=moments_,
        flags={"tail_integral_finite": True},
        warnings=notes,
        novikov=K,
    )


def _check_alpha(report: BoundReport, beta: float | None, name: str) -> None:
    if beta is None:
        report.flags[f"alpha_below_{name}"] = False
        return
    ok = report.alpha < beta
    report.flags[f"alpha_below_{name}"] = ok
    if not ok:
        raise AlphaOutOfRange(f"alpha={report.alpha} is not below {name}={beta}")


def finite_time_bound(report: BoundReport, y: float, beta_T: float | None = math.inf) -> float:
    """Finite-horizon bound at capital ``y``.

    Raises
    ------
    AlphaOutOfRange
        If ``alpha >= beta_T``.
    MomentUnavailable
        If a moment with a nonzero coefficient is missing.
    """
    if math.isinf(report.moments.horizon):
        raise MomentUnavailable("moments are for the infinite horizon; use infinite_time_bound")
    _check_alpha(report, beta_T, "beta_T")
    return report.bound(y)


def infinite_time_bound(report: BoundReport, y: float, beta_inf: float | None) -> float:
    """Infinite-horizon bound at capital ``y`` from ``T = inf`` moments."""
    if not math.isinf(report.moments.horizon):
        raise MomentUnavailable("moments are for a finite horizon; use finite_time_bound")
    _check_alpha(report, beta_inf, "beta_inf")
    return report.bound(y)


@dataclass
class ScanPoint:
    y: float
    alpha: float
    bound: float


def alpha_scan(
    business: BusinessSpec,
    samples: FunctionalSamples,
    ys: Sequence[float],
    alphas: Sequence[float],
    K: NovikovConstants | None = None,
    beta_T: float | None = math.inf,
) -> list[ScanPoint]:
    """Naive grid scan: the ``alpha`` giving the smallest bound at each ``y``.

    Exponents whose bound cannot be assembled are skipped.
    """
    best: dict[float, ScanPoint] = {}
    for alpha in alphas:
        if beta_T is not None and alpha >= beta_T:
            continue
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                report = bound_report(business, moments_from_samples(samples, alpha), K)
            values = [report.bound(y) for y in ys]
        except (MomentUnavailable, TailIntegralDiverges) as err:
            logger.debug("alpha=%g skipped: %s", alpha, err)
            continue
        for y, value in zip(ys, values):
            if y not in best or value < best[y].bound:
                best[y] = ScanPoint(y, alpha, value)
    return [best[y] for y in ys if y in best]
