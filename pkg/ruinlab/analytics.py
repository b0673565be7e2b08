"""Laplace exponents, critical exponents and certain-ruin checks.

Everything here is deterministic: closed forms where the model has one,
adaptive quadrature (``scipy.integrate.quad``) otherwise, and bisection
(``scipy.optimize.bisect``) for the positive root of the Laplace exponent.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from ._errors import DivergentMgf, HorizonInconclusive, Inapplicable, QuadratureFailure, RootAtDomainBoundary
from ._jumps import (
    BIG,
    LOG_BIG,
    SMALL,
    DoubleExponential,
    Exponential,
    PointMass,
    Region,
    expect,
    quad,
    scaled_upper_gamma,
)
from .model import (
    AdditiveIntegral,
    BlackScholes,
    BusinessSpec,
    CompoundPoisson,
    HatJumpDiffusion,
    LevyJumpDiffusion,
    ReturnSpec,
    TemperedStableTails,
    delta_X,
)

logger = logging.getLogger(__name__)

ROOT_XTOL = 1e-10
SLOPE_STEP = 1e-6
DEFAULT_P = 1.5
DEFAULT_HORIZON = 1e4
HORIZON_RTOL = 1e-4
ADDITIVE_ALPHA_GRID = tuple(float(a) for a in np.arange(2.0, 20.5, 0.5))
_BRACKET_CAP = 2.0**40


## Laplace exponent


@dataclass(frozen=True)
class LaplaceExponent:
    """``psi(alpha) = ln E exp(-alpha R_hat_1)`` on ``(0, alpha_max)``.

    Parameters
    ----------
    func : callable
        The exponent as a function of ``alpha``.
    provenance : str
        ``"closed_form"``, ``"quadrature"`` or ``"synthetic"``.
    alpha_max : float
        ``psi`` is finite on ``(0, alpha_max)``; ``inf`` if finite everywhere.

    Examples
    --------
    >>> psi = laplace_exponent(BlackScholes(a_R=0.3, sigma_R=0.4))
    >>> round(psi(1.0), 12)
    -0.14
    """
    func: Callable[[float], float]
    provenance: str
    alpha_max: float = math.inf

    def __call__(self, alpha: float) -> float:
        if alpha >= self.alpha_max:
            raise DivergentMgf(f"psi is infinite for alpha={alpha} >= {self.alpha_max}")
        return float(self.func(alpha))

    def slope_at_zero(self, step: float = SLOPE_STEP) -> float:
        """Forward difference ``psi(step) / step``."""
        return self(step) / step

    def convexity_violations(self, upper: float, n: int = 50, tol: float = 1e-9) -> list[float]:
        """Grid points on ``(0, upper]`` where the midpoint test fails."""
        upper = min(upper, self.alpha_max * (1.0 - 1e-6))
        grid = np.linspace(upper / n, upper, n)
        values = [self(a) for a in grid]
        bad = []
        for i in range(1, n - 1):
            if values[i] > 0.5 * (values[i - 1] + values[i + 1]) + tol:
                bad.append(float(grid[i]))
        return bad


def _exponential_rate(size) -> float | None:
    if isinstance(size, Exponential):
        return size.rate
    if isinstance(size, DoubleExponential) and size.p == 1.0:
        return size.rate_up
    return None


def _levy_log_moment(jumps: CompoundPoisson, alpha: float) -> float:
    """``E (1 + Y)^-alpha`` for return jumps ``Y > -1``."""
    if isinstance(jumps.size, PointMass):
        return (1.0 + jumps.size.value) ** -alpha
    eta = _exponential_rate(jumps.size)
    if eta is not None:
        # eta int_1^inf exp(-eta (u - 1)) u^-alpha du
        return eta * scaled_upper_gamma(1.0 - alpha, eta)
    return expect(jumps.size, lambda x: (1.0 + x) ** -alpha)


def laplace_exponent(returns: ReturnSpec) -> LaplaceExponent:
    """Laplace exponent of ``R_hat`` for a Levy return model.

    Raises
    ------
    Inapplicable
        For :class:`AdditiveIntegral` returns (``R_hat`` is not Levy).
    """
    if isinstance(returns, BlackScholes):
        a, s2 = returns.a_R, returns.sigma_R**2
        return LaplaceExponent(lambda al: -(a - 0.5 * s2) * al + 0.5 * s2 * al**2, "closed_form")

    if isinstance(returns, LevyJumpDiffusion):
        s2 = returns.sigma_R**2
        jumps = returns.jumps
        if jumps is None:
            a = returns.a_R
            return LaplaceExponent(lambda al: -(a - 0.5 * s2) * al + 0.5 * s2 * al**2, "closed_form")
        a0 = returns.a_R - jumps.small_mean()
        closed = isinstance(jumps.size, PointMass) or _exponential_rate(jumps.size) is not None
        provenance = "closed_form" if closed else "quadrature"
        return LaplaceExponent(
            lambda al: -(a0 - 0.5 * s2) * al + 0.5 * s2 * al**2 + jumps.rate * (_levy_log_moment(jumps, al) - 1.0),
            provenance,
        )

    if isinstance(returns, HatJumpDiffusion):
        a, s2 = returns.a_hat, returns.sigma_hat**2
        jumps = returns.jumps
        if jumps is None:
            return LaplaceExponent(lambda al: -a * al + 0.5 * s2 * al**2, "closed_form")
        provenance = "closed_form" if isinstance(jumps, CompoundPoisson) else "quadrature"
        return LaplaceExponent(
            lambda al: -a * al + 0.5 * s2 * al**2 + jumps.laplace_term(al),
            provenance,
            jumps.alpha_max,
        )

    raise Inapplicable(f"{type(returns).__name__} returns do not make R_hat a Levy process")


@dataclass
class BetaEstimate:
    """A critical exponent with the criterion that produced it.

    ``value`` is ``inf`` for an infinite exponent and ``None`` when the
    exponent is unknown or does not exist; ``status`` says which.
    """
    value: float | None
    status: str
    method: str
    criterion: str
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def find_beta_infinity(psi: LaplaceExponent) -> BetaEstimate:
    """Positive root of ``psi`` by bisection.

    Requires the safety loading ``psi'(0+) < 0`` (forward difference at
    ``1e-6``) and a point below ``alpha_max`` where ``psi > 0``.

    Raises
    ------
    RootAtDomainBoundary
        If ``psi < 0`` on all of ``(0, alpha_max)`` with ``alpha_max`` finite.

    Examples
    --------
    >>> psi = LaplaceExponent(lambda a: a * (a - 2.0), "synthetic")
    >>> find_beta_infinity(psi).value
    2.0
    """
    slope = psi.slope_at_zero()
    if slope >= 0:
        return BetaEstimate(
            None, "no_positive_root", "forward_difference",
            "psi'(0+) >= 0: no safety loading",
            {"slope_at_zero": slope},
        )

    lo, hi = SLOPE_STEP, 1.0
    candidates = []
    while hi < min(psi.alpha_max, _BRACKET_CAP):
        candidates.append(hi)
        hi *= 2.0
    if math.isfinite(psi.alpha_max):
        # approach the edge of the domain without touching it
        candidates.extend(psi.alpha_max * (1.0 - 2.0**-k) for k in range(1, 53))

    upper = None
    for b in candidates:
        if b <= lo:
            continue
        value = psi(b)
        if value == 0.0:
            return BetaEstimate(b, "finite", "bisection", "psi(beta) = 0",
                                {"bracket": [b, b], "iterations": 0, "residual": 0.0})
        if value > 0.0:
            upper = b
            break
        lo = b

    if upper is None:
        if math.isfinite(psi.alpha_max):
            raise RootAtDomainBoundary(
                f"psi < 0 on (0, {psi.alpha_max}); a root, if any, lies beyond the MGF domain"
            )
        return BetaEstimate(None, "no_positive_root", "bisection", "psi stays negative",
                            {"slope_at_zero": slope, "searched_up_to": lo})

    root, result = optimize.bisect(psi, lo, upper, xtol=ROOT_XTOL, full_output=True)
    residual = psi(root)
    logger.debug("bisection on [%g, %g]: root %.12g after %d iterations, residual %.3g",
                 lo, upper, root, result.iterations, residual)
    return BetaEstimate(
        float(root), "finite", "bisection", "psi(beta) = 0",
        {"bracket": [lo, upper], "iterations": result.iterations, "residual": residual,
         "slope_at_zero": slope, "provenance": psi.provenance},
    )


## Finite-horizon exponent


@dataclass
class JumpMomentCheck:
    """Finiteness of the big-jump exponential moment that decides ``E J_T(alpha)``."""
    alpha: float
    value: float
    finite: bool
    criterion: str


def jump_moment_finite(returns: ReturnSpec, alpha: float) -> JumpMomentCheck:
    """Evaluate the big-jump criterion for ``E J_T(alpha) < inf``.

    For Levy returns this is ``int 1{|ln(1+x)|>1} (1+x)^-alpha nu_R(dx)``;
    for hat models the equivalent ``int_{|x|>1} exp(-alpha x) nu_Rhat(dx)``.
    """
    if isinstance(returns, BlackScholes) or returns.jumps is None:
        return JumpMomentCheck(alpha, 0.0, True, "no jumps")
    if isinstance(returns, AdditiveIntegral):
        raise Inapplicable("use beta_T_classifier for additive returns")
    jumps = returns.jumps

    if isinstance(returns, LevyJumpDiffusion):
        criterion = "int 1{|ln(1+x)|>1} (1+x)^-alpha nu_R(dx)"
        value = jumps.integral(lambda x: (1.0 + x) ** -alpha, LOG_BIG)
        return JumpMomentCheck(alpha, value, math.isfinite(value), criterion)

    criterion = "int_{|x|>1} exp(-alpha x) nu_Rhat(dx)"
    try:
        value = jumps.exp_moment(alpha, BIG)
    except QuadratureFailure:
        return JumpMomentCheck(alpha, math.inf, False, criterion + " (quadrature diverged)")
    return JumpMomentCheck(alpha, value, math.isfinite(value), criterion)


def _segments(weight, upper: float) -> list[tuple[float, float]]:
    knots = [k for k in weight.knots if k < upper] + [upper]
    return list(zip(knots, knots[1:]))


def _integrate_in_time(func: Callable[[float], float], weight, upper: float) -> float:
    return sum(quad(func, a, b) for a, b in _segments(weight, upper))


_NEG_BIG = Region(((-math.inf, -1.0),), closed=False)


def _additive_lower_bound(returns: AdditiveIntegral, horizon: float) -> BetaEstimate:
    g = returns.weight
    criterion = "int_0^T int_{x<-1} exp(-alpha x g(s)) nu_L(dx) ds < inf"
    best = None
    for alpha in ADDITIVE_ALPHA_GRID:
        if returns.jumps is None:
            value = 0.0
        else:
            try:
                value = _integrate_in_time(
                    lambda s: returns.jumps.exp_moment(alpha * float(g(s)), _NEG_BIG),
                    g, horizon,
                )
            except QuadratureFailure:
                break
        if not math.isfinite(value):
            break
        best = alpha
    if best is None:
        return BetaEstimate(None, "unknown", "quadrature_grid", criterion,
                            {"grid": [ADDITIVE_ALPHA_GRID[0], ADDITIVE_ALPHA_GRID[-1]]})
    return BetaEstimate(best, "lower_bound", "quadrature_grid", criterion,
                        {"grid": [ADDITIVE_ALPHA_GRID[0], ADDITIVE_ALPHA_GRID[-1]], "horizon": horizon})


def beta_T_classifier(returns: ReturnSpec, horizon: float | None = None) -> BetaEstimate:
    """Finite-horizon critical exponent ``beta_T`` by model family.

    * Black-Scholes and Levy returns with jumps bounded away from ``-1``:
      ``inf``.
    * Hat models with compound Poisson jumps: the edge ``alpha_0`` of the
      domain of ``E exp(-alpha Y)``.
    * Tempered-stable tails: ``lambda_neg`` when ``lambda_neg >= 2``,
      otherwise unknown.
    * Additive integrals: largest ``alpha`` on a grid from 2 to 20 passing
      the exponential tail criterion, as a lower bound.
    """
    if isinstance(returns, BlackScholes):
        return BetaEstimate(math.inf, "infinite", "closed_form", "psi finite for every alpha")

    if isinstance(returns, LevyJumpDiffusion):
        # validated jump support lies in (-1, inf) with a lower bound > -1
        return BetaEstimate(math.inf, "infinite", "closed_form",
                            "int 1{|ln(1+x)|>1} (1+x)^-alpha nu_R(dx) finite for every alpha")

    if isinstance(returns, HatJumpDiffusion):
        jumps = returns.jumps
        if jumps is None:
            return BetaEstimate(math.inf, "infinite", "closed_form", "no jumps")
        if isinstance(jumps, TemperedStableTails):
            if jumps.lambda_neg >= 2.0:
                return BetaEstimate(
                    jumps.lambda_neg, "finite", "closed_form",
                    "negative tail tempering lambda_neg >= 2",
                    {"assumed": "E(I_T^beta_T) = inf, from divergence of the negative tail integral"},
                )
            return BetaEstimate(None, "unknown", "closed_form",
                                "lambda_neg < 2: finite-moment boundary not resolved")
        alpha0 = jumps.alpha_max
        if math.isinf(alpha0):
            return BetaEstimate(math.inf, "infinite", "closed_form", "E exp(-alpha Y) finite for every alpha")
        return BetaEstimate(alpha0, "finite", "closed_form", "E exp(-alpha Y) < inf iff alpha < alpha_0")

    if isinstance(returns, AdditiveIntegral):
        return _additive_lower_bound(returns, returns.weight.s_max if horizon is None else horizon)

    raise TypeError(f"unsupported return model {type(returns).__name__}")


@dataclass
class BetaReport:
    """``beta_T`` and ``beta_inf`` of a return model."""
    beta_T: BetaEstimate
    beta_inf: BetaEstimate
    diagnostics: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"beta_T": self.beta_T.to_dict(), "beta_inf": self.beta_inf.to_dict(),
                "diagnostics": list(self.diagnostics)}


def beta_report(returns: ReturnSpec, horizon: float | None = None) -> BetaReport:
    """Both critical exponents, with diagnostics instead of exceptions."""
    diagnostics = []
    beta_T = beta_T_classifier(returns, horizon)
    try:
        psi = laplace_exponent(returns)
    except Inapplicable as err:
        beta_inf = BetaEstimate(None, "unknown", "none", str(err))
    else:
        try:
            beta_inf = find_beta_infinity(psi)
        except RootAtDomainBoundary as err:
            beta_inf = BetaEstimate(None, "unknown", "bisection", str(err))
        upper = beta_inf.value * 2.0 if beta_inf.value else 10.0
        bad = psi.convexity_violations(upper)
        if bad:
            diagnostics.append(f"psi fails the midpoint convexity test at {bad[:5]}")
        if isinstance(returns, HatJumpDiffusion) and isinstance(returns.jumps, CompoundPoisson):
            jumps = returns.jumps
            mean_y = jumps.integral(lambda x: x) / jumps.rate
            drift = returns.a_hat + jumps.rate * mean_y
            diagnostics.append(
                f"safety loading: a_hat + gamma E(Y) = {drift:.6g} "
                f"({'holds' if drift > 0 else 'fails'}), psi'(0+) ~ {psi.slope_at_zero():.6g}"
            )
    return BetaReport(beta_T, beta_inf, diagnostics)


## Certain ruin


@dataclass
class CertainRuinReport:
    """Verdict of the long-run ruin conditions.

    ``conditions`` maps ``"i"``, ``"ii"``, ``"iii"`` to booleans (``None``
    when not evaluated).
    """
    verdict: str
    D: float | None
    p_used: float
    conditions: dict[str, bool | None]
    notes: list[str] = field(default_factory=list)
    values: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _business_is_brownian(business: BusinessSpec) -> str | None:
    if business.jumps is not None:
        return "business process has jumps"
    if business.a_X > 0:
        return "business drift a_X > 0"
    if business.a_X**2 + business.sigma_X <= 0:
        return "business process is identically zero"
    return None


def drift_limit(returns: ReturnSpec) -> float:
    """Almost-sure limit ``mu = lim R_hat_t / t`` of a Levy return model."""
    if isinstance(returns, BlackScholes):
        return returns.a_R - 0.5 * returns.sigma_R**2
    if isinstance(returns, LevyJumpDiffusion):
        d = returns.a_R - 0.5 * returns.sigma_R**2
        if returns.jumps is not None:
            d += returns.jumps.integral(math.log1p) - returns.jumps.integral(lambda x: x, SMALL)
        return d
    if isinstance(returns, HatJumpDiffusion):
        if returns.jumps is None:
            return returns.a_hat
        if isinstance(returns.jumps, CompoundPoisson):
            return returns.a_hat + returns.jumps.integral(lambda x: x)
        return returns.a_hat + returns.jumps.tail_first_moment()
    raise Inapplicable(f"{type(returns).__name__} returns are not Levy; use certain_ruin_additive")


def certain_ruin_levy(returns: ReturnSpec, business: BusinessSpec, p: float = DEFAULT_P) -> CertainRuinReport:
    """Ruin with probability one for Levy returns and Brownian business.

    Certain ruin is reported iff ``D < 0`` and the jumps of ``R_hat``
    larger than 1 have a finite ``p``-th absolute moment.

    Raises
    ------
    QuadratureFailure
        If a jump integral does not converge.
    """
    if not 1.0 < p < 2.0:
        raise ValueError(f"p must lie in (1, 2), got {p}")
    if isinstance(returns, AdditiveIntegral):
        return CertainRuinReport("inapplicable", None, p, {"i": None, "ii": None, "iii": None},
                                 ["additive returns: use certain_ruin_additive"])
    D = drift_limit(returns)
    reason = _business_is_brownian(business)

    jumps = getattr(returns, "jumps", None)
    if jumps is None:
        tail = 0.0
    elif isinstance(returns, HatJumpDiffusion):
        tail = jumps.integral(lambda x: abs(x) ** p, BIG)
    else:
        tail = jumps.integral(lambda x: abs(math.log1p(x)) ** p, LOG_BIG)
    conditions = {"i": True, "ii": math.isfinite(tail), "iii": D < 0}
    values = {"p_tail_integral": tail}

    if reason is not None:
        return CertainRuinReport("inapplicable", D, p, conditions, [reason], values)
    verdict = "certain_ruin" if conditions["ii"] and conditions["iii"] else "condition_not_met"
    logger.info("certain-ruin check: D = %.6g, verdict %s", D, verdict)
    return CertainRuinReport(verdict, D, p, conditions, [], values)


def certain_ruin_additive(
    returns: AdditiveIntegral,
    business: BusinessSpec,
    p: float = DEFAULT_P,
    horizon: float = DEFAULT_HORIZON,
) -> CertainRuinReport:
    """Ruin with probability one for ``R = int g dL`` and Brownian business.

    ``g`` is continued by ``g(S_max)`` beyond its table. Conditions are
    evaluated by quadrature on ``[0, S_max]`` plus closed-form tails. The
    drift limit ``D`` is the limit of the time-averaged drift of ``R_hat``:
    exact when the table ends before a tenth of ``horizon``, otherwise the
    average at ``horizon`` compared with the one at ``horizon / 10``.

    Raises
    ------
    HorizonInconclusive
        If the two averages differ by more than ``1e-4`` relative.
    """
    if not 1.0 < p < 2.0:
        raise ValueError(f"p must lie in (1, 2), got {p}")
    g = returns.weight
    jumps = returns.jumps
    s_max, g_inf = g.s_max, g.tail_value
    reason = _business_is_brownian(business)

    small = 0.0 if jumps is None else jumps.integral(lambda x: x, SMALL)

    def jump_drift(gs: float) -> float:
        if jumps is None:
            return 0.0
        return jumps.integral(lambda x: math.log1p(gs * x)) - gs * small

    def average(S: float) -> float:
        smooth = returns.a_L * g.integral(0.0, S, 1, extend=True) \
            - 0.5 * returns.sigma_L**2 * g.integral(0.0, S, 2, extend=True)
        if jumps is not None:
            inside = _integrate_in_time(lambda s: jump_drift(float(g(s))), g, min(S, s_max))
            smooth += inside + max(S - s_max, 0.0) * jump_drift(g_inf)
        return smooth / S

    notes = []
    values = {}
    if s_max <= horizon / 10.0:
        D = returns.a_L * g_inf - 0.5 * returns.sigma_L**2 * g_inf**2 + jump_drift(g_inf)
        notes.append("g eventually constant: D from the tail value")
    else:
        far, near = average(horizon), average(horizon / 10.0)
        values.update(average_at_horizon=far, average_at_tenth=near)
        if abs(far - near) > HORIZON_RTOL * abs(far):
            raise HorizonInconclusive(
                f"time-averaged drift moved from {near:.6g} to {far:.6g} over the last decade of S"
            )
        D = far

    cont = returns.sigma_L**2 * (
        _integrate_in_time(lambda s: float(g(s)) ** 2 / (1.0 + s) ** 2, g, s_max) + g_inf**2 / (1.0 + s_max)
    )

    def log_jump_mass(gs: float) -> float:
        if jumps is None:
            return 0.0

        def f(x):
            ell = abs(math.log1p(gs * x))
            return min(ell * ell, ell**p)
        return jumps.integral(f)

    jump_cond = 0.0
    if jumps is not None:
        jump_cond = _integrate_in_time(lambda s: log_jump_mass(float(g(s))) / (1.0 + s) ** p, g, s_max) \
            + log_jump_mass(g_inf) * (1.0 + s_max) ** (1.0 - p) / (p - 1.0)
    values.update(continuous_integral=cont, jump_integral=jump_cond)
    conditions = {"i": math.isfinite(cont), "ii": math.isfinite(jump_cond), "iii": D < 0}

    if reason is not None:
        return CertainRuinReport("inapplicable", D, p, conditions, notes + [reason], values)
    ok = all(conditions.values())
    return CertainRuinReport("certain_ruin" if ok else "condition_not_met", D, p, conditions, notes, values)


## Scaling


def scale_returns(returns: ReturnSpec, k: float) -> ReturnSpec:
    """Return model whose exponential transform is ``k * R_hat``.

    Black-Scholes stays Black-Scholes; hat models scale drift, volatility
    and jump law together. Levy models with jumps have no closed family
    under scaling and raise :class:`Inapplicable`.
    """
    if not k > 0:
        raise ValueError(f"k must be > 0, got {k}")
    if isinstance(returns, BlackScholes) or (isinstance(returns, LevyJumpDiffusion) and returns.jumps is None):
        a, s = (returns.a_R, returns.sigma_R)
        if s == 0:
            return LevyJumpDiffusion(k * a, 0.0)
        sk = k * s
        return type(returns)(k * (a - 0.5 * s * s) + 0.5 * sk * sk, sk)
    if isinstance(returns, HatJumpDiffusion):
        jumps = returns.jumps
        a = k * returns.a_hat
        if isinstance(jumps, TemperedStableTails) and k != 1.0:
            # the truncation 1{|x| <= 1} moves under x -> kx
            if k > 1.0:
                band = Region(((-1.0, -1.0 / k), (1.0 / k, 1.0)), closed=True)
                a -= jumps.integral(lambda x: k * x, band)
            else:
                band = Region(((-1.0 / k, -1.0), (1.0, 1.0 / k)), closed=True)
                a += jumps.integral(lambda x: k * x, band)
        return HatJumpDiffusion(a, k * returns.sigma_hat, None if jumps is None else jumps.scaled(k))
    raise Inapplicable(f"{type(returns).__name__} with jumps is not closed under scaling")


## Asymptotic optimality


@dataclass
class OptimalityConditions:
    """Hypotheses under which the ruin probability decays like ``y^-beta_T``."""
    beta_in_range: bool
    tail_integrable: bool
    safety: bool
    notes: list[str] = field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        return self.beta_in_range and self.tail_integrable and self.safety

    def to_dict(self) -> dict:
        return {**asdict(self), "all_hold": self.all_hold}


def asymptotic_optimality_conditions(business: BusinessSpec, beta_T: BetaEstimate) -> OptimalityConditions:
    """Check ``1 <= beta_T < inf``, ``int_{|x|>1}|x| nu_X < inf`` and
    ``delta_X < 0 or sigma_X > 0``.

    ``E(I_T^beta_T) = inf`` is part of the hypotheses but is not decidable
    here; it is recorded as assumed.
    """
    in_range = beta_T.value is not None and 1.0 <= beta_T.value < math.inf
    if business.jumps is None:
        tail = 0.0
    else:
        try:
            tail = business.jumps.integral(abs, BIG)
        except QuadratureFailure:
            tail = math.inf
    tail_ok = math.isfinite(tail)
    safety = business.sigma_X > 0 or (tail_ok and delta_X(business) < 0)
    notes = ["E(I_T^beta_T) = inf assumed, not verified"]
    return OptimalityConditions(in_range, tail_ok, safety, notes)
