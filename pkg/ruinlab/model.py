"""Validated, immutable specifications of the business process, the return
process, the time grid and the Monte Carlo experiment.

Nothing here draws random numbers. Every type checks its own invariants in
``__post_init__`` and raises :class:`~ruinlab._errors.SpecError`; use
:func:`validate` to collect all problems of a configuration tree at once.
"""

import functools
import json
import logging
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Callable, ClassVar, Mapping

import numpy as np

from ._errors import DivergentTailIntegral, QuadratureFailure, SpecError
from ._jumps import (
    ALL,
    BIG,
    SIZE_KINDS,
    SMALL,
    JumpSize,
    Region,
    TemperedSide,
    expect,
    size_kind,
)
from ._weights import WeightTable

logger = logging.getLogger(__name__)

DEFAULT_CUTOFF = 1e-3


## Jump families


@dataclass(frozen=True)
class CompoundPoisson:
    """Finite-activity jumps: Poisson arrivals at ``rate`` with iid sizes.

    Parameters
    ----------
    rate : float
        Expected number of jumps per unit time, ``> 0``.
    size : Exponential, DoubleExponential, Gaussian or PointMass
        Law of a single jump.

    Examples
    --------
    >>> from ruinlab import Exponential
    >>> round(CompoundPoisson(rate=2.0, size=Exponential(1.0)).tail_first_moment(), 4)
    1.4715
    """
    rate: float
    size: JumpSize

    kind: ClassVar[str] = "compound_poisson"
    finite_activity: ClassVar[bool] = True

    def __post_init__(self):
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise SpecError(f"rate must be > 0, got {self.rate}", "rate")
        if not isinstance(self.size, tuple(SIZE_KINDS.values())):
            raise SpecError(f"unsupported jump-size law {self.size!r}", "size")

    @property
    def support(self) -> tuple[float, float]:
        return self.size.support

    @property
    def alpha_max(self) -> float:
        """Supremum of ``alpha`` with ``E exp(-alpha Y)`` finite."""
        return self.size.alpha_max

    def integral(self, func: Callable[[float], float], region: Region = ALL) -> float:
        """``int_region func(x) nu(dx)``."""
        return self.rate * expect(self.size, func, region)

    def tail_first_moment(self) -> float:
        """``int_{|x|>1} x nu(dx)``, closed form."""
        return self.rate * self.size.tail_mean()

    @functools.lru_cache(maxsize=64)
    def small_mean(self, eps: float = DEFAULT_CUTOFF) -> float:
        """``int x nu(dx)`` over simulated jumps with ``|x| <= 1``."""
        return self.integral(lambda x: x, SMALL)

    def laplace_term(self, alpha: float) -> float:
        """``gamma (E exp(-alpha Y) - 1)``: contribution of a raw jump sum."""
        return self.rate * (self.size.mgf_neg(alpha) - 1.0)

    def exp_moment(self, alpha: float, region: Region = ALL) -> float:
        """``int_region exp(-alpha x) nu(dx)``."""
        return self.rate * self.size.exp_moment(alpha, region)

    def activity(self, eps: float = DEFAULT_CUTOFF) -> float:
        return self.rate

    def sample(self, rng: np.random.Generator, horizon: float, eps: float = DEFAULT_CUTOFF):
        """Sorted jump epochs on ``(0, horizon]`` and their sizes."""
        n = rng.poisson(self.rate * horizon)
        times = np.sort(rng.uniform(0.0, horizon, n))
        return times, self.size.sample(rng, n)

    def scaled(self, k: float) -> "CompoundPoisson":
        return CompoundPoisson(self.rate, self.size.scaled(k))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "rate": self.rate,
            "size": {"kind": size_kind(self.size), **asdict(self.size)},
        }


@dataclass(frozen=True)
class TemperedStableTails:
    """Two-sided tempered-stable Levy measure.

    The density is ``c_neg |x|^-(1+alpha_neg) exp(-lambda_neg |x|)`` for
    ``x < 0`` and ``c_pos x^-(1+alpha_pos) exp(-lambda_pos x)`` for ``x > 0``.
    The Kou model is the limit ``alpha -> -1``.

    A side with negative index has finite activity and is simulated exactly
    (Gamma jump sizes). Sides with index in ``[0, 2)`` are simulated by
    keeping jumps larger than a cut-off ``eps`` and compensating the dropped
    part in the drift.
    """
    c_neg: float
    c_pos: float
    lambda_neg: float
    lambda_pos: float
    alpha_neg: float
    alpha_pos: float

    kind: ClassVar[str] = "tempered_stable"

    def __post_init__(self):
        for name in ("c_neg", "c_pos", "lambda_neg", "lambda_pos"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise SpecError(f"must be > 0, got {value}", name)
        for name in ("alpha_neg", "alpha_pos"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value < 2):
                raise SpecError(f"stability index must be < 2, got {value}", name)
        try:
            mass = self.integral(lambda x: min(x * x, 1.0))
        except QuadratureFailure as err:
            raise SpecError(f"int min(x^2, 1) nu(dx) did not converge: {err}") from err
        if not math.isfinite(mass):
            raise SpecError("int min(x^2, 1) nu(dx) is infinite")

    @property
    def sides(self) -> tuple[TemperedSide, TemperedSide]:
        return (
            TemperedSide(self.c_neg, self.lambda_neg, self.alpha_neg, -1.0),
            TemperedSide(self.c_pos, self.lambda_pos, self.alpha_pos, 1.0),
        )

    @property
    def finite_activity(self) -> bool:
        return self.alpha_neg < 0 and self.alpha_pos < 0

    @property
    def support(self) -> tuple[float, float]:
        return -math.inf, math.inf

    @property
    def alpha_max(self) -> float:
        return self.lambda_neg

    def integral(self, func: Callable[[float], float], region: Region = ALL) -> float:
        total = 0.0
        for side in self.sides:
            for lo, hi in region.intervals:
                # map the x-interval to |x| on this side
                if side.sign > 0:
                    a, b = max(lo, 0.0), hi
                else:
                    a, b = max(-hi, 0.0), -lo
                if a < b:
                    total += side.integral(func, a, b)
        return total

    def tail_first_moment(self) -> float:
        try:
            return self.integral(lambda x: x, BIG)
        except QuadratureFailure as err:
            raise DivergentTailIntegral(str(err)) from err

    @functools.lru_cache(maxsize=64)
    def small_mean(self, eps: float = DEFAULT_CUTOFF) -> float:
        return sum(side.integral(lambda x: x, side.cutoff(eps), 1.0) for side in self.sides)

    def laplace_term(self, alpha: float) -> float:
        """``int (exp(-alpha x) - 1 + alpha x 1{|x|<=1}) nu(dx)``."""
        small = self.integral(lambda x: math.expm1(-alpha * x) + alpha * x, SMALL)
        return small + self.exp_moment(alpha, BIG) - self.integral(lambda x: 1.0, BIG)

    def exp_moment(self, alpha: float, region: Region = ALL) -> float:
        """``int_region exp(-alpha x) nu(dx)``; infinite past ``alpha_max``."""
        total = 0.0
        for side in self.sides:
            for lo, hi in region.intervals:
                if side.sign > 0:
                    a, b = max(lo, 0.0), hi
                else:
                    a, b = max(-hi, 0.0), -lo
                if a < b:
                    total += side.exp_integral(alpha, a, b)
        return total

    def activity(self, eps: float = DEFAULT_CUTOFF) -> float:
        return sum(side.rate(eps) for side in self.sides)

    def sample(self, rng: np.random.Generator, horizon: float, eps: float = DEFAULT_CUTOFF):
        parts = [side.sample(rng, horizon, eps) for side in self.sides]
        times = np.concatenate([p[0] for p in parts])
        sizes = np.concatenate([p[1] for p in parts])
        order = np.argsort(times, kind="stable")
        return times[order], sizes[order]

    def scaled(self, k: float) -> "TemperedStableTails":
        """Levy measure of ``k * x``."""
        return TemperedStableTails(
            self.c_neg * k**self.alpha_neg,
            self.c_pos * k**self.alpha_pos,
            self.lambda_neg / k,
            self.lambda_pos / k,
            self.alpha_neg,
            self.alpha_pos,
        )

    def to_dict(self) -> dict:
        return {"kind": self.kind, **asdict(self)}


JumpFamily = CompoundPoisson | TemperedStableTails


def _integral(jumps: JumpFamily | None, func, region: Region = ALL) -> float:
    return 0.0 if jumps is None else jumps.integral(func, region)


## Business process


@dataclass(frozen=True)
class BusinessSpec:
    """Levy triplet ``(a_X, sigma_X^2, nu_X)`` of the business process.

    Parameters
    ----------
    a_X : float
        Triplet drift, truncation ``1{|x| <= 1}``.
    sigma_X : float
        Diffusion coefficient, ``>= 0``.
    jumps : CompoundPoisson, TemperedStableTails or None
        Levy measure ``nu_X``; must have finite activity.
    """
    a_X: float
    sigma_X: float = 0.0
    jumps: JumpFamily | None = None

    def __post_init__(self):
        if not math.isfinite(self.a_X):
            raise SpecError(f"drift must be finite, got {self.a_X}", "drift")
        if not (math.isfinite(self.sigma_X) and self.sigma_X >= 0):
            raise SpecError(f"sigma must be >= 0, got {self.sigma_X}", "sigma")
        if self.jumps is not None and not self.jumps.finite_activity:
            raise SpecError("infinite-activity business jumps unsupported", "jumps")

    def to_dict(self) -> dict:
        return {
            "drift": self.a_X,
            "sigma": self.sigma_X,
            "jumps": None if self.jumps is None else self.jumps.to_dict(),
        }


def delta_X(spec: BusinessSpec) -> float:
    """Compensated drift ``a_X + int_{|x|>1} x nu_X(dx)``.

    Closed form for compound Poisson jumps, adaptive quadrature for
    tempered-stable tails.

    Raises
    ------
    DivergentTailIntegral
        If the tail integral does not converge.

    Examples
    --------
    >>> delta_X(BusinessSpec(a_X=-1.0))
    -1.0
    """
    if spec.jumps is None:
        return spec.a_X
    return spec.a_X + spec.jumps.tail_first_moment()


## Return process


def _check_sigma(value: float, strict: bool = False) -> None:
    ok = value > 0 if strict else value >= 0
    if not (math.isfinite(value) and ok):
        raise SpecError(f"sigma must be {'>' if strict else '>='} 0, got {value}", "sigma")


def _check_drift(value: float) -> None:
    if not math.isfinite(value):
        raise SpecError(f"drift must be finite, got {value}", "drift")


@dataclass(frozen=True)
class BlackScholes:
    """``R_t = a_R t + sigma_R W_t``."""
    a_R: float
    sigma_R: float

    kind: ClassVar[str] = "black_scholes"

    def __post_init__(self):
        _check_drift(self.a_R)
        _check_sigma(self.sigma_R, strict=True)

    @property
    def jumps(self) -> None:
        return None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "drift": self.a_R, "sigma": self.sigma_R}


@dataclass(frozen=True)
class LevyJumpDiffusion:
    """Levy return process with triplet ``(a_R, sigma_R^2, nu_R)``.

    ``a_R`` is the triplet drift with truncation ``1{|x| <= 1}``. Every
    jump of ``R`` must exceed ``-1``.
    """
    a_R: float
    sigma_R: float = 0.0
    jumps: CompoundPoisson | None = None

    kind: ClassVar[str] = "levy_jump_diffusion"

    def __post_init__(self):
        _check_drift(self.a_R)
        _check_sigma(self.sigma_R)
        if self.jumps is not None:
            if not isinstance(self.jumps, CompoundPoisson):
                raise SpecError("jump support must lie in (-1, inf)", "jumps")
            if not self.jumps.support[0] > -1.0:
                raise SpecError("jump support must lie in (-1, inf)", "jumps")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "drift": self.a_R,
            "sigma": self.sigma_R,
            "jumps": None if self.jumps is None else self.jumps.to_dict(),
        }


@dataclass(frozen=True)
class HatJumpDiffusion:
    """Model for the exponential transform ``R_hat = ln E(R)`` directly.

    With compound Poisson jumps ``R_hat_t = a_hat t + sigma_hat W_t +
    sum Y_k`` (raw jump sum). With tempered-stable tails ``a_hat`` is the
    triplet drift. Jumps of ``R`` are ``exp(Y) - 1 > -1`` automatically.
    """
    a_hat: float
    sigma_hat: float = 0.0
    jumps: JumpFamily | None = None

    kind: ClassVar[str] = "hat_jump_diffusion"

    def __post_init__(self):
        _check_drift(self.a_hat)
        _check_sigma(self.sigma_hat)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "drift": self.a_hat,
            "sigma": self.sigma_hat,
            "jumps": None if self.jumps is None else self.jumps.to_dict(),
        }


@dataclass(frozen=True)
class AdditiveIntegral:
    """``R_t = int_0^t g(s) dL_s`` for a Levy process ``L``.

    ``L`` has triplet ``(a_L, sigma_L^2, nu_L)`` with finite-activity jumps;
    ``g`` is a positive piecewise-linear table. Jumps ``g(s) dL_s`` must
    exceed ``-1`` for every ``s`` on the table.
    """
    weight: WeightTable
    a_L: float
    sigma_L: float = 0.0
    jumps: JumpFamily | None = None

    kind: ClassVar[str] = "additive_integral"

    def __post_init__(self):
        _check_drift(self.a_L)
        _check_sigma(self.sigma_L)
        if self.jumps is not None:
            if not self.jumps.finite_activity:
                raise SpecError("jumps of L must have finite activity", "jumps")
            lo = self.jumps.support[0]
            if lo < 0 and not self.weight.max_value * lo > -1.0:
                raise SpecError("jump support of g(s) dL_s must lie in (-1, inf)", "jumps")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "weight": self.weight.to_dict(),
            "drift": self.a_L,
            "sigma": self.sigma_L,
            "jumps": None if self.jumps is None else self.jumps.to_dict(),
        }


ReturnSpec = BlackScholes | LevyJumpDiffusion | HatJumpDiffusion | AdditiveIntegral

RETURN_KINDS: dict[str, type] = {
    cls.kind: cls for cls in (BlackScholes, LevyJumpDiffusion, HatJumpDiffusion, AdditiveIntegral)
}


## Grid and experiment


@dataclass(frozen=True)
class GridSpec:
    """Uniform base grid on ``[0, T]``, optionally merged with jump epochs."""
    T: float
    n_steps: int
    jump_adapted: bool = True

    def __post_init__(self):
        if not (math.isfinite(self.T) and self.T > 0):
            raise SpecError(f"T must be > 0, got {self.T}", "T")
        if isinstance(self.n_steps, bool) or not isinstance(self.n_steps, (int, np.integer)) or self.n_steps < 1:
            raise SpecError(f"n_steps >= 1 required, got {self.n_steps}", "n_steps")

    @property
    def dt(self) -> float:
        return self.T / self.n_steps

    def to_dict(self) -> dict:
        return {"T": self.T, "n_steps": int(self.n_steps), "jump_adapted": self.jump_adapted}


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything one Monte Carlo ruin experiment needs.

    Parameters
    ----------
    business : BusinessSpec
    returns : ReturnSpec
    grid : GridSpec
    initial_capitals : tuple of float
        Strictly positive, strictly increasing capitals ``y``.
    n_paths : int
        Number of simulated paths, ``>= 1``.
    seed : int
        Root seed, 64-bit unsigned.
    alpha_list : tuple of float
        Exponents ``alpha > 0`` for which ``J_t(alpha)`` is tracked.
    cutoff : float
        Small-jump cut-off for infinite-activity tempered tails.
    """
    business: BusinessSpec
    returns: ReturnSpec
    grid: GridSpec
    initial_capitals: tuple[float, ...]
    n_paths: int
    seed: int = 42
    alpha_list: tuple[float, ...] = (2.0,)
    cutoff: float = DEFAULT_CUTOFF

    def __post_init__(self):
        object.__setattr__(self, "initial_capitals", tuple(float(y) for y in self.initial_capitals))
        object.__setattr__(self, "alpha_list", tuple(float(a) for a in self.alpha_list))
        caps = self.initial_capitals
        if not caps:
            raise SpecError("at least one initial capital required", "capitals")
        if not all(math.isfinite(y) and y > 0 for y in caps):
            raise SpecError("initial capitals must be > 0", "capitals")
        if any(b <= a for a, b in zip(caps, caps[1:])):
            raise SpecError("initial capitals must be sorted ascending", "capitals")
        if not all(math.isfinite(a) and a > 0 for a in self.alpha_list):
            raise SpecError("alphas must be > 0", "alphas")
        if isinstance(self.n_paths, bool) or not isinstance(self.n_paths, (int, np.integer)) or self.n_paths < 1:
            raise SpecError(f"n_paths ≥ 1 required, got {self.n_paths}", "mc.n_paths")
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < 2**64:
            raise SpecError(f"seed must be a 64-bit unsigned integer, got {self.seed}", "mc.seed")
        if not (0 < self.cutoff < 1):
            raise SpecError(f"cutoff must lie in (0, 1), got {self.cutoff}", "mc.cutoff")
        if isinstance(self.returns, AdditiveIntegral) and self.grid.T > self.returns.weight.s_max:
            raise SpecError(
                f"g is tabulated up to {self.returns.weight.s_max} < T = {self.grid.T}",
                "returns.weight",
            )

    @property
    def tracked_alphas(self) -> tuple[float, ...]:
        """``alpha_list`` plus ``2`` (``J_t`` itself), sorted and unique."""
        return tuple(sorted(set(self.alpha_list) | {2.0}))

    def to_dict(self) -> dict[str, Any]:
        return {
            "business": self.business.to_dict(),
            "returns": self.returns.to_dict(),
            "grid": self.grid.to_dict(),
            "mc": {"n_paths": int(self.n_paths), "seed": int(self.seed), "cutoff": self.cutoff},
            "capitals": list(self.initial_capitals),
            "alphas": list(self.alpha_list),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, tree: Mapping[str, Any]) -> "ExperimentSpec":
        mc = tree.get("mc", {})
        return _scoped("", lambda: cls(
            business=business_from_dict(_require(tree, "business")),
            returns=returns_from_dict(_require(tree, "returns")),
            grid=grid_from_dict(_require(tree, "grid")),
            initial_capitals=tuple(_require(tree, "capitals")),
            n_paths=_require(mc, "n_paths", "mc"),
            seed=mc.get("seed", 42),
            alpha_list=tuple(tree.get("alphas", (2.0,))),
            cutoff=mc.get("cutoff", DEFAULT_CUTOFF),
        ))


## Dict parsing


def _require(tree: Mapping[str, Any], key: str, prefix: str = "") -> Any:
    if not isinstance(tree, Mapping) or key not in tree:
        raise SpecError("missing required key", f"{prefix}.{key}" if prefix else key)
    return tree[key]


def _scoped(prefix: str, build: Callable[[], Any]) -> Any:
    """Run ``build`` and prefix the key path of any SpecError it raises."""
    try:
        return build()
    except SpecError as err:
        if not prefix:
            raise
        key = f"{prefix}.{err.key}" if err.key else prefix
        raise SpecError(err.message, key) from err
    except (TypeError, KeyError, AttributeError) as err:
        raise SpecError(f"malformed entry ({err})", prefix or None) from err


def jumps_from_dict(tree: Mapping[str, Any] | None, prefix: str = "jumps") -> JumpFamily | None:
    if tree is None:
        return None

    def build():
        kind = _require(tree, "kind")
        if kind == CompoundPoisson.kind:
            size_tree = dict(_require(tree, "size"))
            size_cls = SIZE_KINDS.get(size_tree.pop("kind", None))
            if size_cls is None:
                raise SpecError(f"unknown jump-size kind, expected one of {sorted(SIZE_KINDS)}", "size.kind")
            size = _scoped("size", lambda: size_cls(**size_tree))
            return CompoundPoisson(rate=_require(tree, "rate"), size=size)
        if kind == TemperedStableTails.kind:
            names = [f.name for f in fields(TemperedStableTails)]
            return TemperedStableTails(**{n: _require(tree, n) for n in names})
        raise SpecError(f"unknown jump family {kind!r}", "kind")

    return _scoped(prefix, build)


def business_from_dict(tree: Mapping[str, Any]) -> BusinessSpec:
    return _scoped("business", lambda: BusinessSpec(
        a_X=_require(tree, "drift"),
        sigma_X=tree.get("sigma", 0.0),
        jumps=jumps_from_dict(tree.get("jumps"), "jumps"),
    ))


def returns_from_dict(tree: Mapping[str, Any]) -> ReturnSpec:
    def build():
        kind = _require(tree, "kind")
        if kind not in RETURN_KINDS:
            raise SpecError(f"unknown return model, expected one of {sorted(RETURN_KINDS)}", "kind")
        drift = _require(tree, "drift")
        sigma = tree.get("sigma", 0.0)
        jumps = jumps_from_dict(tree.get("jumps"), "jumps")
        if kind == BlackScholes.kind:
            return BlackScholes(drift, sigma)
        if kind == LevyJumpDiffusion.kind:
            return LevyJumpDiffusion(drift, sigma, jumps)
        if kind == HatJumpDiffusion.kind:
            return HatJumpDiffusion(drift, sigma, jumps)
        w = _require(tree, "weight")
        weight = _scoped("weight", lambda: WeightTable(tuple(w["knots"]), tuple(w["values"])))
        return AdditiveIntegral(weight, drift, sigma, jumps)

    return _scoped("returns", build)


def grid_from_dict(tree: Mapping[str, Any]) -> GridSpec:
    return _scoped("grid", lambda: GridSpec(
        T=_require(tree, "T"),
        n_steps=_require(tree, "n_steps"),
        jump_adapted=tree.get("jump_adapted", True),
    ))


## Validation


@dataclass(frozen=True)
class Diagnostic:
    key: str
    message: str


@dataclass
class ValidationReport:
    """Outcome of :func:`validate`; ``passed`` iff there are no diagnostics."""
    diagnostics: list[Diagnostic] = field(default_factory=list)
    spec: ExperimentSpec | None = None

    @property
    def passed(self) -> bool:
        return not self.diagnostics

    def add(self, err: SpecError) -> None:
        self.diagnostics.append(Diagnostic(err.key or "", err.message))

    def to_dict(self) -> dict:
        return {"passed": self.passed, "diagnostics": [asdict(d) for d in self.diagnostics]}


def validate(spec: ExperimentSpec | Mapping[str, Any]) -> ValidationReport:
    """Check an experiment and report every violated invariant.

    ``spec`` may be a constructed :class:`ExperimentSpec` (valid by
    construction, so the report passes) or a configuration tree, in which
    case each section is parsed independently so that one bad section does
    not hide the others. Never raises.

    Examples
    --------
    >>> tree = {"business": {"drift": -1.0}, "returns": {"kind": "levy_jump_diffusion",
    ...     "drift": 0.1, "jumps": {"kind": "compound_poisson", "rate": 1.0,
    ...     "size": {"kind": "point_mass", "value": -1.5}}},
    ...     "grid": {"T": 1.0, "n_steps": 10}, "capitals": [1.0], "mc": {"n_paths": 10}}
    >>> validate(tree).passed
    False
    """
    report = ValidationReport()
    if isinstance(spec, ExperimentSpec):
        report.spec = spec
        return report

    if not isinstance(spec, Mapping):
        report.add(SpecError(f"expected a mapping, got {type(spec).__name__}"))
        return report

    sections_ok = True
    for key, parse in (("business", business_from_dict), ("returns", returns_from_dict), ("grid", grid_from_dict)):
        try:
            parse(_require(spec, key))
        except SpecError as err:
            report.add(err)
            sections_ok = False

    mc = spec.get("mc", {})
    try:
        n_paths = _require(mc, "n_paths", "mc")
        if isinstance(n_paths, bool) or not isinstance(n_paths, int) or n_paths < 1:
            raise SpecError(f"n_paths ≥ 1 required, got {n_paths}", "mc.n_paths")
    except SpecError as err:
        report.add(err)
        sections_ok = False

    if sections_ok:
        try:
            report.spec = ExperimentSpec.from_dict(spec)
        except SpecError as err:
            report.add(err)
    for d in report.diagnostics:
        logger.debug("validation: %s: %s", d.key, d.message)
    return report

