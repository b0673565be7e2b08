"""Jump-size laws and Levy-measure integrals used by the jump families."""

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, special, stats

from ._errors import DivergentMgf, QuadratureFailure, SpecError

QUAD_TOL = 1e-10


@dataclass(frozen=True)
class Region:
    """Union of intervals of the real line.

    ``closed`` decides whether interval end points belong to the region; it
    only matters for atoms (point masses).
    """
    intervals: tuple[tuple[float, float], ...]
    closed: bool

    def contains(self, x: float) -> bool:
        if self.closed:
            return any(lo <= x <= hi for lo, hi in self.intervals)
        return any(lo < x < hi for lo, hi in self.intervals)


ALL = Region(((-math.inf, math.inf),), closed=True)
SMALL = Region(((-1.0, 1.0),), closed=True)
BIG = Region(((-math.inf, -1.0), (1.0, math.inf)), closed=False)
# |ln(1+x)| <= 1 and |ln(1+x)| > 1, for return jumps x > -1
LOG_SMALL = Region(((math.exp(-1.0) - 1.0, math.e - 1.0),), closed=True)
LOG_BIG = Region(((-1.0, math.exp(-1.0) - 1.0), (math.e - 1.0, math.inf)), closed=False)


def quad(func: Callable[[float], float], a: float, b: float) -> float:
    """``scipy.integrate.quad`` to the package tolerance; raise on failure."""
    if a >= b:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, abserr = integrate.quad(func, a, b, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=500)
        except integrate.IntegrationWarning as err:
            raise QuadratureFailure(f"quadrature on [{a}, {b}] failed: {err}") from err
    if not math.isfinite(value) or abserr > max(1e-6, 1e-6 * abs(value)):
        raise QuadratureFailure(f"quadrature on [{a}, {b}] did not converge (error {abserr:.3g})")
    return value


def scaled_upper_gamma(s: float, x: float) -> float:
    """``exp(x) x^-s Gamma(s, x)`` for real ``s`` and ``x > 0``.

    Non-positive ``s`` is reached from ``(0, 1]`` (or from ``E1`` at ``s = 0``)
    with ``f(s) = (x f(s + 1) - 1) / s``.
    """
    n = max(0, math.ceil(-s))
    s0 = s + n
    if s0 == 0.0:
        f = math.exp(x) * special.exp1(x)
    else:
        f = math.exp(x) * x**-s0 * special.gamma(s0) * special.gammaincc(s0, x)
    for _ in range(n):
        s0 -= 1.0
        f = (x * f - 1.0) / s0
    return float(f)


def _exp_segment(k: float, a: float, b: float) -> float:
    """``int_a^b exp(-k e) de`` for ``0 <= a < b <= inf``."""
    if math.isinf(b):
        return math.exp(-k * a) / k if k > 0.0 else math.inf
    if k == 0.0:
        return b - a
    return -math.exp(-k * a) * math.expm1(-k * (b - a)) / k


def _exp_tilted(rate: float, sign: float, alpha: float, region: Region) -> float:
    """``E(exp(-alpha Y) 1{Y in region})`` for ``Y = sign * E``, ``E ~ Exp(rate)``."""
    k = rate + sign * alpha
    total = 0.0
    for lo, hi in region.intervals:
        a, b = (lo, hi) if sign > 0 else (-hi, -lo)
        a = max(a, 0.0)
        if a < b:
            total += rate * _exp_segment(k, a, b)
    return total


## Jump-size laws


@dataclass(frozen=True)
class Exponential:
    """Positive jumps with density ``rate * exp(-rate * x)``."""
    rate: float

    def __post_init__(self):
        if not self.rate > 0:
            raise SpecError(f"rate must be > 0, got {self.rate}", "rate")

    @property
    def support(self) -> tuple[float, float]:
        return 0.0, math.inf

    @property
    def alpha_max(self) -> float:
        return math.inf

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.exponential(1.0 / self.rate, n)

    def _components(self):
        return [(1.0, 1.0, stats.expon(scale=1.0 / self.rate))]

    def mgf_neg(self, alpha: float) -> float:
        """``E exp(-alpha Y)``."""
        return self.rate / (self.rate + alpha)

    def exp_moment(self, alpha: float, region: Region = ALL) -> float:
        """``E(exp(-alpha Y) 1{Y in region})``."""
        return _exp_tilted(self.rate, 1.0, alpha, region)

    def tail_mean(self) -> float:
        """``E(Y 1{|Y| > 1})`` in closed form."""
        return math.exp(-self.rate) * (1.0 + 1.0 / self.rate)

    def scaled(self, k: float) -> "Exponential":
        return Exponential(self.rate / k)


@dataclass(frozen=True)
class DoubleExponential:
    """Kou-type jumps: positive ``Exp(rate_up)`` with probability ``p``,
    otherwise negative ``-Exp(rate_down)``."""
    p: float
    rate_up: float
    rate_down: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise SpecError(f"mixing probability must lie in [0, 1], got {self.p}", "p")
        if not (self.rate_up > 0 and self.rate_down > 0):
            raise SpecError("rates must be > 0", "rate_up" if self.rate_up <= 0 else "rate_down")

    @property
    def support(self) -> tuple[float, float]:
        lo = -math.inf if self.p < 1.0 else 0.0
        hi = math.inf if self.p > 0.0 else 0.0
        return lo, hi

    @property
    def alpha_max(self) -> float:
        return self.rate_down if self.p < 1.0 else math.inf

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        up = rng.random(n) < self.p
        e = rng.exponential(1.0, n)
        return np.where(up, e / self.rate_up, -e / self.rate_down)

    def _components(self):
        return [
            (self.p, 1.0, stats.expon(scale=1.0 / self.rate_up)),
            (1.0 - self.p, -1.0, stats.expon(scale=1.0 / self.rate_down)),
        ]

    def mgf_neg(self, alpha: float) -> float:
        if alpha >= self.alpha_max:
            raise DivergentMgf(f"E exp(-alpha Y) is infinite for alpha={alpha} >= {self.alpha_max}")
        value = self.p * self.rate_up / (self.rate_up + alpha)
        if self.p < 1.0:
            value += (1.0 - self.p) * self.rate_down / (self.rate_down - alpha)
        return value

    def exp_moment(self, alpha: float, region: Region = ALL) -> float:
        value = self.p * _exp_tilted(self.rate_up, 1.0, alpha, region) if self.p > 0.0 else 0.0
        if self.p < 1.0:
            value += (1.0 - self.p) * _exp_tilted(self.rate_down, -1.0, alpha, region)
        return value

    def tail_mean(self) -> float:
        up = self.p * math.exp(-self.rate_up) * (1.0 + 1.0 / self.rate_up)
        down = (1.0 - self.p) * math.exp(-self.rate_down) * (1.0 + 1.0 / self.rate_down)
        return up - down

    def scaled(self, k: float) -> "DoubleExponential":
        return DoubleExponential(self.p, self.rate_up / k, self.rate_down / k)


@dataclass(frozen=True)
class Gaussian:
    """Normal jumps ``N(mean, sd^2)``."""
    mean: float
    sd: float

    def __post_init__(self):
        if not self.sd > 0:
            raise SpecError(f"sd must be > 0, got {self.sd}", "sd")

    @property
    def support(self) -> tuple[float, float]:
        return -math.inf, math.inf

    @property
    def alpha_max(self) -> float:
        return math.inf

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.normal(self.mean, self.sd, n)

    def _components(self):
        return [(1.0, 1.0, stats.norm(self.mean, self.sd))]

    def mgf_neg(self, alpha: float) -> float:
        return math.exp(-alpha * self.mean + 0.5 * alpha**2 * self.sd**2)

    def exp_moment(self, alpha: float, region: Region = ALL) -> float:
        # exp(-alpha y) tilts N(m, s^2) to N(m - alpha s^2, s^2)
        shifted = stats.norm(self.mean - alpha * self.sd**2, self.sd)
        mass = sum(shifted.cdf(hi) - shifted.cdf(lo) for lo, hi in region.intervals)
        return self.mgf_neg(alpha) * float(mass)

    def tail_mean(self) -> float:
        m, s = self.mean, self.sd
        z_hi = (1.0 - m) / s
        z_lo = (-1.0 - m) / s
        above = m * stats.norm.sf(z_hi) + s * stats.norm.pdf(z_hi)
        below = m * stats.norm.cdf(z_lo) - s * stats.norm.pdf(z_lo)
        return above + below

    def scaled(self, k: float) -> "Gaussian":
        return Gaussian(k * self.mean, k * self.sd)


@dataclass(frozen=True)
class PointMass:
    """Deterministic jump of size ``value``."""
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise SpecError(f"value must be finite, got {self.value}", "value")

    @property
    def support(self) -> tuple[float, float]:
        return self.value, self.value

    @property
    def alpha_max(self) -> float:
        return math.inf

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.full(n, self.value, dtype=float)

    def mgf_neg(self, alpha: float) -> float:
        return math.exp(-alpha * self.value)

    def exp_moment(self, alpha: float, region: Region = ALL) -> float:
        return math.exp(-alpha * self.value) if region.contains(self.value) else 0.0

    def tail_mean(self) -> float:
        return self.value if abs(self.value) > 1.0 else 0.0

    def scaled(self, k: float) -> "PointMass":
        return PointMass(k * self.value)


JumpSize = Exponential | DoubleExponential | Gaussian | PointMass

SIZE_KINDS: dict[str, type] = {
    "exponential": Exponential,
    "double_exponential": DoubleExponential,
    "gaussian": Gaussian,
    "point_mass": PointMass,
}


def size_kind(size: JumpSize) -> str:
    return next(k for k, cls in SIZE_KINDS.items() if isinstance(size, cls))


def expect(size: JumpSize, func: Callable[[float], float], region: Region = ALL) -> float:
    """``E(func(Y) 1{Y in region})`` for a jump-size law.

    Point masses are evaluated directly; continuous laws go through
    ``rv_frozen.expect`` (adaptive quadrature) per mixture component.
    """
    if isinstance(size, PointMass):
        return float(func(size.value)) if region.contains(size.value) else 0.0

    total = 0.0
    for weight, sign, dist in size._components():
        if weight == 0.0:
            continue
        for lo, hi in region.intervals:
            # the component draws E and the jump is sign * E
            a, b = (lo, hi) if sign > 0 else (-hi, -lo)
            a = max(a, dist.support()[0])
            if a >= b:
                continue
            with warnings.catch_warnings():
                warnings.simplefilter("error", integrate.IntegrationWarning)
                try:
                    value = dist.expect(
                        lambda e: func(sign * e), lb=a, ub=b,
                        epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=500,
                    )
                except integrate.IntegrationWarning as err:
                    raise QuadratureFailure(f"jump-size expectation failed: {err}") from err
            total += weight * value
    return total


## Tempered-stable tails


@dataclass(frozen=True)
class TemperedSide:
    """One half of a tempered-stable Levy density.

    Density in ``y = |x| > 0`` is ``c * y**-(1+alpha) * exp(-lam * y)``;
    ``sign`` is +1 for the positive half-line and -1 for the negative one.
    """
    c: float
    lam: float
    alpha: float
    sign: float

    @property
    def finite_activity(self) -> bool:
        return self.alpha < 0.0

    def density(self, y: float, lam: float | None = None) -> float:
        lam = self.lam if lam is None else lam
        return self.c * y ** (-1.0 - self.alpha) * math.exp(-lam * y)

    def integral(
        self, func: Callable[[float], float], lo: float = 0.0, hi: float = math.inf, lam: float | None = None
    ) -> float:
        """``int func(sign*y) nu(dy)`` over ``lo < y < hi``; splits at ``y = 1``.

        ``lam`` replaces the tempering rate of the density.
        """
        lo = max(lo, 0.0)
        total = 0.0
        for a, b in ((lo, min(hi, 1.0)), (max(lo, 1.0), hi)):
            if a < b:
                total += quad(lambda y: func(self.sign * y) * self.density(y, lam), a, b)
        return total

    def exp_integral(self, alpha: float, lo: float = 0.0, hi: float = math.inf) -> float:
        """``int exp(-alpha x) nu(dx)`` over ``lo < |x| < hi`` on this side.

        The factor is folded into the tempering rate ``lam + sign * alpha``;
        at rate zero the tail is ``c y^-(1+alpha)``, finite only for ``alpha > 0``.
        """
        k = self.lam + self.sign * alpha
        if math.isinf(hi):
            if k < 0.0 or (k == 0.0 and self.alpha <= 0.0):
                return math.inf
            split = max(lo, 1.0)
            if k * split < 1.0:
                body = self.integral(lambda x: 1.0, lo, split, lam=k) if lo < split else 0.0
                return body + self._tail(k, split)
        return self.integral(lambda x: 1.0, lo, hi, lam=k)

    def _tail(self, k: float, s: float) -> float:
        """``int_s^inf c y^-(1+alpha) exp(-k y) dy`` through the generalized exponential integral."""
        if k == 0.0:
            return self.c * s**-self.alpha / self.alpha
        return self.c * s**-self.alpha * math.exp(-k * s) * scaled_upper_gamma(-self.alpha, k * s)

    def rate(self, eps: float) -> float:
        """Mass of ``{y > eps}``; ``eps`` is ignored for finite activity."""
        if self.finite_activity:
            return self.c * special.gamma(-self.alpha) * self.lam**self.alpha
        return self.integral(lambda x: 1.0, lo=eps)

    def cutoff(self, eps: float) -> float:
        return 0.0 if self.finite_activity else eps

    def sample(self, rng: np.random.Generator, horizon: float, eps: float) -> tuple[np.ndarray, np.ndarray]:
        """Jump epochs on ``(0, horizon]`` and signed sizes of magnitude > cutoff.

        Finite activity draws an exact compound Poisson with Gamma sizes.
        Otherwise a dominating proposal is thinned: truncated Pareto on
        ``[eps, 1]`` and a shifted exponential on ``(1, inf)``.
        """
        if self.finite_activity:
            n = rng.poisson(horizon * self.rate(0.0))
            times = rng.uniform(0.0, horizon, n)
            sizes = rng.gamma(-self.alpha, 1.0 / self.lam, n)
            return _sorted(times, self.sign * sizes)

        a = 1.0
        if self.alpha > 0.0:
            mass_body = self.c * math.exp(-self.lam * eps) * (eps**-self.alpha - a**-self.alpha) / self.alpha
        else:
            mass_body = self.c * math.exp(-self.lam * eps) * math.log(a / eps)
        n_body = rng.poisson(horizon * mass_body)
        u = rng.random(n_body)
        if self.alpha > 0.0:
            y_body = (eps**-self.alpha - u * (eps**-self.alpha - a**-self.alpha)) ** (-1.0 / self.alpha)
        else:
            y_body = eps * (a / eps) ** u
        keep_body = rng.random(n_body) < np.exp(-self.lam * (y_body - eps))
        t_body = rng.uniform(0.0, horizon, n_body)

        mass_tail = self.c * a ** (-1.0 - self.alpha) * math.exp(-self.lam * a) / self.lam
        n_tail = rng.poisson(horizon * mass_tail)
        y_tail = a + rng.exponential(1.0 / self.lam, n_tail)
        keep_tail = rng.random(n_tail) < (y_tail / a) ** (-1.0 - self.alpha)
        t_tail = rng.uniform(0.0, horizon, n_tail)

        times = np.concatenate([t_body[keep_body], t_tail[keep_tail]])
        sizes = np.concatenate([y_body[keep_body], y_tail[keep_tail]])
        return _sorted(times, self.sign * sizes)


def _sorted(times: np.ndarray, sizes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(times, kind="stable")
    return times[order], sizes[order]
