"""Jump-adapted simulation of the return process, its exponential
functionals, the business process and the discounted business integral.

All functionals use the left-point (predictable) rule on the merged grid:
on ``(t_{k-1}, t_k]`` the integrand is frozen at ``t_{k-1}``.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np

from ._errors import JumpBelowMinusOne
from ._rng import RngStream, Substream
from .model import (
    DEFAULT_CUTOFF,
    AdditiveIntegral,
    BlackScholes,
    BusinessSpec,
    CompoundPoisson,
    ExperimentSpec,
    GridSpec,
    HatJumpDiffusion,
    LevyJumpDiffusion,
    ReturnSpec,
    TemperedStableTails,
    delta_X,
)

logger = logging.getLogger(__name__)

PATHWISE_TOL = 1e-9


@dataclass
class SimulatedPath:
    """One realization of the return side on the merged grid.

    Parameters
    ----------
    times : np.ndarray
        Strictly increasing grid ``0 = t_0 < ... < t_m = T``.
    r_hat : np.ndarray
        ``R_hat`` at the grid points.
    stoch_exp : np.ndarray
        ``E(R) = exp(R_hat)`` at the grid points.
    i_func : np.ndarray
        ``I_t = int_0^t exp(-R_hat_s) ds``.
    j_func : dict of float to np.ndarray
        ``J_t(alpha)`` for every tracked ``alpha``; always contains ``2.0``.
    disc_integral : np.ndarray, optional
        ``Z_t = int_0^t dX_s / E(R)_{s-}`` once filled in by
        :func:`discounted_integral_direct`.
    jump_times : np.ndarray
        Jump epochs of ``R`` on ``(0, T)``.
    """
    times: np.ndarray
    r_hat: np.ndarray
    stoch_exp: np.ndarray
    i_func: np.ndarray
    j_func: dict[float, np.ndarray]
    disc_integral: np.ndarray | None = None
    jump_times: np.ndarray = field(default_factory=lambda: np.empty(0))

    @property
    def T(self) -> float:
        return float(self.times[-1])

    @property
    def j(self) -> np.ndarray:
        """``J_t = J_t(2)``."""
        return self.j_func[2.0]


@dataclass
class BusinessIncrements:
    """Increments of ``X`` over the grid intervals ``(t_{k-1}, t_k]``.

    ``jump_bins[i]`` is the index ``k`` of the interval holding jump ``i``;
    ``big`` marks jumps with ``|size| > 1``.
    """
    increments: np.ndarray
    continuous: np.ndarray
    jump_times: np.ndarray
    jump_sizes: np.ndarray
    jump_bins: np.ndarray
    big: np.ndarray

    def path(self) -> np.ndarray:
        """``X`` at the grid points, starting from ``X_0 = 0``."""
        return np.concatenate([[0.0], np.cumsum(self.increments)])


@dataclass
class RepresentationPath:
    """Components of ``a_X I_t + sigma_X W_{J_t} + M^d_t + U_t``.

    With ``compensated=True`` the terms are ``a_term = delta_X I_t``,
    ``m_term = N^d_t`` (all jumps compensated) and ``u_term = 0``.
    """
    times: np.ndarray
    a_term: np.ndarray
    w_term: np.ndarray
    m_term: np.ndarray
    u_term: np.ndarray
    compensated: bool = False

    @property
    def total(self) -> np.ndarray:
        return self.a_term + self.w_term + self.m_term + self.u_term


## Grid


def build_grid(grid: GridSpec, epochs: Iterable[float] = (), extra: Iterable[float] = ()) -> np.ndarray:
    """Uniform grid on ``[0, T]`` merged with jump epochs and extra knots."""
    base = np.linspace(0.0, grid.T, grid.n_steps + 1)
    points = np.concatenate([base, np.asarray(list(epochs), dtype=float), np.asarray(list(extra), dtype=float)])
    points = points[(points >= 0.0) & (points <= grid.T)]
    return np.unique(points)


def _interval_index(times: np.ndarray, epochs: np.ndarray) -> np.ndarray:
    """Index ``k`` with ``t_{k-1} < epoch <= t_k``."""
    return np.maximum(np.searchsorted(times, epochs, side="left"), 1)


def _cumulate(bins: np.ndarray, values: np.ndarray, n_intervals: int) -> np.ndarray:
    per_interval = np.bincount(bins - 1, weights=values, minlength=n_intervals)
    return np.concatenate([[0.0], np.cumsum(per_interval)])


def _left_point(integrand: np.ndarray, h: np.ndarray) -> np.ndarray:
    return np.concatenate([[0.0], np.cumsum(integrand[:-1] * h)])


## Return side


def cutoff_note(returns: ReturnSpec, cutoff: float = DEFAULT_CUTOFF) -> str | None:
    """Text of the cut-off approximation warning, or ``None`` if jumps are simulated exactly."""
    jumps = getattr(returns, "jumps", None)
    if isinstance(jumps, TemperedStableTails) and not jumps.finite_activity:
        return (
            f"tempered-stable jumps with |x| < {cutoff:g} are replaced by their mean; "
            "the simulated law carries a cut-off approximation"
        )
    return None


def _return_jumps(returns: ReturnSpec, horizon: float, rng: np.random.Generator, cutoff: float):
    jumps = getattr(returns, "jumps", None)
    if jumps is None:
        return np.empty(0), np.empty(0)
    return jumps.sample(rng, horizon, cutoff)


def _continuous_increments(returns: ReturnSpec, times: np.ndarray, z: np.ndarray, cutoff: float) -> np.ndarray:
    h = np.diff(times)
    if isinstance(returns, BlackScholes):
        return (returns.a_R - 0.5 * returns.sigma_R**2) * h + returns.sigma_R * np.sqrt(h) * z
    if isinstance(returns, LevyJumpDiffusion):
        drift = returns.a_R - (0.0 if returns.jumps is None else returns.jumps.small_mean(cutoff))
        return (drift - 0.5 * returns.sigma_R**2) * h + returns.sigma_R * np.sqrt(h) * z
    if isinstance(returns, HatJumpDiffusion):
        drift = returns.a_hat
        if returns.jumps is not None and not isinstance(returns.jumps, CompoundPoisson):
            # triplet drift: compensate simulated jumps with |x| <= 1
            drift -= returns.jumps.small_mean(cutoff)
        return drift * h + returns.sigma_hat * np.sqrt(h) * z
    if isinstance(returns, AdditiveIntegral):
        g1 = returns.weight.integral(times[:-1], times[1:], power=1)
        g2 = returns.weight.integral(times[:-1], times[1:], power=2)
        drift = returns.a_L - (0.0 if returns.jumps is None else returns.jumps.small_mean(cutoff))
        return drift * g1 - 0.5 * returns.sigma_L**2 * g2 + returns.sigma_L * np.sqrt(g2) * z
    raise TypeError(f"unsupported return model {type(returns).__name__}")


def _log_jumps(returns: ReturnSpec, epochs: np.ndarray, sizes: np.ndarray) -> np.ndarray:
    """Jumps of ``R_hat``: ``ln(1 + dR)`` or the raw ``Y`` for hat models."""
    if isinstance(returns, HatJumpDiffusion):
        return sizes
    if isinstance(returns, AdditiveIntegral):
        sizes = returns.weight(epochs) * sizes
    if sizes.size and np.min(sizes) <= -1.0:
        raise JumpBelowMinusOne(f"simulated return jump {np.min(sizes)} <= -1")
    return np.log1p(sizes)


def simulate_return_path(
    returns: ReturnSpec,
    grid: GridSpec,
    rng: RngStream,
    alphas: Iterable[float] = (2.0,),
    cutoff: float = DEFAULT_CUTOFF,
    extra_times: Iterable[float] = (),
) -> SimulatedPath:
    """Simulate ``R_hat``, ``E(R)``, ``I`` and ``J(alpha)`` on a jump-adapted grid.

    Parameters
    ----------
    returns : ReturnSpec
        Validated return model.
    grid : GridSpec
        Horizon and base resolution. With ``jump_adapted`` the jump epochs of
        ``R`` become grid points; otherwise jumps are booked at the right end
        of the interval containing them.
    rng : RngStream
        Stream of this path; draws from ``R_JUMPS`` and ``R_NOISE`` only.
    alphas : iterable of float
        Exponents of ``J(alpha)`` to track; ``2`` is always added.
    cutoff : float
        Small-jump cut-off for infinite-activity tempered tails.
    extra_times : iterable of float
        Additional grid knots (e.g. intermediate horizons).

    Returns
    -------
    SimulatedPath
        Path without ``disc_integral``.

    Raises
    ------
    JumpBelowMinusOne
        If a simulated jump of ``R`` is ``<= -1``.
    """
    epochs, sizes = _return_jumps(returns, grid.T, rng.generator(Substream.R_JUMPS), cutoff)
    times = build_grid(grid, epochs if grid.jump_adapted else (), extra_times)
    n = times.size - 1
    z = rng.generator(Substream.R_NOISE).standard_normal(n)

    d_rhat = _continuous_increments(returns, times, z, cutoff)
    if epochs.size:
        d_rhat = d_rhat + np.bincount(
            _interval_index(times, epochs) - 1, weights=_log_jumps(returns, epochs, sizes), minlength=n
        )
    r_hat = np.concatenate([[0.0], np.cumsum(d_rhat)])
    h = np.diff(times)
    j_func = {float(a): _left_point(np.exp(-a * r_hat), h) for a in sorted(set(alphas) | {2.0})}
    return SimulatedPath(
        times=times,
        r_hat=r_hat,
        stoch_exp=np.exp(r_hat),
        i_func=_left_point(np.exp(-r_hat), h),
        j_func=j_func,
        jump_times=epochs,
    )


## Business side


def _business_jumps(business: BusinessSpec, horizon: float, rng: np.random.Generator):
    if business.jumps is None:
        return np.empty(0), np.empty(0)
    return business.jumps.sample(rng, horizon)


def simulate_business_increments(business: BusinessSpec, times: np.ndarray, rng: RngStream) -> BusinessIncrements:
    """Increments of ``X`` on an already merged grid.

    Drift and Brownian parts are exact on every interval; compound Poisson
    jumps are drawn exactly on ``(0, T)`` and booked in the interval that
    contains them. Small jumps (``|x| <= 1``) are compensated in the drift.
    """
    h = np.diff(times)
    z = rng.generator(Substream.X_NOISE).standard_normal(h.size)
    drift = business.a_X - (0.0 if business.jumps is None else business.jumps.small_mean())
    continuous = drift * h + business.sigma_X * np.sqrt(h) * z

    epochs, sizes = _business_jumps(business, float(times[-1]), rng.generator(Substream.X_JUMPS))
    bins = _interval_index(times, epochs)
    increments = continuous + np.bincount(bins - 1, weights=sizes, minlength=h.size) if epochs.size else continuous
    return BusinessIncrements(
        increments=increments,
        continuous=continuous,
        jump_times=epochs,
        jump_sizes=sizes,
        jump_bins=bins,
        big=np.abs(sizes) > 1.0,
    )


def discounted_integral_direct(path: SimulatedPath, x_incr: BusinessIncrements) -> SimulatedPath:
    """Fill in ``Z_{t_i} = sum_{k <= i} dX_k / E(R)_{t_{k-1}}``."""
    if x_incr.increments.size != path.times.size - 1:
        raise ValueError("business increments were simulated on a different grid")
    z = np.concatenate([[0.0], np.cumsum(x_incr.increments / path.stoch_exp[:-1])])
    return replace(path, disc_integral=z)


def discounted_integral_representation(
    business: BusinessSpec,
    path: SimulatedPath,
    rng: RngStream,
    compensate_big_jumps: bool = False,
) -> RepresentationPath:
    """Draw the discounted integral through its identity in law.

    Given the simulated ``E(R)``, the Brownian part is ``sigma_X W_{J_t}``
    with fresh increments of variance ``J_{t_k} - J_{t_{k-1}}``. Fresh
    business jumps are discounted at the left end of their interval; small
    ones are compensated against ``I``. The result has the law of the direct
    scheme's ``Z``, not its path.
    """
    times = path.times
    n = times.size - 1
    i_func = path.i_func
    dj = np.diff(path.j)
    z = rng.generator(Substream.REPR_NOISE).standard_normal(n)
    w_term = business.sigma_X * np.concatenate([[0.0], np.cumsum(np.sqrt(dj) * z)])

    epochs, sizes = _business_jumps(business, path.T, rng.generator(Substream.REPR_JUMPS))
    bins = _interval_index(times, epochs)
    discounted = sizes / path.stoch_exp[bins - 1] if epochs.size else sizes
    small = np.abs(sizes) <= 1.0
    small_mean = 0.0 if business.jumps is None else business.jumps.small_mean()
    m_term = _cumulate(bins[small], discounted[small], n) - small_mean * i_func
    u_term = _cumulate(bins[~small], discounted[~small], n)
    a_term = business.a_X * i_func

    if compensate_big_jumps:
        big_mean = 0.0 if business.jumps is None else business.jumps.tail_first_moment()
        a_term = delta_X(business) * i_func
        m_term = m_term + u_term - big_mean * i_func
        u_term = np.zeros_like(u_term)
    return RepresentationPath(times, a_term, w_term, m_term, u_term, compensated=compensate_big_jumps)


def detect_ruin(path: SimulatedPath, y: float) -> float | None:
    """First grid epoch with ``Z_t < -y``, or ``None``."""
    if not y > 0:
        raise ValueError(f"initial capital must be > 0, got {y}")
    if path.disc_integral is None:
        raise ValueError("path has no discounted integral; call discounted_integral_direct first")
    hits = np.flatnonzero(path.disc_integral < -y)
    return float(path.times[hits[0]]) if hits.size else None


## Whole paths


def simulate_path(
    spec: ExperimentSpec,
    index: int,
    grid: GridSpec | None = None,
    extra_times: Iterable[float] = (),
) -> SimulatedPath:
    """Path ``index`` of an experiment with its discounted integral filled in."""
    grid = spec.grid if grid is None else grid
    stream = RngStream(spec.seed, index)
    path = simulate_return_path(spec.returns, grid, stream, spec.tracked_alphas, spec.cutoff, extra_times)
    x_incr = simulate_business_increments(spec.business, path.times, stream)
    return discounted_integral_direct(path, x_incr)


def representation_path(spec: ExperimentSpec, index: int, compensate_big_jumps: bool = False) -> tuple[SimulatedPath, RepresentationPath]:
    """Return path ``index`` and its representation-scheme discounted integral."""
    stream = RngStream(spec.seed, index)
    path = simulate_return_path(spec.returns, spec.grid, stream, spec.tracked_alphas, spec.cutoff)
    return path, discounted_integral_representation(spec.business, path, stream, compensate_big_jumps)


def pathwise_violations(path: SimulatedPath, tol: float = PATHWISE_TOL) -> list[str]:
    """Check the pathwise inequalities between ``I`` and ``J(alpha)``.

    Returns a list of human-readable violations; empty means all hold.
    Slack is ``tol`` times ``max(1, rhs)``.
    """
    out = []
    T = float(np.sum(np.diff(path.times)))
    j2 = path.j[-1]

    def check(name, lhs, rhs):
        if lhs > rhs + tol * max(1.0, abs(rhs)):
            out.append(f"{name}: {lhs!r} > {rhs!r}")

    check("I_T <= sqrt(T J_T)", path.i_func[-1], math.sqrt(T) * math.sqrt(j2))
    for alpha, j in path.j_func.items():
        if 0 < alpha < 2:
            check(f"J_T({alpha}) <= T^((2-a)/2) J_T^(a/2)", j[-1], T ** ((2 - alpha) / 2) * j2 ** (alpha / 2))
        elif alpha > 2:
            check(f"J_T <= T^((a-2)/a) J_T({alpha})^(2/a)", j2, T ** ((alpha - 2) / alpha) * j[-1] ** (2 / alpha))
        if np.any(np.diff(j) < 0):
            out.append(f"J({alpha}) not nondecreasing")
    if path.i_func[0] != 0.0 or np.any(np.diff(path.i_func) < 0):
        out.append("I not nondecreasing from 0")
    if np.any(path.stoch_exp <= 0):
        out.append("stochastic exponential not positive")
    if not np.allclose(np.exp(path.r_hat), path.stoch_exp, rtol=1e-12, atol=0.0):
        out.append("exp(r_hat) != stoch_exp")
    return out
