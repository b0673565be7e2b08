"""Monte Carlo ruin probabilities, slope regression and probes.

Paths are independent given ``(seed, index)``, so any partition of the path
indices into chunks gives identical per-path results. Chunks run in a
``ProcessPoolExecutor`` and are reassembled in index order; ruin counts are
integers, so estimates do not depend on scheduling.
"""

import logging
import math
import os
import time
import warnings
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from ._errors import InsufficientTail
from ._rng import RngStream
from ._stats import ks_critical, wilson_interval
from .model import ExperimentSpec, GridSpec
from .simulate import cutoff_note, representation_path, simulate_path, simulate_return_path

logger = logging.getLogger(__name__)

MIN_RUINED = 50
MIN_SLOPE_POINTS = 4
_MAX_CHUNK = 10_000


@dataclass
class RuinEstimate:
    """Monte Carlo estimate of ``P(tau(y) <= T)`` with a Wilson interval.

    Parameters
    ----------
    y : float
        Initial capital.
    T : float
        Horizon.
    p_hat : float
        ``n_ruined / n_paths``.
    ci_low, ci_high : float
        Wilson interval at ``confidence``.
    n_paths, n_ruined : int
        Paths simulated and paths ruined.
    seed : int
        Root seed.
    n_steps : int
        Base grid resolution.
    jump_adapted : bool
        Whether jump epochs of ``R`` were grid points.
    index_start : int
        First path index; runs over disjoint index ranges can be merged.
    confidence : float
        Level of the interval.
    """
    y: float
    T: float
    p_hat: float
    ci_low: float
    ci_high: float
    n_paths: int
    n_ruined: int
    seed: int
    n_steps: int = 0
    jump_adapted: bool = True
    index_start: int = 0
    confidence: float = 0.95

    @classmethod
    def from_counts(cls, y: float, T: float, n_ruined: int, n_paths: int, seed: int, **meta) -> "RuinEstimate":
        confidence = meta.pop("confidence", 0.95)
        low, high = wilson_interval(n_ruined, n_paths, confidence)
        return cls(y, T, n_ruined / n_paths, low, high, n_paths, n_ruined, seed,
                   confidence=confidence, **meta)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SlopeFit:
    """Least-squares fit of ``ln p_hat`` against ``ln y``.

    Only points with at least ``min_ruined`` ruined paths enter the fit;
    ``used`` marks them.
    """
    ys: list[float]
    log_p: list[float]
    used: list[bool]
    slope: float
    intercept: float
    slope_stderr: float
    beta_ref: float | None = None
    min_ruined: int = MIN_RUINED

    @property
    def gap(self) -> float | None:
        """``slope - (-beta_ref)``."""
        if self.beta_ref is None or math.isinf(self.beta_ref):
            return None
        return self.slope + self.beta_ref

    def to_dict(self) -> dict:
        return {**asdict(self), "gap": self.gap}


## Fan-out


def _resolve_threads(threads: int | None) -> int:
    return max(1, threads if threads else (os.cpu_count() or 1))


def _chunk_bounds(start: int, n_paths: int, threads: int) -> list[tuple[int, int]]:
    size = min(_MAX_CHUNK, max(1, math.ceil(n_paths / (4 * threads))))
    return [(lo, min(lo + size, start + n_paths)) for lo in range(start, start + n_paths, size)]


def _run_paths(task: Callable, spec: ExperimentSpec, start: int, n_paths: int, threads: int | None, *args) -> np.ndarray:
    """Apply ``task(spec, lo, hi, *args)`` to index chunks; stack in index order."""
    note = cutoff_note(spec.returns, spec.cutoff)
    if note is not None:
        warnings.warn(note, UserWarning, stacklevel=3)
    threads = _resolve_threads(threads)
    chunks = _chunk_bounds(start, n_paths, threads)
    began = time.perf_counter()
    if threads == 1 or len(chunks) == 1:
        results = [task(spec, lo, hi, *args) for lo, hi in chunks]
    else:
        results = [None] * len(chunks)
        with ProcessPoolExecutor(max_workers=threads) as executor:
            futures = {executor.submit(task, spec, lo, hi, *args): k for k, (lo, hi) in enumerate(chunks)}
            for future in as_completed(futures):
                k = futures[future]
                results[k] = future.result()
                logger.debug("chunk %d/%d done (paths %d-%d)", k + 1, len(chunks), *chunks[k])
    logger.info("simulated %d paths in %d chunks on %d workers (%.2f s)",
                n_paths, len(chunks), threads, time.perf_counter() - began)
    return np.concatenate(results)


def _max_loss_chunk(spec: ExperimentSpec, lo: int, hi: int, grid: GridSpec) -> np.ndarray:
    return np.array([np.max(-simulate_path(spec, i, grid).disc_integral) for i in range(lo, hi)])


def _max_loss_by_horizon_chunk(spec: ExperimentSpec, lo: int, hi: int, grid: GridSpec, horizons: tuple) -> np.ndarray:
    out = np.empty((hi - lo, len(horizons)))
    for row, i in enumerate(range(lo, hi)):
        path = simulate_path(spec, i, grid, extra_times=horizons)
        running = np.maximum.accumulate(-path.disc_integral)
        at = np.searchsorted(path.times, horizons, side="right") - 1
        out[row] = running[at]
    return out


def _functionals_chunk(spec: ExperimentSpec, lo: int, hi: int) -> np.ndarray:
    alphas = spec.tracked_alphas
    out = np.empty((hi - lo, 1 + len(alphas)))
    for row, i in enumerate(range(lo, hi)):
        path = simulate_return_path(spec.returns, spec.grid, RngStream(spec.seed, i), alphas, spec.cutoff)
        out[row, 0] = path.i_func[-1]
        out[row, 1:] = [path.j_func[a][-1] for a in alphas]
    return out


def _ks_chunk(spec: ExperimentSpec, lo: int, hi: int, compensate: bool) -> np.ndarray:
    out = np.empty((hi - lo, 2))
    for row, i in enumerate(range(lo, hi)):
        direct = simulate_path(spec, i)
        _, rep = representation_path(spec, i, compensate)
        out[row] = np.max(-direct.disc_integral), np.max(-rep.total)
    return out


## Estimators


def max_losses(spec: ExperimentSpec, threads: int | None = None, index_start: int = 0, grid: GridSpec | None = None) -> np.ndarray:
    """``M = max_i (-Z_{t_i})`` for every path; ruin at capital ``y`` iff ``M > y``."""
    return _run_paths(_max_loss_chunk, spec, index_start, spec.n_paths, threads, grid or spec.grid)


def _estimates(spec: ExperimentSpec, losses: np.ndarray, T: float, grid: GridSpec, index_start: int, confidence: float) -> list[RuinEstimate]:
    return [
        RuinEstimate.from_counts(
            y, T, int(np.count_nonzero(losses > y)), losses.size, spec.seed,
            n_steps=grid.n_steps, jump_adapted=grid.jump_adapted, index_start=index_start, confidence=confidence,
        )
        for y in spec.initial_capitals
    ]


def mc_ruin_probability(
    spec: ExperimentSpec,
    threads: int | None = None,
    index_start: int = 0,
    confidence: float = 0.95,
) -> list[RuinEstimate]:
    """Finite-horizon ruin probabilities for every initial capital.

    All capitals share the same paths, so ``p_hat`` is nonincreasing in
    ``y`` exactly.

    Examples
    --------
    >>> from ruinlab import BusinessSpec, LevyJumpDiffusion, GridSpec, ExperimentSpec
    >>> spec = ExperimentSpec(BusinessSpec(a_X=-1.0), LevyJumpDiffusion(0.0),
    ...                       GridSpec(T=1.0, n_steps=100), (0.5, 2.0), n_paths=100)
    >>> [e.p_hat for e in mc_ruin_probability(spec, threads=1)]
    [1.0, 0.0]
    """
    losses = max_losses(spec, threads, index_start)
    return _estimates(spec, losses, spec.grid.T, spec.grid, index_start, confidence)


def merge_estimates(first: Sequence[RuinEstimate], second: Sequence[RuinEstimate]) -> list[RuinEstimate]:
    """Pool two runs over disjoint path-index ranges of the same experiment."""
    merged = []
    for a, b in zip(first, second, strict=True):
        if (a.y, a.T, a.seed, a.n_steps) != (b.y, b.T, b.seed, b.n_steps):
            raise ValueError("estimates belong to different experiments")
        merged.append(RuinEstimate.from_counts(
            a.y, a.T, a.n_ruined + b.n_ruined, a.n_paths + b.n_paths, a.seed,
            n_steps=a.n_steps, jump_adapted=a.jump_adapted,
            index_start=min(a.index_start, b.index_start), confidence=a.confidence,
        ))
    return merged


def slope_fit(
    estimates: Sequence[RuinEstimate],
    beta_ref: float | None = None,
    min_ruined: int = MIN_RUINED,
) -> SlopeFit:
    """Log-log slope of the ruin probability against the initial capital.

    Raises
    ------
    InsufficientTail
        If fewer than 4 points have ``n_ruined >= min_ruined``.
    """
    ys = [e.y for e in estimates]
    used = [e.n_ruined >= min_ruined and e.p_hat > 0 for e in estimates]
    if sum(used) < MIN_SLOPE_POINTS:
        raise InsufficientTail(
            f"only {sum(used)} of {len(estimates)} capitals have n_ruined >= {min_ruined}; "
            f"need {MIN_SLOPE_POINTS}"
        )
    log_y = np.log([e.y for e, u in zip(estimates, used) if u])
    log_p = np.log([e.p_hat for e, u in zip(estimates, used) if u])
    fit = stats.linregress(log_y, log_p)
    return SlopeFit(
        ys=ys,
        log_p=[math.log(e.p_hat) if e.p_hat > 0 else -math.inf for e in estimates],
        used=used,
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        slope_stderr=float(fit.stderr),
        beta_ref=beta_ref,
        min_ruined=min_ruined,
    )


def certain_ruin_probe(
    spec: ExperimentSpec,
    y: float,
    T_list: Sequence[float],
    threads: int | None = None,
    confidence: float = 0.95,
) -> list[RuinEstimate]:
    """``P(tau(y) <= T)`` for increasing horizons on shared paths.

    Each path is simulated once up to ``max(T_list)`` with the horizons as
    grid knots and the step size of ``spec.grid``; the events are nested, so
    the estimates are nondecreasing in ``T`` exactly.
    """
    horizons = tuple(float(t) for t in T_list)
    if not horizons or any(b <= a for a, b in zip(horizons, horizons[1:])) or horizons[0] <= 0:
        raise ValueError("T_list must be positive and strictly increasing")
    if not y > 0:
        raise ValueError(f"initial capital must be > 0, got {y}")
    t_max = horizons[-1]
    grid = GridSpec(t_max, max(1, math.ceil(t_max / spec.grid.dt)), spec.grid.jump_adapted)
    probe_spec = replace(spec, grid=grid)
    losses = _run_paths(_max_loss_by_horizon_chunk, probe_spec, 0, spec.n_paths, threads, grid, horizons)
    return [
        RuinEstimate.from_counts(
            y, T, int(np.count_nonzero(losses[:, k] > y)), spec.n_paths, spec.seed,
            n_steps=grid.n_steps, jump_adapted=grid.jump_adapted, confidence=confidence,
        )
        for k, T in enumerate(horizons)
    ]


@dataclass
class BiasProbe:
    """Change of ``p_hat`` when the base grid is refined twofold."""
    y: float
    p_hat: float
    p_hat_refined: float

    @property
    def delta(self) -> float:
        return self.p_hat_refined - self.p_hat

    def to_dict(self) -> dict:
        return {**asdict(self), "delta": self.delta}


def bias_probe(spec: ExperimentSpec, threads: int | None = None) -> list[BiasProbe]:
    """Discrete-monitoring bias indicator: ``p_hat`` at ``n_steps`` and ``2 n_steps``."""
    coarse = mc_ruin_probability(spec, threads)
    fine_spec = replace(spec, grid=replace(spec.grid, n_steps=2 * spec.grid.n_steps))
    fine = mc_ruin_probability(fine_spec, threads)
    return [BiasProbe(c.y, c.p_hat, f.p_hat) for c, f in zip(coarse, fine)]


## Functionals and scheme comparison


@dataclass
class FunctionalSamples:
    """Per-path terminal values ``I_T`` and ``J_T(alpha)``."""
    T: float
    i_T: np.ndarray
    j_T: dict[float, np.ndarray] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return int(self.i_T.size)


def functional_samples(spec: ExperimentSpec, threads: int | None = None) -> FunctionalSamples:
    """Simulate the return side only and keep ``I_T`` and every ``J_T(alpha)``."""
    table = _run_paths(_functionals_chunk, spec, 0, spec.n_paths, threads)
    alphas = spec.tracked_alphas
    return FunctionalSamples(spec.grid.T, table[:, 0], {a: table[:, 1 + k] for k, a in enumerate(alphas)})


@dataclass
class SchemeComparison:
    """Two-sample Kolmogorov-Smirnov comparison of ``sup(-Z)`` from the two schemes."""
    statistic: float
    pvalue: float
    critical_1pct: float
    n: int

    @property
    def agree(self) -> bool:
        return self.statistic < self.critical_1pct

    def to_dict(self) -> dict:
        return {**asdict(self), "agree": self.agree}


def compare_schemes(spec: ExperimentSpec, threads: int | None = None, compensate_big_jumps: bool = False) -> SchemeComparison:
    """Direct scheme against the identity-in-law scheme on the same return paths."""
    table = _run_paths(_ks_chunk, spec, 0, spec.n_paths, threads, compensate_big_jumps)
    result = stats.ks_2samp(table[:, 0], table[:, 1])
    n = spec.n_paths
    return SchemeComparison(float(result.statistic), float(result.pvalue), ks_critical(n), n)
