"""Piecewise-linear weight functions with exact integrals."""

import math
from dataclasses import dataclass

import numpy as np

from ._errors import SpecError


@dataclass(frozen=True)
class WeightTable:
    """Positive piecewise-linear function ``g`` on ``[0, S_max]``.

    Values between knots are linearly interpolated. Evaluation outside the
    table is refused unless ``extend=True``, in which case ``g`` is continued
    by its last value (the tail extension used by long-run checks).

    Parameters
    ----------
    knots : tuple of float
        Strictly increasing abscissae, first knot ``0``; at least two.
    values : tuple of float
        Strictly positive ordinates, one per knot.

    Examples
    --------
    >>> g = WeightTable((0.0, 1.0, 2.0), (1.0, 2.0, 2.0))
    >>> g.integral(0.0, 2.0)
    3.5
    """
    knots: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "knots", tuple(float(k) for k in self.knots))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.knots) < 2:
            raise SpecError("weight table needs at least 2 knots", "knots")
        if len(self.knots) != len(self.values):
            raise SpecError("knots and values differ in length", "values")
        if self.knots[0] != 0.0:
            raise SpecError("first knot must be 0", "knots")
        if any(b <= a for a, b in zip(self.knots, self.knots[1:])):
            raise SpecError("knots must be strictly increasing", "knots")
        if not all(math.isfinite(v) and v > 0 for v in self.values):
            raise SpecError("g must be strictly positive on its table", "values")

    @property
    def s_max(self) -> float:
        return self.knots[-1]

    @property
    def max_value(self) -> float:
        return max(self.values)

    @property
    def tail_value(self) -> float:
        return self.values[-1]

    def _check(self, s: np.ndarray, extend: bool) -> None:
        if np.any(s < 0.0) or (not extend and np.any(s > self.s_max * (1.0 + 1e-12))):
            raise ValueError(f"g is tabulated on [0, {self.s_max}]; extrapolation is not allowed")

    def __call__(self, s, extend: bool = False):
        s = np.asarray(s, dtype=float)
        self._check(s, extend)
        # np.interp holds the end value beyond the last knot
        return np.interp(s, self.knots, self.values)

    def _cumulative(self, s: np.ndarray, power: int) -> np.ndarray:
        k = np.asarray(self.knots)
        v = np.asarray(self.values)
        h = np.diff(k)
        u, w = v[:-1], v[1:]
        if power == 1:
            seg = h * (u + w) / 2.0
        else:
            seg = h * (u * u + u * w + w * w) / 3.0
        at_knots = np.concatenate([[0.0], np.cumsum(seg)])

        inside = np.minimum(s, self.s_max)
        i = np.clip(np.searchsorted(k, inside, side="right") - 1, 0, len(k) - 2)
        hs = inside - k[i]
        gs = np.interp(inside, k, v)
        if power == 1:
            part = hs * (v[i] + gs) / 2.0
        else:
            part = hs * (v[i] ** 2 + v[i] * gs + gs**2) / 3.0
        beyond = np.maximum(s - self.s_max, 0.0) * v[-1] ** power
        return at_knots[i] + part + beyond

    def integral(self, a, b, power: int = 1, extend: bool = False):
        """Exact ``int_a^b g(s)**power ds`` for ``power`` in ``{1, 2}``."""
        if power not in (1, 2):
            raise ValueError(f"power must be 1 or 2, got {power}")
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        self._check(np.concatenate([a.ravel(), b.ravel()]), extend)
        out = self._cumulative(b, power) - self._cumulative(a, power)
        return float(out) if out.ndim == 0 else out

    def to_dict(self) -> dict:
        return {"knots": list(self.knots), "values": list(self.values)}
