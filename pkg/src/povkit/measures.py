"""Poverty and inequality measures on income samples.

Implements the FGT family (headcount, poverty gap, squared gap), the Watts
index, the Gini coefficient, and conversions between weighted income samples
and piecewise-linear Lorenz curves.

Conventions, fixed here and relied on elsewhere:

* "poor" means income strictly below the line; an income exactly at the
  line never counts as poor.
* Gini is the relative mean absolute difference halved, with no
  small-sample correction.
* Lorenz curves are piecewise-linear grids; within an observation the
  cumulative income accrues linearly, so fractional population shares
  split an observation's income proportionally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonpositiveLine, ZeroIncomeAmongPoor, ZeroMean

DEFAULT_POVERTY_LINE = 1.90


@dataclass(frozen=True)
class IncomeSample:
    """Nonnegative per-capita incomes with optional positive weights."""

    incomes: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self):
        incomes = np.asarray(self.incomes, dtype=float)
        if incomes.ndim != 1 or incomes.size == 0:
            raise ValueError("incomes must be a nonempty 1-d sequence")
        if np.any(incomes < 0) or not np.all(np.isfinite(incomes)):
            raise ValueError("incomes must be finite and nonnegative")
        object.__setattr__(self, "incomes", incomes)
        if self.weights is not None:
            weights = np.asarray(self.weights, dtype=float)
            if weights.shape != incomes.shape:
                raise ValueError("weights must match incomes in length")
            if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
                raise ValueError("weights must be finite and positive")
            object.__setattr__(self, "weights", weights)

    @property
    def w(self) -> np.ndarray:
        """Weights, defaulting to ones."""
        if self.weights is None:
            return np.ones_like(self.incomes)
        return self.weights

    def mean(self) -> float:
        w = self.w
        return float(np.sum(w * self.incomes) / np.sum(w))


@dataclass(frozen=True)
class LorenzCurve:
    """Piecewise-linear Lorenz curve: (population share, income share) knots.

    Knots run from (0, 0) to (1, 1) with nondecreasing shares and
    nondecreasing chord slopes (convexity). Small floating slack is
    tolerated on construction and snapped back into range.
    """

    points: np.ndarray  # shape (k, 2)

    _TOL = 1e-9

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
            raise ValueError("need at least two (p, L) points")
        p, L = pts[:, 0], pts[:, 1]
        if abs(p[0]) > self._TOL or abs(L[0]) > self._TOL:
            raise ValueError("first point must be (0, 0)")
        if abs(p[-1] - 1.0) > self._TOL or abs(L[-1] - 1.0) > self._TOL:
            raise ValueError("last point must be (1, 1)")
        if np.any(np.diff(p) <= 0):
            raise ValueError("population shares must be strictly increasing")
        if np.any(np.diff(L) < -self._TOL):
            raise ValueError("income shares must be nondecreasing")
        if np.any(L > p + self._TOL) or np.any(L < -self._TOL):
            raise ValueError("Lorenz curve must satisfy 0 <= L(p) <= p")
        slopes = np.diff(L) / np.diff(p)
        if np.any(np.diff(slopes) < -1e-7):
            raise ValueError("Lorenz curve must be convex (chord slopes nondecreasing)")
        pts = pts.copy()
        pts[0] = (0.0, 0.0)
        pts[-1] = (1.0, 1.0)
        pts[:, 1] = np.maximum.accumulate(np.clip(pts[:, 1], 0.0, 1.0))
        object.__setattr__(self, "points", pts)

    def value(self, p) -> np.ndarray:
        """Interpolated income share L(p)."""
        pts = self.points
        return np.interp(p, pts[:, 0], pts[:, 1])

    @classmethod
    def diagonal(cls) -> "LorenzCurve":
        return cls(np.array([[0.0, 0.0], [1.0, 1.0]]))


@dataclass(frozen=True)
class Distribution:
    """Mean income plus a Lorenz curve: a full relative distribution."""

    mean: float
    lorenz: LorenzCurve

    def __post_init__(self):
        if not (self.mean > 0 and math.isfinite(self.mean)):
            raise ValueError("mean must be positive and finite")


def fgt(sample: IncomeSample, z: float, alpha: int) -> float:
    """Foster-Greer-Thorbecke measure of order ``alpha`` at line ``z``.

    alpha=0 is the headcount ratio, 1 the poverty gap, 2 the squared gap.
    The poor are those strictly below ``z``.
    """
    if not z > 0:
        raise NonpositiveLine(z)
    if alpha not in (0, 1, 2):
        raise ValueError("alpha must be 0, 1, or 2")
    y, w = sample.incomes, sample.w
    poor = y < z
    if not np.any(poor):
        return 0.0
    if alpha == 0:
        num = np.sum(w[poor])
    else:
        shortfall = (z - y[poor]) / z
        num = np.sum(w[poor] * shortfall**alpha)
    return float(num / np.sum(w))


def watts(sample: IncomeSample, z: float) -> float:
    """Watts index: population mean of ln(z/y) over the poor."""
    if not z > 0:
        raise NonpositiveLine(z)
    y, w = sample.incomes, sample.w
    poor = y < z
    if not np.any(poor):
        return 0.0
    if np.any(y[poor] == 0):
        raise ZeroIncomeAmongPoor()
    return float(np.sum(w[poor] * np.log(z / y[poor])) / np.sum(w))


def gini(sample: IncomeSample) -> float:
    """Gini coefficient via the sorted cumulative form.

    Algebraically equal to the relative mean absolute difference halved,
    G = sum_ij w_i w_j |y_i - y_j| / (2 W^2 ybar), but O(n log n).
    """
    y, w = sample.incomes, sample.w
    total_income = np.sum(w * y)
    if not total_income > 0:
        raise ZeroMean()
    order = np.argsort(y, kind="stable")
    ys, ws = y[order], w[order]
    cw = np.cumsum(ws)
    cyw = np.cumsum(ws * ys)
    # sum_i w_i * (y_i * C_{i-1} - S_{i-1}) over sorted order
    prev_cw = cw - ws
    prev_cyw = cyw - ws * ys
    num = np.sum(ws * (ys * prev_cw - prev_cyw))
    return float(num / (cw[-1] * total_income))


def lorenz_from_sample(sample: IncomeSample, grid_size: int = 1000) -> LorenzCurve:
    """Empirical Lorenz curve on ``grid_size + 1`` evenly spaced shares.

    Cumulative income shares at each grid point are exact, with fractional
    observations split linearly.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    y, w = sample.incomes, sample.w
    total_income = np.sum(w * y)
    if not total_income > 0:
        raise ZeroMean()
    order = np.argsort(y, kind="stable")
    ys, ws = y[order], w[order]
    pop = np.concatenate(([0.0], np.cumsum(ws) / np.sum(ws)))
    inc = np.concatenate(([0.0], np.cumsum(ws * ys) / total_income))
    pop[-1] = 1.0
    inc[-1] = 1.0
    p_grid = np.linspace(0.0, 1.0, grid_size + 1)
    L_grid = np.interp(p_grid, pop, inc)
    return LorenzCurve(np.column_stack([p_grid, L_grid]))


def sample_from_distribution(dist: Distribution, n: int) -> IncomeSample:
    """Materialize ``n`` equally weighted incomes following the Lorenz curve.

    The k-th of n population slices earns mean * (L(k/n) - L((k-1)/n)) * n,
    so the sample mean is exactly the distribution mean and the sample's
    Lorenz curve agrees with the input at the k/n grid points.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    shares = dist.lorenz.value(np.linspace(0.0, 1.0, n + 1))
    incomes = dist.mean * np.diff(shares) * n
    incomes = np.maximum(incomes, 0.0)  # guard tiny negative float noise
    return IncomeSample(incomes)


_MEASURES = {
    "headcount": lambda s, z: fgt(s, z, 0),
    "gap": lambda s, z: fgt(s, z, 1),
    "gap_sq": lambda s, z: fgt(s, z, 2),
    "watts": watts,
}

MEASURE_NAMES = tuple(_MEASURES)


def poverty_measure(name: str, sample: IncomeSample, z: float) -> float:
    """Dispatch a named poverty measure (headcount, gap, gap_sq, watts)."""
    try:
        fn = _MEASURES[name]
    except KeyError:
        raise ValueError(f"unknown measure {name!r}; expected one of {MEASURE_NAMES}")
    return fn(sample, z)
