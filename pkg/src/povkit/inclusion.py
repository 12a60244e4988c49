"""Financial-inclusion index construction from supply-side banking data.

Pipeline: winsorize each raw indicator at an upper quantile, min-max
normalize it over the pooled country-year sample, weight the four outreach
indicators by the first principal component of their correlation matrix,
take the normalized deposit-accounts indicator as the usage dimension, and
weight {outreach, usage} by a second first-PC pass to get the overall
index. Every emitted series is min-max rescaled onto [0, 1].

PCA here is always on the correlation matrix, so eigenvalues sum to the
number of columns and the leading eigenvalue divided by the column count
is the explained variance share.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, DegenerateColumn, InsufficientRows
from .panel import FAS_INDICATORS, AnalysisPanel

WINSOR_PCT = 0.95

OUTREACH_INDICATORS = FAS_INDICATORS[:4]
USAGE_INDICATOR = FAS_INDICATORS[4]


@dataclass(frozen=True)
class IndicatorMatrix:
    """Complete-case (country, year) x indicator matrix."""

    keys: tuple[tuple[str, int], ...]
    columns: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.keys), len(self.columns)):
            raise ValueError("values shape must match keys x columns")
        if len(self.keys) < 2 or len(self.columns) < 2:
            raise InsufficientRows(len(self.keys), 2)
        if not np.all(np.isfinite(values)):
            raise ValueError("indicator matrix must be complete (no absent cells)")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class PcaResult:
    """Leading eigenpair of a correlation matrix, sign-fixed to sum positive."""

    weights: np.ndarray
    eigenvalue: float
    variance_share: float

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class IndexSeries:
    """A 0-1 scaled index over (country, year) keys."""

    kind: str  # fii | outreach | usage
    values: dict[tuple[str, int], float]

    def __post_init__(self):
        vals = np.array(list(self.values.values()), dtype=float)
        if vals.size == 0:
            raise ValueError("index series cannot be empty")
        if vals.min() < -1e-12 or vals.max() > 1 + 1e-12:
            raise ValueError("index values must lie in [0, 1]")


def winsorize_upper(values, pct: float = WINSOR_PCT) -> np.ndarray:
    """Cap values above the ``pct`` linear-interpolation quantile."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("cannot winsorize an empty sequence")
    if not 0 < pct < 1:
        raise ValueError("pct must be in (0, 1)")
    cap = np.quantile(values, pct)
    return np.minimum(values, cap)


def minmax_normalize(values, name: str = "") -> np.ndarray:
    """Affine map onto [0, 1] over the pooled sample."""
    values = np.asarray(values, dtype=float)
    lo, hi = values.min(), values.max()
    if hi == lo:
        raise DegenerateColumn(name)
    return (values - lo) / (hi - lo)


def orient_loadings(w: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Fix the eigenvector sign: positive sum, or, when the sum is zero to
    within ``tol``, a positive first non-negligible component."""
    total = w.sum()
    if total < -tol:
        return -w
    if abs(total) <= tol:
        lead = int(np.argmax(np.abs(w) > tol))
        if w[lead] < 0:
            return -w
    return w


def pca_first_component(matrix: IndicatorMatrix) -> PcaResult:
    """Leading eigenpair of the columns' correlation matrix.

    Deterministic (symmetric eigensolver); the loading vector is unit norm
    with positive sum. Mixed-sign loadings on an all-positive correlation
    block are suspicious and trigger a warning.
    """
    values = matrix.values
    sds = values.std(axis=0)
    for j, sd in enumerate(sds):
        if sd == 0:
            raise DegenerateColumn(matrix.columns[j])
    corr = np.corrcoef(values, rowvar=False)
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(corr)
    except np.linalg.LinAlgError as err:
        raise ConvergenceFailure(str(err))
    lead = int(np.argmax(eigenvalues))
    lam = float(eigenvalues[lead])
    w = eigenvectors[:, lead]
    w = orient_loadings(w)
    if np.any(w < -1e-12):
        warnings.warn(
            "leading component has negative loadings: indicators are not all "
            "positively oriented, composite-index interpretation is unsafe",
            stacklevel=2,
        )
    return PcaResult(weights=w, eigenvalue=lam, variance_share=lam / corr.shape[0])


@dataclass(frozen=True)
class IndexBundle:
    """All three index series plus construction diagnostics."""

    fii: IndexSeries
    outreach: IndexSeries
    usage: IndexSeries
    outreach_pca: PcaResult
    overall_pca: PcaResult
    dropped: tuple[tuple[str, int], ...]  # incomplete (country, year) keys


def build_indices(fas_panel: AnalysisPanel, winsor_pct: float = WINSOR_PCT) -> IndexBundle:
    """Run the full two-stage index pipeline on a raw-indicator panel.

    Rows missing any of the five indicators are dropped (and reported);
    winsorization and normalization are pooled across all country-years so
    the 0-1 scale is comparable over time.
    """
    keys: list[tuple[str, int]] = []
    raw: list[list[float]] = []
    dropped: list[tuple[str, int]] = []
    for row in fas_panel.rows:
        cells = [getattr(row, name) for name in FAS_INDICATORS]
        if any(c is None for c in cells):
            dropped.append((row.country.iso3, row.year))
        else:
            keys.append((row.country.iso3, row.year))
            raw.append(cells)
    if len(keys) < 2:
        raise InsufficientRows(len(keys), 2)
    data = np.array(raw, dtype=float)

    normalized = np.empty_like(data)
    for j, name in enumerate(FAS_INDICATORS):
        normalized[:, j] = minmax_normalize(winsorize_upper(data[:, j], winsor_pct), name)

    outreach_matrix = IndicatorMatrix(
        keys=tuple(keys),
        columns=OUTREACH_INDICATORS,
        values=normalized[:, :4],
    )
    outreach_pca = pca_first_component(outreach_matrix)
    outreach_scores = minmax_normalize(normalized[:, :4] @ outreach_pca.weights, "outreach")

    usage_scores = normalized[:, 4]

    overall_matrix = IndicatorMatrix(
        keys=tuple(keys),
        columns=("outreach", "usage"),
        values=np.column_stack([outreach_scores, usage_scores]),
    )
    overall_pca = pca_first_component(overall_matrix)
    fii_scores = minmax_normalize(overall_matrix.values @ overall_pca.weights, "fii")

    def series(kind: str, scores: np.ndarray) -> IndexSeries:
        return IndexSeries(kind, {key: float(v) for key, v in zip(keys, scores)})

    return IndexBundle(
        fii=series("fii", fii_scores),
        outreach=series("outreach", outreach_scores),
        usage=series("usage", usage_scores),
        outreach_pca=outreach_pca,
        overall_pca=overall_pca,
        dropped=tuple(dropped),
    )
