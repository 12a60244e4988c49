"""Panel fixed-effects least squares with cluster-robust inference.

The estimator is the within transformation: interaction products are formed
on the raw columns first, then every column (and the dependent) has its
group mean removed, and slopes come from least squares on the transformed
data. This is algebraically the same fit as least squares with explicit
group dummies (LSDV), which the test suite uses as an independent oracle.

The reported constant follows the convention of panel packages that print a
single intercept next to "fixed effects: yes": it is the grand mean of the
dependent minus the slopes times the regressors' grand means, estimated
(with a clustered standard error) from the mean-recentered regression

    y_it - ybar_i + ybar  on  [1, x_it - xbar_i + xbar]

whose slopes and residuals are identical to the within fit.

Clustered covariance is the sandwich over cluster score sums with the
small-sample factor [G/(G-1)] * [(N-1)/(N-K)] and t(G-1) inference, where K
counts the slopes plus the constant. When every observation is its own
cluster this reduces exactly to the HC1 heteroskedasticity-robust estimator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, stats

from .errors import (
    MissingModeratorValue,
    NoObservations,
    RankDeficient,
    TooFewClusters,
)


def interaction_name(a: str, b: str) -> str:
    return f"{a}:{b}"


@dataclass(frozen=True)
class ModelSpec:
    """What to regress on what, with which effects and clustering."""

    dependent: str
    regressors: tuple[str, ...]
    interactions: tuple[tuple[str, str], ...] = ()
    fixed_effect: str = "country"
    cluster: str = "country"
    include_constant: bool = True

    def __post_init__(self):
        object.__setattr__(self, "regressors", tuple(self.regressors))
        object.__setattr__(
            self, "interactions", tuple(tuple(p) for p in self.interactions)
        )
        terms = self.term_names()
        if len(set(terms)) != len(terms):
            raise ValueError(f"duplicate regressor names after expansion: {terms}")
        if self.dependent in terms:
            raise ValueError("dependent variable cannot appear among regressors")

    def term_names(self) -> tuple[str, ...]:
        return (*self.regressors,
                *(interaction_name(a, b) for a, b in self.interactions))

    def required_fields(self) -> tuple[str, ...]:
        seen: dict[str, None] = {self.dependent: None}
        for name in self.regressors:
            seen.setdefault(name, None)
        for a, b in self.interactions:
            seen.setdefault(a, None)
            seen.setdefault(b, None)
        return tuple(seen)


@dataclass(frozen=True)
class RegressionResult:
    """Slopes, clustered covariance, and fit diagnostics."""

    spec: ModelSpec
    terms: tuple[str, ...]
    coefficients: dict[str, float]
    clustered_se: dict[str, float]
    vcov: np.ndarray          # ordered as vcov_terms
    vcov_terms: tuple[str, ...]
    constant: float | None
    constant_se: float | None
    n_obs: int
    n_clusters: int
    n_countries: int
    adjusted_r2: float
    within_r2: float
    residuals: np.ndarray
    fe_values: tuple          # fixed-effect label per used row
    cluster_values: tuple     # cluster label per used row
    dropped: dict[str, int] = field(default_factory=dict)

    def se(self, name: str) -> float:
        if name == "const":
            if self.constant_se is None:
                raise KeyError("model has no constant")
            return self.constant_se
        return self.clustered_se[name]

    def estimate(self, name: str) -> float:
        if name == "const":
            if self.constant is None:
                raise KeyError("model has no constant")
            return self.constant
        return self.coefficients[name]

    def p_value(self, name: str) -> float:
        t = self.estimate(name) / self.se(name)
        return 2.0 * float(stats.t.sf(abs(t), self.n_clusters - 1))


def cluster_vcov(
    design: np.ndarray,
    residuals: np.ndarray,
    clusters: np.ndarray,
    n_params: int | None = None,
    small_sample: bool = True,
) -> np.ndarray:
    """Cluster-robust sandwich covariance for an OLS fit.

    ``n_params`` is the K used in the (N-1)/(N-K) small-sample factor; it
    defaults to the number of design columns.
    """
    n, k = design.shape
    labels = np.asarray(clusters)
    unique = np.unique(labels)
    n_clusters = unique.size
    if n_clusters < 2:
        raise TooFewClusters(int(n_clusters))
    K = k if n_params is None else n_params
    xu = design * residuals[:, None]
    meat = np.zeros((k, k))
    for g in unique:
        s = xu[labels == g].sum(axis=0)
        meat += np.outer(s, s)
    bread = np.linalg.inv(design.T @ design)
    vcov = bread @ meat @ bread
    if small_sample:
        vcov *= (n_clusters / (n_clusters - 1)) * ((n - 1) / (n - K))
    return vcov


def _demean_by(values: np.ndarray, groups: np.ndarray) -> np.ndarray:
    """Subtract the group mean from each row (values may be 1-d or 2-d)."""
    out = values.astype(float).copy()
    for g in np.unique(groups):
        mask = groups == g
        out[mask] -= out[mask].mean(axis=0)
    return out


def fit_fe_ols(
    records,
    spec: ModelSpec,
    small_sample: bool = True,
) -> RegressionResult:
    """Fit a fixed-effects model on a sequence of mapping-like records.

    Rows with any required field absent are dropped listwise (counts per
    field reported in ``dropped``). Needs at least two clusters and a
    full-rank within-transformed design.
    """
    required = spec.required_fields()
    used: list[dict] = []
    dropped: dict[str, int] = {}
    for rec in records:
        missing = [f for f in required if rec.get(f) is None]
        for dim in sorted({spec.fixed_effect, spec.cluster}):
            if rec.get(dim) is None:
                missing.append(dim)
        if missing:
            for f in missing:
                dropped[f] = dropped.get(f, 0) + 1
            continue
        used.append(rec)
    if not used:
        raise NoObservations("all rows dropped in listwise deletion")

    fe = np.array([rec[spec.fixed_effect] for rec in used])
    cl = np.array([rec[spec.cluster] for rec in used])
    n_clusters = np.unique(cl).size
    if n_clusters < 2:
        raise TooFewClusters(int(n_clusters))

    y = np.array([float(rec[spec.dependent]) for rec in used])
    base = {
        name: np.array([float(rec[name]) for rec in used])
        for name in set(spec.regressors) | {f for pair in spec.interactions for f in pair}
    }
    terms = spec.term_names()
    columns = [base[name] for name in spec.regressors]
    # products on the raw columns, before any demeaning
    columns += [base[a] * base[b] for a, b in spec.interactions]
    X = np.column_stack(columns)
    n, k = X.shape

    Xw = _demean_by(X, fe)
    yw = _demean_by(y, fe)

    _, R, pivots = linalg.qr(Xw, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    tol = max(n, k) * np.finfo(float).eps * (diag[0] if diag.size else 0.0)
    rank = int(np.sum(diag > tol))
    if rank < k:
        offenders = [terms[p] for p in pivots[rank:]]
        raise RankDeficient(sorted(offenders))

    beta, *_ = np.linalg.lstsq(Xw, yw, rcond=None)
    residuals = yw - Xw @ beta

    grand_y = y.mean()
    grand_x = X.mean(axis=0)
    constant = float(grand_y - grand_x @ beta) if spec.include_constant else None

    if spec.include_constant:
        design = np.column_stack([np.ones(n), Xw + grand_x])
        vcov_terms = ("const", *terms)
        K = k + 1
    else:
        design = Xw
        vcov_terms = terms
        K = k
    vcov = cluster_vcov(design, residuals, cl, n_params=K, small_sample=small_sample)
    ses = np.sqrt(np.diag(vcov))

    if spec.include_constant:
        constant_se = float(ses[0])
        slope_se = ses[1:]
    else:
        constant_se = None
        slope_se = ses

    ssr = float(residuals @ residuals)
    sst = float(((y - grand_y) ** 2).sum())
    sst_within = float(yw @ yw)
    n_groups = np.unique(fe).size
    df_lsdv = n - n_groups - k
    if df_lsdv <= 0 or sst == 0:
        adjusted_r2 = float("nan")
    else:
        adjusted_r2 = 1.0 - (ssr / df_lsdv) / (sst / (n - 1))
    within_r2 = 1.0 - ssr / sst_within if sst_within > 0 else float("nan")

    return RegressionResult(
        spec=spec,
        terms=terms,
        coefficients={name: float(b) for name, b in zip(terms, beta)},
        clustered_se={name: float(s) for name, s in zip(terms, slope_se)},
        vcov=vcov,
        vcov_terms=vcov_terms,
        constant=constant,
        constant_se=constant_se,
        n_obs=n,
        n_clusters=int(n_clusters),
        n_countries=int(n_groups),
        adjusted_r2=adjusted_r2,
        within_r2=within_r2,
        residuals=residuals,
        fe_values=tuple(fe.tolist()),
        cluster_values=tuple(cl.tolist()),
        dropped=dropped,
    )


@dataclass(frozen=True)
class MarginalEffect:
    estimate: float
    se: float


def marginal_effect(
    result: RegressionResult,
    of: str,
    at: dict[str, float] | None = None,
) -> MarginalEffect:
    """Marginal effect of ``of`` at given moderator values.

    For each interaction involving ``of``, the partner's value must be
    supplied in ``at``; the standard error is the exact delta-method SE of
    the resulting linear combination of coefficients.
    """
    at = at or {}
    if of not in result.coefficients:
        raise KeyError(f"{of!r} is not a regressor in this model")
    weights = np.zeros(len(result.vcov_terms))
    index = {name: i for i, name in enumerate(result.vcov_terms)}
    weights[index[of]] = 1.0
    estimate = result.coefficients[of]
    for a, b in result.spec.interactions:
        if of not in (a, b):
            continue
        partner = b if of == a else a
        if partner not in at:
            raise MissingModeratorValue(partner)
        term = interaction_name(a, b)
        estimate += result.coefficients[term] * at[partner]
        weights[index[term]] = at[partner]
    variance = float(weights @ result.vcov @ weights)
    return MarginalEffect(estimate=float(estimate), se=float(np.sqrt(max(variance, 0.0))))


def significance_stars(estimate: float, se: float, n_clusters: int) -> str:
    """Stars from a two-sided t(G-1) test: 1% -> ***, 5% -> **, 10% -> *."""
    if not se > 0:
        raise ValueError("standard error must be positive")
    p = 2.0 * float(stats.t.sf(abs(estimate / se), n_clusters - 1))
    if p < 0.01:
        return "***"
    if p < 0.05:
        return "**"
    if p < 0.10:
        return "*"
    return ""
