"""povkit: poverty, inequality, and financial-inclusion analytics.

Library + CLI for country-year panels: poverty and inequality measures,
growth/redistribution decomposition, composite inclusion indices via
two-stage principal components, panel fixed-effects regression with
cluster-robust errors, and scenario projection of poverty headcounts.
"""

from .decomposition import DecompResult, datt_ravallion
from .errors import PovkitError
from .forecast import (
    ForecastPath,
    GlobalPath,
    Scenario,
    aggregate_global,
    project,
    scenario_suite,
)
from .inclusion import (
    IndexSeries,
    IndicatorMatrix,
    PcaResult,
    build_indices,
    minmax_normalize,
    pca_first_component,
    winsorize_upper,
)
from .measures import (
    Distribution,
    IncomeSample,
    LorenzCurve,
    fgt,
    gini,
    lorenz_from_sample,
    sample_from_distribution,
    watts,
)
from .panel import (
    AnalysisPanel,
    CountryKey,
    DiffRow,
    PanelRow,
    filter_income,
    first_difference,
    forward_fill_waves,
    load_csv,
    merge_panels,
    summarize,
    write_panel_csv,
)
from .regression import (
    ModelSpec,
    RegressionResult,
    cluster_vcov,
    fit_fe_ols,
    marginal_effect,
    significance_stars,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisPanel", "CountryKey", "DecompResult", "DiffRow", "Distribution",
    "ForecastPath", "GlobalPath", "IncomeSample", "IndexSeries",
    "IndicatorMatrix", "LorenzCurve", "ModelSpec", "PanelRow", "PcaResult",
    "PovkitError", "RegressionResult", "Scenario", "aggregate_global",
    "build_indices", "cluster_vcov", "datt_ravallion", "fgt", "filter_income",
    "first_difference", "fit_fe_ols", "forward_fill_waves", "gini",
    "load_csv", "lorenz_from_sample", "marginal_effect", "merge_panels",
    "minmax_normalize", "pca_first_component", "project",
    "sample_from_distribution", "scenario_suite", "significance_stars",
    "summarize", "watts", "winsorize_upper", "write_panel_csv",
]
