"""Publication-style table rendering: aligned text plus a CSV twin.

Regression tables print coefficients to 3 decimals with significance stars,
bracketed clustered standard errors beneath, and the standard footer block
(observations, adjusted R-squared, country count, fixed-effect and cluster
rows). The CSV twin carries full precision and reparses losslessly.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

from .errors import LayoutMismatch
from .panel import CountryKey, VariableSummary
from .regression import RegressionResult, significance_stars


@dataclass(frozen=True)
class CoefCell:
    estimate: float
    se: float
    stars: str


@dataclass(frozen=True)
class TableColumn:
    """One regression column: ordered coefficient cells plus footer stats."""

    header: str
    coefficients: tuple[CoefCell, ...]
    constant: CoefCell | None
    n_obs: int
    adjusted_r2: float
    n_countries: int
    fixed_effects: str = "Yes"
    cluster: str = "Country"


# term-label rows per layout; the renderer checks arity against these
REGRESSION_LAYOUTS: dict[str, tuple[str, ...]] = {
    "table2": ("ΔGini", "GDP growth rate"),
    "table3": ("ΔGini", "GDP growth rate", "ΔFinancial inclusion",
               "ΔGini x ΔFinancial inclusion"),
    "table4": ("ΔGini", "GDP growth rate", "ΔAccount ownership",
               "ΔGini x ΔAccount ownership"),
    "tableA4": ("Gini", "GDP growth rate", "Financial inclusion",
                "Gini x Financial inclusion"),
}

FOOTER_LABELS = (
    ("n_obs", "Observations"),
    ("adjusted_r2", "Adjusted R²"),
    ("n_countries", "Number of country"),
    ("fixed_effects", "Country fixed effects"),
    ("cluster", "Robust standard error cluster"),
)


def column_from_result(result: RegressionResult, header: str) -> TableColumn:
    """Build a renderable column from a fitted model, stars included."""
    cells = tuple(
        CoefCell(
            estimate=result.coefficients[t],
            se=result.clustered_se[t],
            stars=significance_stars(
                result.coefficients[t], result.clustered_se[t], result.n_clusters
            ),
        )
        for t in result.terms
    )
    constant = None
    if result.constant is not None:
        constant = CoefCell(
            estimate=result.constant,
            se=result.constant_se,
            stars=significance_stars(result.constant, result.constant_se,
                                     result.n_clusters),
        )
    return TableColumn(
        header=header,
        coefficients=cells,
        constant=constant,
        n_obs=result.n_obs,
        adjusted_r2=result.adjusted_r2,
        n_countries=result.n_countries,
    )


def _fmt_coef(value: float) -> str:
    return f"{value:.3f}"


def _fmt_r2(value: float) -> str:
    return f"{value:.3g}"


def render_table(columns: list[TableColumn], layout: str) -> tuple[str, str]:
    """Render regression columns in a named layout; returns (text, csv)."""
    if layout not in REGRESSION_LAYOUTS:
        raise LayoutMismatch(layout, f"expected one of {sorted(REGRESSION_LAYOUTS)}")
    labels = REGRESSION_LAYOUTS[layout]
    if not columns:
        raise LayoutMismatch(layout, "no columns to render")
    for col in columns:
        if len(col.coefficients) != len(labels):
            raise LayoutMismatch(
                layout,
                f"column {col.header!r} has {len(col.coefficients)} coefficient rows,"
                f" layout expects {len(labels)}",
            )

    # text grid: label column + one column per result, two lines per term
    grid: list[list[str]] = [["Dependent variable", *(c.header for c in columns)]]
    for i, label in enumerate(labels):
        est_row = [label]
        se_row = [""]
        for col in columns:
            cell = col.coefficients[i]
            est_row.append(_fmt_coef(cell.estimate) + cell.stars)
            se_row.append(f"[{_fmt_coef(cell.se)}]")
        grid.append(est_row)
        grid.append(se_row)
    if any(col.constant is not None for col in columns):
        est_row, se_row = ["Constant"], [""]
        for col in columns:
            if col.constant is None:
                est_row.append("")
                se_row.append("")
            else:
                est_row.append(_fmt_coef(col.constant.estimate) + col.constant.stars)
                se_row.append(f"[{_fmt_coef(col.constant.se)}]")
        grid.append(est_row)
        grid.append(se_row)
    footer_values = {
        "n_obs": lambda c: str(c.n_obs),
        "adjusted_r2": lambda c: _fmt_r2(c.adjusted_r2),
        "n_countries": lambda c: str(c.n_countries),
        "fixed_effects": lambda c: c.fixed_effects,
        "cluster": lambda c: c.cluster,
    }
    for key, label in FOOTER_LABELS:
        grid.append([label, *(footer_values[key](c) for c in columns)])

    widths = [max(len(row[j]) for row in grid) for j in range(len(grid[0]))]
    lines = []
    for idx, row in enumerate(grid):
        cells = [row[0].ljust(widths[0])]
        cells += [row[j].rjust(widths[j]) for j in range(1, len(row))]
        lines.append("  ".join(cells).rstrip())
        if idx == 0:
            lines.append("-" * len(lines[0]))
    text = "\n".join(lines) + "\n"

    # CSV twin at full precision
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["column", "header", "kind", "label", "estimate", "se", "stars"])
    for ci, col in enumerate(columns, start=1):
        for label, cell in zip(labels, col.coefficients):
            writer.writerow([ci, col.header, "coef", label,
                             repr(cell.estimate), repr(cell.se), cell.stars])
        if col.constant is not None:
            writer.writerow([ci, col.header, "constant", "Constant",
                             repr(col.constant.estimate), repr(col.constant.se),
                             col.constant.stars])
        writer.writerow([ci, col.header, "stat", "Observations", col.n_obs, "", ""])
        writer.writerow([ci, col.header, "stat", "Adjusted R²",
                         repr(col.adjusted_r2), "", ""])
        writer.writerow([ci, col.header, "stat", "Number of country",
                         col.n_countries, "", ""])
        writer.writerow([ci, col.header, "stat", "Country fixed effects",
                         col.fixed_effects, "", ""])
        writer.writerow([ci, col.header, "stat", "Robust standard error cluster",
                         col.cluster, "", ""])
    return text, buf.getvalue()


def parse_table_csv(csv_text: str) -> list[TableColumn]:
    """Rebuild TableColumns from the CSV twin (full precision)."""
    reader = csv.DictReader(io.StringIO(csv_text))
    by_column: dict[int, dict] = {}
    for rec in reader:
        ci = int(rec["column"])
        slot = by_column.setdefault(
            ci, {"header": rec["header"], "coefficients": [], "constant": None,
                 "stats": {}}
        )
        if rec["kind"] == "coef":
            slot["coefficients"].append(
                CoefCell(float(rec["estimate"]), float(rec["se"]), rec["stars"])
            )
        elif rec["kind"] == "constant":
            slot["constant"] = CoefCell(
                float(rec["estimate"]), float(rec["se"]), rec["stars"]
            )
        else:
            slot["stats"][rec["label"]] = rec["estimate"]
    columns = []
    for ci in sorted(by_column):
        slot = by_column[ci]
        stats = slot["stats"]
        columns.append(
            TableColumn(
                header=slot["header"],
                coefficients=tuple(slot["coefficients"]),
                constant=slot["constant"],
                n_obs=int(stats["Observations"]),
                adjusted_r2=float(stats["Adjusted R²"]),
                n_countries=int(stats["Number of country"]),
                fixed_effects=stats["Country fixed effects"],
                cluster=stats["Robust standard error cluster"],
            )
        )
    return columns


# ---------------------------------------------------------------------------
# Summary-statistics table

SUMMARY_COLUMNS = ("Mean", "Median", "Standard deviation", "Min", "Max", "NxT")


def render_summary(
    summaries: dict[str, VariableSummary],
    labels: dict[str, str] | None = None,
) -> tuple[str, str]:
    """Summary-statistics table (one variable per row); returns (text, csv)."""
    labels = labels or {}
    grid = [["", *SUMMARY_COLUMNS]]
    for name, s in summaries.items():
        grid.append([
            labels.get(name, name),
            _fmt_coef(s.mean), _fmt_coef(s.median),
            "" if s.sd is None else _fmt_coef(s.sd),
            _fmt_coef(s.min), _fmt_coef(s.max), str(s.n),
        ])
    widths = [max(len(row[j]) for row in grid) for j in range(len(grid[0]))]
    lines = []
    for idx, row in enumerate(grid):
        cells = [row[0].ljust(widths[0])]
        cells += [row[j].rjust(widths[j]) for j in range(1, len(row))]
        lines.append("  ".join(cells).rstrip())
        if idx == 0:
            lines.append("-" * len(lines[0]))
    text = "\n".join(lines) + "\n"

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["variable", "label", "mean", "median", "sd", "min", "max", "n"])
    for name, s in summaries.items():
        writer.writerow([
            name, labels.get(name, name), repr(s.mean), repr(s.median),
            "" if s.sd is None else repr(s.sd), repr(s.min), repr(s.max), s.n,
        ])
    return text, buf.getvalue()


def parse_summary_csv(csv_text: str) -> dict[str, VariableSummary]:
    reader = csv.DictReader(io.StringIO(csv_text))
    out = {}
    for rec in reader:
        out[rec["variable"]] = VariableSummary(
            mean=float(rec["mean"]),
            median=float(rec["median"]),
            sd=None if rec["sd"] == "" else float(rec["sd"]),
            min=float(rec["min"]),
            max=float(rec["max"]),
            n=int(rec["n"]),
        )
    return out


# ---------------------------------------------------------------------------
# Wide country-by-year index layout (appendix style)

_LEVEL_DISPLAY = {
    "low": "Low income",
    "lower_middle": "Lower-middle income",
    "upper_middle": "Upper-middle income",
    "high": "High income",
}
_LEVEL_FROM_DISPLAY = {v: k for k, v in _LEVEL_DISPLAY.items()}


def write_index_wide(
    values: dict[tuple[str, int], float],
    countries: dict[str, CountryKey],
    path: str | Path,
    include_income: bool = True,
) -> None:
    """Write an index series as country rows x year columns, 3 decimals.

    Missing country-years are left empty. Income level (display form) is
    included for the overall-index layout only.
    """
    years = sorted({year for _, year in values})
    codes = sorted({iso3 for iso3, _ in values})
    header = ["iso3", "country"]
    if include_income:
        header.append("income_level")
    header += [str(y) for y in years]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for iso3 in codes:
            key = countries.get(iso3, CountryKey(iso3))
            row = [iso3, key.name or iso3]
            if include_income:
                row.append(_LEVEL_DISPLAY.get(key.income_level, ""))
            for year in years:
                v = values.get((iso3, year))
                row.append("" if v is None else f"{v:.3f}")
            writer.writerow(row)


def read_index_wide(path: str | Path):
    """Read the wide layout back: (values, countries)."""
    values: dict[tuple[str, int], float] = {}
    countries: dict[str, CountryKey] = {}
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        has_income = "income_level" in header
        year_start = 3 if has_income else 2
        years = [int(h) for h in header[year_start:]]
        for row in reader:
            iso3 = row[0]
            level = _LEVEL_FROM_DISPLAY.get(row[2]) if has_income else None
            countries[iso3] = CountryKey(iso3, level, row[1])
            for year, cell in zip(years, row[year_start:]):
                if cell != "":
                    values[(iso3, year)] = float(cell)
    return values, countries
