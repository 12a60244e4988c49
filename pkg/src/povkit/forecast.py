"""Scenario projection of poverty headcounts and global aggregation.

Each country's headcount path starts from its last observed value and
accumulates the model-implied change year by year, clamped to [0, 1].
Shocks to inequality or inclusion are read as relative changes to the
country's last observed level, realized once in the shock year (both the
relative/absolute reading and one-time/per-year repetition are flags).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .errors import MissingCoefficient, MissingPopulation, NoBaseValue
from .panel import AnalysisPanel
from .regression import interaction_name

PROJECTION_YEARS = (2019, 2020, 2021)
DEFAULT_SHOCK_YEAR = 2020


@dataclass(frozen=True)
class CoefficientNames:
    """Which model terms play which role in the projection equation."""

    gini: str = "d_gini"
    growth: str = "gdp_growth"
    fii: str = "d_fii"

    @property
    def interaction(self) -> str:
        return interaction_name(self.gini, self.fii)


@dataclass(frozen=True)
class Scenario:
    """Growth assumptions plus optional one-time Gini / inclusion shocks."""

    name: str
    gdp_growth: Mapping[tuple[str, int], float]
    years: tuple[int, ...] = PROJECTION_YEARS
    gini_shock: float = 0.0
    fii_shock: float = 0.0
    shock_year: int | None = None
    relative: bool = True
    repeat_shock: bool = False

    def __post_init__(self):
        years = tuple(self.years)
        if not years or list(years) != list(range(years[0], years[-1] + 1)):
            raise ValueError("projection years must be contiguous and ascending")
        object.__setattr__(self, "years", years)
        if (self.gini_shock or self.fii_shock) and self.shock_year not in years:
            raise ValueError("shock_year must be one of the projection years")

    def shock_applies(self, year: int) -> bool:
        if self.shock_year is None:
            return False
        return year >= self.shock_year if self.repeat_shock else year == self.shock_year


@dataclass(frozen=True)
class CountryPath:
    base_year: int
    base_headcount: float
    values: dict[int, float]  # projection year -> clamped headcount


@dataclass(frozen=True)
class ForecastPath:
    scenario: str
    base_source: str
    paths: dict[str, CountryPath]
    excluded: tuple[NoBaseValue, ...] = ()


@dataclass(frozen=True)
class GlobalPath:
    """Population-weighted poverty rate and poor count per year."""

    scenario: str
    rows: tuple[tuple[int, float, float], ...]  # (year, rate, poor_count)
    population_fallbacks: tuple[tuple[str, int, int], ...] = ()  # (iso3, wanted, used)


def _last_observed(rows, name: str):
    for row in reversed(rows):
        value = getattr(row, name)
        if value is not None:
            return row.year, value
    return None


def project(
    model,
    panel: AnalysisPanel,
    scenario: Scenario,
    names: CoefficientNames = CoefficientNames(),
) -> ForecastPath:
    """Project per-country headcount paths under one scenario.

    ``model`` is anything with ``coefficients`` and ``constant`` (a fitted
    :class:`RegressionResult` or a reloaded :class:`SavedModel`). Countries
    missing a base headcount, Gini, inclusion level, or a growth assumption
    for any projection year are excluded and reported.
    """
    for coef in (names.gini, names.growth, names.fii, names.interaction):
        if coef not in model.coefficients:
            raise MissingCoefficient(coef)
    if model.constant is None:
        raise MissingCoefficient("const")
    beta = model.coefficients[names.gini]
    gamma = model.coefficients[names.growth]
    delta = model.coefficients[names.fii]
    phi = model.coefficients[names.interaction]
    const = model.constant

    paths: dict[str, CountryPath] = {}
    excluded: list[NoBaseValue] = []
    for iso3, rows in sorted(panel.by_country().items()):
        base = _last_observed(rows, "headcount")
        if base is None:
            excluded.append(NoBaseValue(iso3, "headcount"))
            continue
        base_gini = _last_observed(rows, "gini")
        if base_gini is None:
            excluded.append(NoBaseValue(iso3, "gini"))
            continue
        base_fii = _last_observed(rows, "fii")
        if base_fii is None:
            excluded.append(NoBaseValue(iso3, "fii"))
            continue
        growth = {}
        missing_growth = None
        for year in scenario.years:
            g = scenario.gdp_growth.get((iso3, year))
            if g is None:
                missing_growth = NoBaseValue(iso3, f"gdp_growth@{year}")
                break
            growth[year] = g
        if missing_growth is not None:
            excluded.append(missing_growth)
            continue

        base_year, level = base
        values: dict[int, float] = {}
        for year in scenario.years:
            if scenario.shock_applies(year):
                d_gini = (
                    scenario.gini_shock * base_gini[1]
                    if scenario.relative
                    else scenario.gini_shock
                )
                d_fii = (
                    scenario.fii_shock * base_fii[1]
                    if scenario.relative
                    else scenario.fii_shock
                )
            else:
                d_gini = 0.0
                d_fii = 0.0
            change = (
                const
                + beta * d_gini
                + gamma * growth[year]
                + delta * d_fii
                + phi * d_gini * d_fii
            )
            level = min(1.0, max(0.0, level + change))
            values[year] = level
        paths[iso3] = CountryPath(base_year=base_year, base_headcount=base[1], values=values)

    return ForecastPath(
        scenario=scenario.name,
        base_source="last observed headcount",
        paths=paths,
        excluded=tuple(excluded),
    )


def population_lookup(population_panel: AnalysisPanel):
    """(iso3, year) -> population, falling back to the latest year with data.

    Returns (lookup, fallback_log); the log records (iso3, wanted, used)
    whenever an exact year was unavailable.
    """
    by_country: dict[str, dict[int, float]] = {}
    for row in population_panel.rows:
        if row.population is not None:
            by_country.setdefault(row.country.iso3, {})[row.year] = row.population
    log: list[tuple[str, int, int]] = []

    def lookup(iso3: str, year: int) -> float:
        years = by_country.get(iso3)
        if not years:
            raise MissingPopulation(iso3)
        if year in years:
            return years[year]
        earlier = [y for y in years if y <= year]
        used = max(earlier) if earlier else min(years)
        log.append((iso3, year, used))
        return years[used]

    return lookup, log


def aggregate_global(
    path: ForecastPath,
    population_panel: AnalysisPanel,
    scope: set[str] | None = None,
) -> GlobalPath:
    """Population-weighted global poverty rate and poor count per year."""
    lookup, log = population_lookup(population_panel)
    countries = sorted(path.paths)
    if scope is not None:
        countries = [c for c in countries if c in scope]
    rows = []
    years = sorted({year for c in countries for year in path.paths[c].values})
    for year in years:
        pop_total = 0.0
        poor_total = 0.0
        for iso3 in countries:
            country_path = path.paths[iso3]
            if year not in country_path.values:
                continue
            pop = lookup(iso3, year)
            pop_total += pop
            poor_total += pop * country_path.values[year]
        if pop_total > 0:
            rows.append((year, poor_total / pop_total, poor_total))
    return GlobalPath(
        scenario=path.scenario,
        rows=tuple(rows),
        population_fallbacks=tuple(sorted(set(log))),
    )


def scenario_suite(
    model,
    panel: AnalysisPanel,
    gdp_growth: Mapping[tuple[str, int], float],
    years: tuple[int, ...] = PROJECTION_YEARS,
    shock_year: int = DEFAULT_SHOCK_YEAR,
    gini_shock: float = 0.01,
    fii_shock: float = 0.10,
    names: CoefficientNames = CoefficientNames(),
) -> dict[str, ForecastPath]:
    """The three standard scenarios: growth only, +Gini shock, +inclusion shock."""
    scenarios = (
        Scenario("s1_growth", gdp_growth, years),
        Scenario("s2_gini_up", gdp_growth, years,
                 gini_shock=gini_shock, shock_year=shock_year),
        Scenario("s3_inclusion_up", gdp_growth, years,
                 fii_shock=fii_shock, shock_year=shock_year),
    )
    return {s.name: project(model, panel, s, names) for s in scenarios}


def growth_assumptions(weo_panel: AnalysisPanel, years) -> dict[tuple[str, int], float]:
    """Extract (iso3, year) -> growth for the projection years from a WEO panel."""
    wanted = set(years)
    out: dict[tuple[str, int], float] = {}
    for row in weo_panel.rows:
        if row.year in wanted and row.gdp_growth is not None:
            out[(row.country.iso3, row.year)] = row.gdp_growth
    return out


@dataclass(frozen=True)
class SavedModel:
    """Coefficients reloaded from a model file; enough to project with."""

    coefficients: dict[str, float]
    constant: float | None


def save_model_csv(model, path: str | Path) -> None:
    """Persist coefficients (and the constant) at full precision."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["term", "estimate"])
        if model.constant is not None:
            writer.writerow(["const", repr(model.constant)])
        for name, value in model.coefficients.items():
            writer.writerow([name, repr(value)])


def load_model_csv(path: str | Path) -> SavedModel:
    coefficients: dict[str, float] = {}
    constant = None
    with Path(path).open(newline="", encoding="utf-8") as fh:
        for rec in csv.DictReader(fh):
            if rec["term"] == "const":
                constant = float(rec["estimate"])
            else:
                coefficients[rec["term"]] = float(rec["estimate"])
    return SavedModel(coefficients=coefficients, constant=constant)
