"""Country-year panel ingestion, merging, filtering, and differencing.

Panels are immutable: every operation returns a new :class:`AnalysisPanel`.
Absent cells are a distinct state (``None``), never silently zero-filled,
and merge conflicts between non-absent values are errors rather than
last-wins overwrites.
"""

from __future__ import annotations

import csv
import math
import re
import statistics
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    BadNumeric,
    ConflictingValue,
    DuplicateKey,
    EmptyVariable,
    MissingColumn,
    PovkitError,
    RangeViolation,
    UnknownIncomeLevel,
)

INCOME_LEVELS = ("low", "lower_middle", "upper_middle", "high")

_ISO3_RE = re.compile(r"^[A-Z]{3}$")

YEAR_MIN, YEAR_MAX = 1981, 2030

# field -> (lower bound, upper bound); None = unbounded on that side
FIELD_BOUNDS: dict[str, tuple[float | None, float | None]] = {
    "headcount": (0.0, 1.0),
    "poverty_gap": (0.0, 1.0),
    "poverty_gap_sq": (0.0, 1.0),
    "watts": (0.0, None),
    "gini": (0.0, 1.0),
    "gdp_growth": (None, None),
    "fii": (0.0, 1.0),
    "outreach": (0.0, 1.0),
    "usage": (0.0, 1.0),
    "account_all": (0.0, 1.0),
    "account_male": (0.0, 1.0),
    "account_female": (0.0, 1.0),
    "population": (0.0, None),  # strictly positive, checked separately
    "branches_per_100k": (0.0, None),
    "atms_per_100k": (0.0, None),
    "branches_per_1000km2": (0.0, None),
    "atms_per_1000km2": (0.0, None),
    "accounts_per_1000": (0.0, None),
}

NUMERIC_FIELDS = tuple(FIELD_BOUNDS)

FAS_INDICATORS = (
    "branches_per_100k",
    "atms_per_100k",
    "branches_per_1000km2",
    "atms_per_1000km2",
    "accounts_per_1000",
)


@dataclass(frozen=True)
class CountryKey:
    """ISO3 identity plus income-level classification and a display name."""

    iso3: str
    income_level: str | None = None
    name: str | None = None

    def __post_init__(self):
        if not _ISO3_RE.match(self.iso3):
            raise ValueError(f"iso3 must be 3 uppercase letters, got {self.iso3!r}")
        if self.income_level is not None and self.income_level not in INCOME_LEVELS:
            raise ValueError(f"unknown income level {self.income_level!r}")


@dataclass(frozen=True)
class PanelRow:
    """One country-year observation; any variable may be absent (None)."""

    country: CountryKey
    year: int
    headcount: float | None = None
    poverty_gap: float | None = None
    poverty_gap_sq: float | None = None
    watts: float | None = None
    gini: float | None = None
    gdp_growth: float | None = None
    gdp_is_forecast: bool | None = None
    fii: float | None = None
    outreach: float | None = None
    usage: float | None = None
    account_all: float | None = None
    account_male: float | None = None
    account_female: float | None = None
    population: float | None = None
    branches_per_100k: float | None = None
    atms_per_100k: float | None = None
    branches_per_1000km2: float | None = None
    atms_per_1000km2: float | None = None
    accounts_per_1000: float | None = None

    def __post_init__(self):
        if not (YEAR_MIN <= self.year <= YEAR_MAX):
            raise ValueError(f"year {self.year} outside [{YEAR_MIN}, {YEAR_MAX}]")
        for name in NUMERIC_FIELDS:
            value = getattr(self, name)
            if value is None:
                continue
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            lo, hi = FIELD_BOUNDS[name]
            if (lo is not None and value < lo) or (hi is not None and value > hi):
                raise ValueError(f"{name}={value!r} outside bounds [{lo}, {hi}]")
        if self.population is not None and self.population <= 0:
            raise ValueError("population must be strictly positive")
        trio = (self.headcount, self.poverty_gap, self.poverty_gap_sq)
        if all(v is not None for v in trio):
            if not (trio[0] >= trio[1] >= trio[2]):
                raise ValueError(
                    "poverty ordering violated: need headcount >= gap >= gap squared"
                )

    def get(self, name: str):
        if name == "country":
            return self.country.iso3
        return getattr(self, name)


@dataclass(frozen=True)
class AnalysisPanel:
    """Sorted, key-unique collection of panel rows plus a country registry.

    The registry keeps income levels and display names for countries, which
    may be known (from an income classification file) even before any data
    rows exist for them.
    """

    rows: tuple[PanelRow, ...] = ()
    countries: dict[str, CountryKey] = field(default_factory=dict)

    @classmethod
    def from_rows(
        cls,
        rows: Iterable[PanelRow],
        extra_countries: Iterable[CountryKey] = (),
    ) -> "AnalysisPanel":
        """Build a panel: sort rows, enforce key uniqueness, resolve keys."""
        registry: dict[str, CountryKey] = {}
        for key in extra_countries:
            registry[key.iso3] = _merge_country_keys(registry.get(key.iso3), key)
        ordered = sorted(rows, key=lambda r: (r.country.iso3, r.year))
        seen: set[tuple[str, int]] = set()
        for row in ordered:
            k = (row.country.iso3, row.year)
            if k in seen:
                raise DuplicateKey(*k)
            seen.add(k)
            registry[k[0]] = _merge_country_keys(registry.get(k[0]), row.country)
        resolved = tuple(
            replace(row, country=registry[row.country.iso3]) for row in ordered
        )
        return cls(rows=resolved, countries=registry)

    def country_codes(self) -> tuple[str, ...]:
        return tuple(sorted({r.country.iso3 for r in self.rows}))

    def by_country(self) -> dict[str, list[PanelRow]]:
        out: dict[str, list[PanelRow]] = {}
        for row in self.rows:
            out.setdefault(row.country.iso3, []).append(row)
        return out

    def __len__(self) -> int:
        return len(self.rows)


def _merge_country_keys(a: CountryKey | None, b: CountryKey) -> CountryKey:
    """Combine two views of the same country; income-level conflicts error."""
    if a is None:
        return b
    level = a.income_level
    if b.income_level is not None:
        if level is not None and level != b.income_level:
            raise ConflictingValue(a.iso3, None, "income_level", (level, b.income_level))
        level = b.income_level
    name = a.name if a.name is not None else b.name
    return CountryKey(a.iso3, level, name)


# ---------------------------------------------------------------------------
# CSV schemas and loading

SCHEMAS: dict[str, tuple[str, ...]] = {
    "fas": (
        "iso3", "country_name", "year", "branches_per_100k", "atms_per_100k",
        "branches_per_1000km2", "atms_per_1000km2", "accounts_per_1000",
    ),
    "povcal": ("iso3", "year", "headcount", "poverty_gap", "poverty_gap_sq", "watts", "gini"),
    "weo": ("iso3", "year", "gdp_growth", "is_forecast"),
    "findex": ("iso3", "year", "account_all", "account_male", "account_female"),
    "population": ("iso3", "year", "population"),
    "income_class": ("iso3", "income_level"),
    "merged": (
        "iso3", "country_name", "income_level", "year",
        *NUMERIC_FIELDS[:6], "gdp_is_forecast", *NUMERIC_FIELDS[6:],
    ),
}


@dataclass(frozen=True)
class LoadResult:
    """Validated fragment plus diagnostics for every rejected source row."""

    panel: AnalysisPanel
    rejected: tuple[PovkitError, ...] = ()


def _parse_float(raw: str, line: int, column: str) -> float | None:
    raw = raw.strip()
    if raw == "":
        return None
    try:
        value = float(raw)
    except ValueError:
        raise BadNumeric(line, column, raw)
    if not math.isfinite(value):
        raise BadNumeric(line, column, raw)
    return value


def _check_bounds(value: float | None, line: int, column: str) -> float | None:
    if value is None:
        return None
    lo, hi = FIELD_BOUNDS[column]
    if (lo is not None and value < lo) or (hi is not None and value > hi):
        raise RangeViolation(line, column, value, f"[{lo}, {hi}]")
    if column == "population" and value <= 0:
        raise RangeViolation(line, column, value, "(0, inf)")
    return value


def load_csv(path: str | Path, schema: str, strict: bool = False) -> LoadResult:
    """Load one source CSV into a validated panel fragment.

    Bad rows (unparseable numerics, out-of-range rates, duplicate keys,
    malformed codes) are rejected individually and reported in
    ``LoadResult.rejected``; with ``strict=True`` the first such defect
    raises instead. A missing header column always raises.
    """
    if schema not in SCHEMAS:
        raise ValueError(f"unknown schema {schema!r}; expected one of {sorted(SCHEMAS)}")
    path = Path(path)
    columns = SCHEMAS[schema]
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in columns:
            if col not in header:
                raise MissingColumn(col, str(path))
        rows: list[PanelRow] = []
        extra_keys: list[CountryKey] = []
        rejected: list[PovkitError] = []
        seen: set[tuple[str, int | None]] = set()
        for line_no, record in enumerate(reader, start=2):
            try:
                parsed = _parse_record(record, schema, line_no, seen)
            except PovkitError as err:
                if strict:
                    raise
                rejected.append(err)
                continue
            if isinstance(parsed, CountryKey):
                extra_keys.append(parsed)
            else:
                rows.append(parsed)
    return LoadResult(AnalysisPanel.from_rows(rows, extra_keys), tuple(rejected))


def _parse_record(record, schema, line, seen) -> PanelRow | CountryKey:
    iso3 = (record.get("iso3") or "").strip().upper()
    if not _ISO3_RE.match(iso3):
        raise RangeViolation(line, "iso3", None, "3-letter ISO code")

    if schema == "income_class":
        level = (record.get("income_level") or "").strip()
        if level not in INCOME_LEVELS:
            raise RangeViolation(line, "income_level", None, f"one of {INCOME_LEVELS}")
        if (iso3, None) in seen:
            raise DuplicateKey(iso3, None, line)
        seen.add((iso3, None))
        return CountryKey(iso3, level)

    try:
        year = int((record.get("year") or "").strip())
    except ValueError:
        raise BadNumeric(line, "year", record.get("year", ""))
    if not (YEAR_MIN <= year <= YEAR_MAX):
        raise RangeViolation(line, "year", year, f"[{YEAR_MIN}, {YEAR_MAX}]")
    if (iso3, year) in seen:
        raise DuplicateKey(iso3, year, line)
    seen.add((iso3, year))

    values: dict[str, object] = {}
    name = None
    level = None
    for col in SCHEMAS[schema]:
        if col in ("iso3", "year"):
            continue
        raw = record.get(col) or ""
        if col == "country_name":
            name = raw.strip() or None
        elif col == "income_level":
            raw = raw.strip()
            if raw:
                if raw not in INCOME_LEVELS:
                    raise RangeViolation(line, col, None, f"one of {INCOME_LEVELS}")
                level = raw
        elif col in ("is_forecast", "gdp_is_forecast"):
            raw = raw.strip()
            if raw:
                if raw not in ("0", "1"):
                    raise BadNumeric(line, col, raw)
                values["gdp_is_forecast"] = raw == "1"
        else:
            values[col] = _check_bounds(_parse_float(raw, line, col), line, col)

    trio = (values.get("headcount"), values.get("poverty_gap"), values.get("poverty_gap_sq"))
    if all(v is not None for v in trio) and not (trio[0] >= trio[1] >= trio[2]):
        raise RangeViolation(line, "poverty_gap", trio[1], "headcount >= gap >= gap squared")

    key = CountryKey(iso3, level, name)
    return PanelRow(country=key, year=year, **values)


def write_panel_csv(panel: AnalysisPanel, path: str | Path) -> None:
    """Write the canonical merged CSV; reloading it reproduces the panel."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SCHEMAS["merged"])
        for row in panel.rows:
            record = [row.country.iso3, row.country.name or "",
                      row.country.income_level or "", row.year]
            for col in SCHEMAS["merged"][4:]:
                if col == "gdp_is_forecast":
                    v = row.gdp_is_forecast
                    record.append("" if v is None else ("1" if v else "0"))
                else:
                    v = getattr(row, col)
                    record.append("" if v is None else repr(v))
            writer.writerow(record)


# ---------------------------------------------------------------------------
# Panel operations

def merge_panels(fragments: Sequence[AnalysisPanel | LoadResult]) -> AnalysisPanel:
    """Outer-join fragments on (country, year).

    Disjoint fields combine; equal values coincide silently; differing
    non-absent values for the same cell raise :class:`ConflictingValue`.
    """
    panels = [f.panel if isinstance(f, LoadResult) else f for f in fragments]
    cells: dict[tuple[str, int], dict[str, object]] = {}
    registry: dict[str, CountryKey] = {}
    data_fields = [*NUMERIC_FIELDS, "gdp_is_forecast"]
    for panel in panels:
        for iso3, key in panel.countries.items():
            registry[iso3] = _merge_country_keys(registry.get(iso3), key)
        for row in panel.rows:
            cell = cells.setdefault((row.country.iso3, row.year), {})
            for name in data_fields:
                value = getattr(row, name)
                if value is None:
                    continue
                if name in cell and cell[name] != value:
                    raise ConflictingValue(row.country.iso3, row.year, name,
                                           (cell[name], value))
                cell[name] = value
    rows = [
        PanelRow(country=registry[iso3], year=year, **values)
        for (iso3, year), values in cells.items()
    ]
    return AnalysisPanel.from_rows(rows, registry.values())


def complete_rows(panel: AnalysisPanel, required: Sequence[str]) -> AnalysisPanel:
    """Keep only rows where every ``required`` field is present.

    This defines the analysis sample: differencing afterwards spans the
    calendar gaps between retained observations.
    """
    for name in required:
        if name not in NUMERIC_FIELDS:
            raise ValueError(f"unknown panel field {name!r}")
    rows = [
        r for r in panel.rows
        if all(getattr(r, name) is not None for name in required)
    ]
    return AnalysisPanel.from_rows(rows, panel.countries.values())


def filter_income(panel: AnalysisPanel, keep: Iterable[str]) -> AnalysisPanel:
    """Keep only rows whose country income level is in ``keep``."""
    keep = set(keep)
    unknown = keep - set(INCOME_LEVELS)
    if unknown:
        raise ValueError(f"unknown income levels: {sorted(unknown)}")
    for row in panel.rows:
        if row.country.income_level is None:
            raise UnknownIncomeLevel(row.country.iso3)
    rows = [r for r in panel.rows if r.country.income_level in keep]
    extra = [k for k in panel.countries.values() if k.income_level in keep]
    return AnalysisPanel.from_rows(rows, extra)


@dataclass(frozen=True)
class DiffRow:
    """Change between a country's adjacent available observations.

    ``year`` is the later of the two; ``gap_years`` their distance. Deltas
    are keyed by source field name; level fields (e.g. the growth rate,
    which enters the change regressions undifferenced) are copied from the
    later row.
    """

    country: CountryKey
    year: int
    gap_years: int
    deltas: dict[str, float | None]
    levels: dict[str, object]

    def record(self) -> dict[str, object]:
        rec: dict[str, object] = {
            "country": self.country.iso3,
            "year": self.year,
            "gap_years": self.gap_years,
        }
        for name, value in self.deltas.items():
            rec[f"d_{name}"] = value
        rec.update(self.levels)
        return rec


def first_difference(
    panel: AnalysisPanel,
    variables: Sequence[str],
    carry: Sequence[str] = ("gdp_growth",),
) -> list[DiffRow]:
    """Difference adjacent available observations within each country.

    Gaps between observation years are spanned (and recorded in
    ``gap_years``); a variable absent on either side yields an absent
    delta; countries with a single observation contribute nothing.
    """
    for name in (*variables, *carry):
        if name not in NUMERIC_FIELDS:
            raise ValueError(f"unknown panel field {name!r}")
    out: list[DiffRow] = []
    for iso3, rows in sorted(panel.by_country().items()):
        for earlier, later in zip(rows, rows[1:]):
            deltas: dict[str, float | None] = {}
            for name in variables:
                a, b = getattr(earlier, name), getattr(later, name)
                deltas[name] = None if a is None or b is None else b - a
            levels = {name: getattr(later, name) for name in carry}
            out.append(
                DiffRow(
                    country=later.country,
                    year=later.year,
                    gap_years=later.year - earlier.year,
                    deltas=deltas,
                    levels=levels,
                )
            )
    return out


def forward_fill_waves(
    panel: AnalysisPanel,
    fill_fields: Sequence[str],
    wave_years: Sequence[int],
) -> AnalysisPanel:
    """Fill gap years from the most recent earlier survey wave.

    Only absent cells are written; sources are the original wave-year
    values, so applying the fill twice is a no-op. Years before the first
    wave stay absent.
    """
    waves = sorted(wave_years)
    if not waves:
        return panel
    for name in fill_fields:
        if name not in NUMERIC_FIELDS:
            raise ValueError(f"unknown panel field {name!r}")
    sources: dict[tuple[str, str], list[tuple[int, float]]] = {}
    for row in panel.rows:
        if row.year in waves:
            for name in fill_fields:
                value = getattr(row, name)
                if value is not None:
                    sources.setdefault((row.country.iso3, name), []).append((row.year, value))
    new_rows = []
    for row in panel.rows:
        updates = {}
        for name in fill_fields:
            if getattr(row, name) is not None:
                continue
            candidates = sources.get((row.country.iso3, name), ())
            best = None
            for wave_year, value in candidates:
                if wave_year <= row.year and (best is None or wave_year > best[0]):
                    best = (wave_year, value)
            if best is not None:
                updates[name] = best[1]
        new_rows.append(replace(row, **updates) if updates else row)
    return AnalysisPanel.from_rows(new_rows, panel.countries.values())


@dataclass(frozen=True)
class VariableSummary:
    mean: float
    median: float
    sd: float | None
    min: float
    max: float
    n: int


def summarize(panel: AnalysisPanel, variables: Sequence[str]) -> dict[str, VariableSummary]:
    """Per-variable mean/median/sd/min/max/N over non-absent cells (sd: n-1)."""
    out: dict[str, VariableSummary] = {}
    for name in variables:
        if name not in NUMERIC_FIELDS:
            raise ValueError(f"unknown panel field {name!r}")
        values = [getattr(r, name) for r in panel.rows if getattr(r, name) is not None]
        if not values:
            raise EmptyVariable(name)
        out[name] = VariableSummary(
            mean=statistics.fmean(values),
            median=statistics.median(values),
            sd=statistics.stdev(values) if len(values) > 1 else None,
            min=min(values),
            max=max(values),
            n=len(values),
        )
    return out


def index_series_fragment(
    series_by_kind: dict[str, dict[tuple[str, int], float]],
    countries: dict[str, CountryKey],
) -> AnalysisPanel:
    """Convert inclusion-index series into a mergeable panel fragment."""
    keys = sorted({key for series in series_by_kind.values() for key in series})
    rows = []
    for iso3, year in keys:
        values = {
            kind: series[(iso3, year)]
            for kind, series in series_by_kind.items()
            if (iso3, year) in series
        }
        country = countries.get(iso3, CountryKey(iso3))
        rows.append(PanelRow(country=country, year=year, **values))
    return AnalysisPanel.from_rows(rows)
