"""Deterministic synthetic source files for the full pipeline.

Generates an internally consistent world: each country-year carries a
latent lognormal income distribution from which the poverty and inequality
numbers are computed with this package's own measures (so ordering
invariants hold by construction), banking indicators correlated with
development, IMF-style growth actuals plus pandemic-shaped forecasts,
survey-wave account ownership, and population counts.

The generator is a pure function of the seed; identical seeds produce
byte-identical files.
"""

from __future__ import annotations

import csv
import os
from pathlib import Path

import numpy as np

from . import measures

SEED_ENV_VAR = "POVKIT_SEED"
DEFAULT_SEED = 20_200_529

OBS_YEARS = tuple(range(2004, 2019))
WEO_YEARS = tuple(range(2004, 2022))
FORECAST_YEARS = (2020, 2021)
FINDEX_WAVES = (2011, 2014, 2017)

_LEVEL_CUTS = ((0.30, "low"), (0.70, "lower_middle"), (0.90, "upper_middle"), (1.01, "high"))


def resolve_seed(explicit: int | None = None) -> int:
    """Explicit seed, else POVKIT_SEED from the environment, else default."""
    if explicit is not None:
        return explicit
    env = os.environ.get(SEED_ENV_VAR)
    return int(env) if env else DEFAULT_SEED


def _iso3(i: int) -> str:
    letters = []
    for _ in range(3):
        letters.append(chr(ord("A") + i % 26))
        i //= 26
    return "".join(reversed(letters))


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def generate(out_dir: str | Path, seed: int | None = None, n_countries: int = 40) -> dict[str, Path]:
    """Write the six source CSVs into ``out_dir``; returns name -> path."""
    rng = np.random.default_rng(resolve_seed(seed))
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    codes = [_iso3(i) for i in range(n_countries)]
    dev = np.sort(rng.uniform(0.02, 0.98, n_countries))
    levels = []
    for d in dev:
        rank = (d - dev.min()) / (dev.max() - dev.min())
        levels.append(next(name for cut, name in _LEVEL_CUTS if rank < cut))

    sigma0 = rng.uniform(0.45, 1.0, n_countries)       # lognormal shape: inequality
    mean0 = np.exp(0.1 + 2.4 * dev + rng.normal(0, 0.15, n_countries))  # $/day
    pop0 = np.exp(rng.normal(15.3, 1.0, n_countries))
    density = np.exp(rng.normal(0.0, 0.8, n_countries))  # branches-per-km2 factor

    growth: dict[tuple[str, int], tuple[float, bool]] = {}
    for ci, iso3 in enumerate(codes):
        for year in WEO_YEARS:
            if year in FORECAST_YEARS:
                g = rng.normal(-0.05, 0.02)
                growth[(iso3, year)] = (g, True)
            else:
                g = rng.normal(0.015 + 0.03 * dev[ci], 0.03)
                growth[(iso3, year)] = (g, False)

    mean_income: dict[tuple[str, int], float] = {}
    sigma: dict[tuple[str, int], float] = {}
    for ci, iso3 in enumerate(codes):
        m, s = mean0[ci], sigma0[ci]
        for year in OBS_YEARS:
            m = max(0.3, m * (1.0 + growth[(iso3, year)][0]) * np.exp(rng.normal(0, 0.02)))
            s = float(np.clip(s * np.exp(rng.normal(0, 0.03)), 0.25, 1.4))
            mean_income[(iso3, year)] = m
            sigma[(iso3, year)] = s

    # survey years: PovcalNet-style irregular coverage with 1-3 year gaps
    survey_years: dict[str, list[int]] = {}
    for iso3 in codes:
        years, y = [], int(OBS_YEARS[0]) + int(rng.integers(0, 2))
        while y <= OBS_YEARS[-1]:
            years.append(y)
            y += int(rng.integers(1, 4))
        survey_years[iso3] = years

    paths: dict[str, Path] = {}

    def open_writer(name: str, header: list[str]):
        path = out_dir / name
        paths[name.removesuffix(".csv")] = path
        fh = path.open("w", newline="", encoding="utf-8")
        writer = csv.writer(fh)
        writer.writerow(header)
        return fh, writer

    fh, w = open_writer("povcal.csv",
                        ["iso3", "year", "headcount", "poverty_gap", "poverty_gap_sq",
                         "watts", "gini"])
    z = measures.DEFAULT_POVERTY_LINE
    for iso3 in codes:
        for year in survey_years[iso3]:
            s = sigma[(iso3, year)]
            mu_log = np.log(mean_income[(iso3, year)]) - s**2 / 2.0
            sample = measures.IncomeSample(rng.lognormal(mu_log, s, 4000))
            w.writerow([
                iso3, year,
                _fmt(measures.fgt(sample, z, 0)),
                _fmt(measures.fgt(sample, z, 1)),
                _fmt(measures.fgt(sample, z, 2)),
                _fmt(measures.watts(sample, z)),
                _fmt(measures.gini(sample)),
            ])
    fh.close()

    fh, w = open_writer("fas.csv",
                        ["iso3", "country_name", "year", "branches_per_100k",
                         "atms_per_100k", "branches_per_1000km2", "atms_per_1000km2",
                         "accounts_per_1000"])
    for ci, iso3 in enumerate(codes):
        for yi, year in enumerate(OBS_YEARS):
            if rng.random() < 0.02:
                continue  # whole country-year missing from FAS
            trend = 1.0 + 0.04 * yi
            branches = 1.0 + 24.0 * dev[ci] * trend * np.exp(rng.normal(0, 0.10))
            atms = 0.5 + 45.0 * dev[ci] * trend * np.exp(rng.normal(0, 0.12))
            accounts = 15.0 + 1400.0 * dev[ci] ** 1.5 * trend * np.exp(rng.normal(0, 0.10))
            if rng.random() < 0.01:
                atms *= 8.0  # occasional upper-tail outlier for the winsorizer
            cells = [
                branches, atms,
                branches * density[ci], atms * density[ci],
                accounts,
            ]
            formatted = [_fmt(c) for c in cells]
            if rng.random() < 0.02:
                formatted[int(rng.integers(0, 5))] = ""  # stray missing indicator
            w.writerow([iso3, f"Country {iso3}", year, *formatted])
    fh.close()

    fh, w = open_writer("weo.csv", ["iso3", "year", "gdp_growth", "is_forecast"])
    for iso3 in codes:
        for year in WEO_YEARS:
            g, fc = growth[(iso3, year)]
            w.writerow([iso3, year, _fmt(g), int(fc)])
    fh.close()

    fh, w = open_writer("findex.csv",
                        ["iso3", "year", "account_all", "account_male", "account_female"])
    for ci, iso3 in enumerate(codes):
        for wi, year in enumerate(FINDEX_WAVES):
            base = np.clip(0.04 + 0.75 * dev[ci] + 0.04 * wi + rng.normal(0, 0.04), 0.01, 0.98)
            gap = np.clip(rng.normal(0.05, 0.02), 0.0, 0.2)
            w.writerow([
                iso3, year,
                _fmt(base),
                _fmt(float(np.clip(base + gap / 2, 0.01, 0.99))),
                _fmt(float(np.clip(base - gap / 2, 0.005, 0.99))),
            ])
    fh.close()

    fh, w = open_writer("population.csv", ["iso3", "year", "population"])
    for ci, iso3 in enumerate(codes):
        pop = pop0[ci]
        for year in WEO_YEARS:
            pop *= 1.0 + rng.normal(0.015, 0.004)
            w.writerow([iso3, year, int(round(pop))])
    fh.close()

    fh, w = open_writer("income_class.csv", ["iso3", "income_level"])
    for ci, iso3 in enumerate(codes):
        w.writerow([iso3, levels[ci]])
    fh.close()

    return paths
