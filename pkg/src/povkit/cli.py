"""povkit command-line interface.

Subcommands cover the full pipeline: synthesize source data, ingest and
merge panels, build inclusion indices, compute poverty measures, decompose
poverty changes, run fixed-effects regressions, project scenarios, and
emit a full report (tables, tidy figure CSVs, and PNG renderings).

Module errors map to distinct exit codes (see ``povkit --help``); the
error name is printed on stderr. All outputs are deterministic functions
of the inputs; POVKIT_SEED fixes the seed of the data synthesizer.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np
from scipy import stats as _sstats

from . import decomposition, figures, forecast, inclusion, measures, panel
from . import regression as reg
from . import synth, tables
from .errors import BadNumeric, MissingColumn, PovkitError, exit_code_table

SCOPE_DEFAULT = "low,lower_middle"

POVERTY_DELTAS = ("headcount", "poverty_gap", "poverty_gap_sq", "watts")
LEVEL_LABELS = {
    "headcount": "Headcount",
    "poverty_gap": "Poverty gap",
    "poverty_gap_sq": "Poverty gap squared",
    "watts": "Watts",
}
DEP_LABELS = {name: f"Δ{label}" for name, label in LEVEL_LABELS.items()}


def _dependent_label(dep: str) -> str:
    if dep.startswith("d_"):
        return DEP_LABELS.get(dep[2:], dep)
    return LEVEL_LABELS.get(dep, dep)


def _split_csv_arg(value: str) -> list[str]:
    return [item for item in (part.strip() for part in value.split(",")) if item]


def _parse_scope(value: str | None) -> set[str] | None:
    if not value or value == "all":
        return None
    levels = set(_split_csv_arg(value))
    unknown = levels - set(panel.INCOME_LEVELS)
    if unknown:
        raise ValueError(f"unknown income levels: {sorted(unknown)}")
    return levels


def _print_rejections(rejected, label: str) -> None:
    for err in rejected:
        print(f"warning [{label}]: {type(err).__name__}: {err}", file=sys.stderr)


def _load_income_sample(path: Path) -> measures.IncomeSample:
    incomes: list[float] = []
    weights: list[float] = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames or "income" not in reader.fieldnames:
            raise MissingColumn("income", str(path))
        has_weight = "weight" in reader.fieldnames
        for line_no, rec in enumerate(reader, start=2):
            raw = (rec.get("income") or "").strip()
            try:
                incomes.append(float(raw))
            except ValueError:
                raise BadNumeric(line_no, "income", raw)
            if has_weight:
                raw_w = (rec.get("weight") or "").strip()
                if raw_w:
                    try:
                        weights.append(float(raw_w))
                    except ValueError:
                        raise BadNumeric(line_no, "weight", raw_w)
    if weights and len(weights) != len(incomes):
        raise ValueError("weight column must be filled for every row or none")
    return measures.IncomeSample(
        np.array(incomes), np.array(weights) if weights else None
    )


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# subcommand implementations

def cmd_synth(args) -> int:
    paths = synth.generate(args.out_dir, seed=args.seed, n_countries=args.countries)
    for name in sorted(paths):
        print(f"wrote {paths[name]}")
    return 0


_SOURCE_SCHEMAS = ("fas", "povcal", "weo", "findex", "population", "income_class")


def _load_sources(args, strict: bool):
    fragments = {}
    for schema in _SOURCE_SCHEMAS:
        path = getattr(args, schema, None)
        if path:
            result = panel.load_csv(path, schema, strict=strict)
            _print_rejections(result.rejected, schema)
            fragments[schema] = result.panel
    return fragments


def cmd_ingest(args) -> int:
    fragments = _load_sources(args, args.strict)
    if not fragments:
        raise ValueError("no input files given")
    merged = panel.merge_panels(list(fragments.values()))
    if args.fill_waves:
        waves = [int(y) for y in _split_csv_arg(args.fill_waves)]
        merged = panel.forward_fill_waves(
            merged, ("account_all", "account_male", "account_female"), waves
        )
    scope = _parse_scope(args.scope)
    if scope is not None:
        merged = panel.filter_income(merged, scope)
    panel.write_panel_csv(merged, args.out)
    print(f"wrote {args.out} ({len(merged)} rows, "
          f"{len(merged.country_codes())} countries)")
    return 0


def cmd_index_build(args) -> int:
    result = panel.load_csv(args.fas, "fas", strict=args.strict)
    _print_rejections(result.rejected, "fas")
    bundle = inclusion.build_indices(result.panel, winsor_pct=args.winsor_pct)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    countries = result.panel.countries
    tables.write_index_wide(bundle.fii.values, countries, out_dir / "fii.csv",
                            include_income=True)
    tables.write_index_wide(bundle.outreach.values, countries,
                            out_dir / "outreach.csv", include_income=False)
    tables.write_index_wide(bundle.usage.values, countries, out_dir / "usage.csv",
                            include_income=False)
    diag = [
        "stage 1 (outreach, 4 indicators):",
        f"  eigenvalue: {bundle.outreach_pca.eigenvalue:.6f}",
        f"  variance share: {bundle.outreach_pca.variance_share:.6f}",
        f"  weights: {np.array2string(bundle.outreach_pca.weights, precision=6)}",
        "stage 2 (outreach + usage):",
        f"  eigenvalue: {bundle.overall_pca.eigenvalue:.6f}",
        f"  variance share: {bundle.overall_pca.variance_share:.6f}",
        f"  weights: {np.array2string(bundle.overall_pca.weights, precision=6)}",
        f"dropped incomplete country-years: {len(bundle.dropped)}",
        *(f"  {iso3} {year}" for iso3, year in bundle.dropped),
    ]
    _write_text(out_dir / "diagnostics.txt", "\n".join(diag) + "\n")
    print(f"wrote indices for {len(bundle.fii.values)} country-years to {out_dir}")
    return 0


def cmd_measures(args) -> int:
    sample = _load_income_sample(Path(args.sample))
    z = args.line
    rows = [
        ("headcount", measures.fgt(sample, z, 0)),
        ("poverty_gap", measures.fgt(sample, z, 1)),
        ("poverty_gap_sq", measures.fgt(sample, z, 2)),
        ("watts", measures.watts(sample, z)),
        ("gini", measures.gini(sample)),
    ]
    lines = ["measure,line,value"]
    lines += [f"{name},{z!r},{value!r}" for name, value in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        _write_text(Path(args.out), text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_decompose(args) -> int:
    initial = _load_income_sample(Path(args.initial))
    final = _load_income_sample(Path(args.final))
    grid = max(args.quantiles, 1000)
    dist_i = measures.Distribution(initial.mean(),
                                   measures.lorenz_from_sample(initial, grid))
    dist_f = measures.Distribution(final.mean(),
                                   measures.lorenz_from_sample(final, grid))
    result = decomposition.datt_ravallion(
        dist_i, dist_f, z=args.line, measure=args.measure,
        n_quantiles=args.quantiles, reference=args.reference,
    )
    text = (
        "measure,z,total,growth,redistribution,residual\n"
        f"{result.measure},{result.z!r},{result.total!r},{result.growth!r},"
        f"{result.redistribution!r},{result.residual!r}\n"
    )
    if args.out:
        _write_text(Path(args.out), text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _diff_records(merged: panel.AnalysisPanel, field_names: list[str],
                  max_gap: int | None):
    """Difference d_-prefixed fields and carry level fields through.

    The panel is first restricted to rows complete in every underlying
    field, so differencing spans the calendar gaps between usable
    observations instead of being broken by partially observed years.
    """
    diff_vars = sorted({f[2:] for f in field_names if f.startswith("d_")})
    carry = sorted({f for f in field_names if not f.startswith("d_")})
    analysis = panel.complete_rows(merged, [*diff_vars, *carry])
    diffs = panel.first_difference(analysis, diff_vars, carry=carry)
    if max_gap is not None:
        diffs = [d for d in diffs if d.gap_years <= max_gap]
    kept = {d.country.iso3 for d in diffs}
    dropped = sorted(set(analysis.country_codes()) - kept)
    if dropped:
        print(
            f"note: {len(dropped)} countries contribute no change rows "
            f"(single usable observation or gap filter): {', '.join(dropped)}",
            file=sys.stderr,
        )
    return [d.record() for d in diffs]


def _level_records(merged: panel.AnalysisPanel, field_names: list[str]):
    records = []
    for row in merged.rows:
        rec = {"country": row.country.iso3, "year": row.year}
        for name in field_names:
            rec[name] = getattr(row, name)
        records.append(rec)
    return records


def _records_for_spec(merged, spec: reg.ModelSpec, max_gap):
    field_names = list(spec.required_fields())
    if any(name.startswith("d_") for name in field_names):
        return _diff_records(merged, field_names, max_gap)
    return _level_records(merged, field_names)


def cmd_regress(args) -> int:
    merged = panel.load_csv(args.panel, "merged", strict=False).panel
    scope = _parse_scope(args.scope)
    if scope is not None:
        merged = panel.filter_income(merged, scope)
    interactions = tuple(
        tuple(pair.split(":", 1)) for pair in _split_csv_arg(args.interact or "")
    )
    spec = reg.ModelSpec(
        dependent=args.dep,
        regressors=tuple(_split_csv_arg(args.x)),
        interactions=interactions,
        fixed_effect=args.fe,
        cluster=args.cluster,
    )
    records = _records_for_spec(merged, spec, args.max_gap)
    result = reg.fit_fe_ols(records, spec)
    for name, count in sorted(result.dropped.items()):
        print(f"note: dropped {count} rows missing {name}", file=sys.stderr)
    header = args.header or _dependent_label(args.dep)
    column = tables.column_from_result(result, header)
    text, csv_text = tables.render_table([column], args.layout)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_text(out_dir / f"{args.layout}.txt", text)
    _write_text(out_dir / f"{args.layout}.csv", csv_text)
    forecast.save_model_csv(result, out_dir / "model.csv")
    sys.stdout.write(text)
    return 0


def _forecast_outputs(suite, population_panel, scope, out_dir: Path, stem: str):
    """Write per-country paths and global aggregates; returns plot series."""
    out_dir.mkdir(parents=True, exist_ok=True)
    path_lines = ["scenario,iso3,base_year,base_headcount,year,headcount"]
    global_lines = ["scenario,year,rate,poor_count"]
    series: dict[str, list[tuple[int, float]]] = {}
    for name in sorted(suite):
        fpath = suite[name]
        for iso3 in sorted(fpath.paths):
            cp = fpath.paths[iso3]
            for year in sorted(cp.values):
                path_lines.append(
                    f"{name},{iso3},{cp.base_year},{cp.base_headcount!r},"
                    f"{year},{cp.values[year]!r}"
                )
        gp = forecast.aggregate_global(fpath, population_panel, scope)
        series[name] = [(year, rate) for year, rate, _ in gp.rows]
        for year, rate, poor in gp.rows:
            global_lines.append(f"{name},{year},{rate!r},{poor!r}")
        for err in fpath.excluded:
            print(f"note: {name}: excluded {err}", file=sys.stderr)
    _write_text(out_dir / f"{stem}_paths.csv", "\n".join(path_lines) + "\n")
    _write_text(out_dir / f"{stem}_global.csv", "\n".join(global_lines) + "\n")
    return series


def cmd_forecast(args) -> int:
    model = forecast.load_model_csv(args.model)
    merged = panel.load_csv(args.panel, "merged", strict=False).panel
    weo = panel.load_csv(args.weo, "weo", strict=False).panel
    population = panel.load_csv(args.population, "population", strict=False).panel
    years = tuple(int(y) for y in _split_csv_arg(args.years))
    growth = forecast.growth_assumptions(weo, years)
    scope = _parse_scope(args.scope)
    if scope is not None:
        merged = panel.filter_income(merged, scope)
    suite = forecast.scenario_suite(
        model, merged, growth, years=years, shock_year=args.shock_year,
        gini_shock=args.gini_shock, fii_shock=args.fii_shock,
    )
    _forecast_outputs(suite, population, None, Path(args.out_dir), "forecast")
    print(f"wrote forecasts for {len(next(iter(suite.values())).paths)} countries "
          f"to {args.out_dir}")
    return 0


def _fit_table_columns(merged, deps, inclusion_vars, max_gap):
    """One regression per (dependent, inclusion variable) pair."""
    columns = []
    first_result = None
    for dep in deps:
        for inc_var in inclusion_vars:
            if inc_var is None:
                spec = reg.ModelSpec(
                    dependent=f"d_{dep}",
                    regressors=("d_gini", "gdp_growth"),
                )
            else:
                spec = reg.ModelSpec(
                    dependent=f"d_{dep}",
                    regressors=("d_gini", "gdp_growth", f"d_{inc_var}"),
                    interactions=(("d_gini", f"d_{inc_var}"),),
                )
            records = _records_for_spec(merged, spec, max_gap)
            result = reg.fit_fe_ols(records, spec)
            if first_result is None:
                first_result = result
            header = DEP_LABELS[dep] if inc_var is None else \
                f"{DEP_LABELS[dep]} ({inc_var})"
            columns.append(tables.column_from_result(result, header))
    return columns, first_result


def cmd_report(args) -> int:
    data_dir = Path(args.data_dir)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    scope = _parse_scope(args.scope)

    loads = {}
    for schema in _SOURCE_SCHEMAS:
        path = data_dir / f"{schema}.csv"
        if path.exists():
            result = panel.load_csv(path, schema, strict=False)
            _print_rejections(result.rejected, schema)
            loads[schema] = result.panel
    for required in ("fas", "povcal", "weo", "income_class"):
        if required not in loads:
            raise ValueError(f"missing {required}.csv in {data_dir}")

    # inclusion indices from the raw banking indicators
    bundle = inclusion.build_indices(loads["fas"])
    idx_dir = out_dir / "indices"
    idx_dir.mkdir(exist_ok=True)
    countries = loads["fas"].countries
    tables.write_index_wide(bundle.fii.values, countries, idx_dir / "fii.csv", True)
    tables.write_index_wide(bundle.outreach.values, countries,
                            idx_dir / "outreach.csv", False)
    tables.write_index_wide(bundle.usage.values, countries, idx_dir / "usage.csv", False)
    _write_text(
        idx_dir / "diagnostics.txt",
        "\n".join([
            f"stage1 eigenvalue: {bundle.outreach_pca.eigenvalue!r}",
            f"stage1 variance share: {bundle.outreach_pca.variance_share!r}",
            f"stage2 eigenvalue: {bundle.overall_pca.eigenvalue!r}",
            f"stage2 variance share: {bundle.overall_pca.variance_share!r}",
            f"dropped: {len(bundle.dropped)}",
        ]) + "\n",
    )

    index_fragment = panel.index_series_fragment(
        {"fii": bundle.fii.values, "outreach": bundle.outreach.values,
         "usage": bundle.usage.values},
        countries,
    )
    fragments = [index_fragment] + [
        loads[s] for s in ("povcal", "weo", "findex", "population", "income_class")
        if s in loads
    ]
    merged = panel.merge_panels(fragments)
    if "findex" in loads:
        waves = sorted({r.year for r in loads["findex"].rows})
        merged = panel.forward_fill_waves(
            merged, ("account_all", "account_male", "account_female"), waves
        )
    panel.write_panel_csv(merged, out_dir / "merged.csv")

    scoped = panel.filter_income(merged, scope) if scope is not None else merged

    # the analysis sample: complete-case on every levels variable the change
    # regressions use, so all columns share one N and differencing spans
    # survey gaps
    main_vars = ["headcount", "poverty_gap", "poverty_gap_sq", "watts", "gini",
                 "gdp_growth", "fii", "outreach", "usage"]
    analysis = panel.complete_rows(scoped, main_vars)

    summary_vars = list(main_vars)
    if "findex" in loads:
        summary_vars += ["account_all", "account_male", "account_female"]
    summary_vars = [
        v for v in summary_vars
        if any(getattr(r, v) is not None for r in analysis.rows)
    ]
    summaries = panel.summarize(analysis, summary_vars)
    labels = {
        "headcount": "Headcount", "poverty_gap": "Poverty gap",
        "poverty_gap_sq": "Poverty gap squared", "watts": "Watts index",
        "gini": "Gini", "gdp_growth": "GDP growth rate",
        "fii": "Financial inclusion index", "outreach": "Financial outreach",
        "usage": "Usage", "account_all": "Account ownership",
        "account_male": "Account ownership (Male)",
        "account_female": "Account ownership (Female)",
    }
    text, csv_text = tables.render_summary(summaries, labels)
    tab_dir = out_dir / "tables"
    tab_dir.mkdir(exist_ok=True)
    _write_text(tab_dir / "table1.txt", text)
    _write_text(tab_dir / "table1.csv", csv_text)

    # change regressions without and with inclusion terms
    cols2, base_result = _fit_table_columns(
        analysis, POVERTY_DELTAS, [None], args.max_gap)
    text, csv_text = tables.render_table(cols2, "table2")
    _write_text(tab_dir / "table2.txt", text)
    _write_text(tab_dir / "table2.csv", csv_text)

    cols3, fii_result = _fit_table_columns(
        analysis, POVERTY_DELTAS, ["fii", "outreach", "usage"], args.max_gap)
    text, csv_text = tables.render_table(cols3, "table3")
    _write_text(tab_dir / "table3.txt", text)
    _write_text(tab_dir / "table3.csv", csv_text)
    forecast.save_model_csv(fii_result, out_dir / "model.csv")

    if "findex" in loads:
        restricted = panel.AnalysisPanel.from_rows(
            [r for r in scoped.rows if r.year >= 2011],
            scoped.countries.values(),
        )
        restricted = panel.complete_rows(
            restricted,
            ["headcount", "poverty_gap", "poverty_gap_sq", "watts", "gini",
             "gdp_growth", "account_all", "account_male", "account_female"],
        )
        cols4, _ = _fit_table_columns(
            restricted, POVERTY_DELTAS,
            ["account_all", "account_male", "account_female"], args.max_gap)
        text, csv_text = tables.render_table(cols4, "table4")
        _write_text(tab_dir / "table4.txt", text)
        _write_text(tab_dir / "table4.csv", csv_text)

    # figures: tidy CSV + PNG side by side
    fig_dir = out_dir / "figures"
    fig_dir.mkdir(exist_ok=True)

    fig2_rows = [
        (row.fii, row.headcount, row.gini)
        for row in analysis.rows
        if row.fii is not None and row.headcount is not None and row.gini is not None
    ]
    lines = ["fii,headcount,gini"]
    lines += [f"{fii!r},{hc!r},{gini!r}" for fii, hc, gini in fig2_rows]
    _write_text(fig_dir / "fig2_inclusion_levels.csv", "\n".join(lines) + "\n")
    figures.inclusion_scatter(fig2_rows, fig_dir / "fig2_inclusion_levels.png")

    crit = float(_sstats.t.ppf(0.975, base_result.n_clusters - 1))
    fig3_items = []
    for term, label in (("d_gini", "ΔGini"), ("gdp_growth", "GDP growth rate")):
        est = base_result.coefficients[term]
        se = base_result.clustered_se[term]
        fig3_items.append((label, est, est - crit * se, est + crit * se))
    lines = ["term,label,estimate,ci_low,ci_high"]
    for (label, est, lo, hi), term in zip(fig3_items, ("d_gini", "gdp_growth")):
        lines.append(f"{term},{label},{est!r},{lo!r},{hi!r}")
    _write_text(fig_dir / "fig3_marginal_effects.csv", "\n".join(lines) + "\n")
    figures.coefficient_plot(fig3_items, fig_dir / "fig3_marginal_effects.png",
                             title="Effects on poverty changes")

    # profile of the inequality effect across inclusion levels
    diff_records = _diff_records(analysis, ["d_fii"], args.max_gap)
    fii_changes = [r["d_fii"] for r in diff_records if r.get("d_fii") is not None]
    crit3 = float(_sstats.t.ppf(0.975, fii_result.n_clusters - 1))
    grid = np.linspace(min(fii_changes), max(fii_changes), 41)
    profile = []
    for value in grid:
        me = reg.marginal_effect(fii_result, "d_gini", {"d_fii": float(value)})
        profile.append((float(value), me.estimate,
                        me.estimate - crit3 * me.se, me.estimate + crit3 * me.se))
    lines = ["d_fii,estimate,ci_low,ci_high"]
    lines += [f"{v!r},{e!r},{lo!r},{hi!r}" for v, e, lo, hi in profile]
    _write_text(fig_dir / "fig4_gini_effect_profile.csv", "\n".join(lines) + "\n")
    figures.interaction_profile(
        profile, fig_dir / "fig4_gini_effect_profile.png",
        moderator_label="Change in financial inclusion index",
        effect_label="Marginal effect of ΔGini on poverty change",
    )

    # scenario forecasts: all countries (fig5) and scoped subset (fig6)
    if "population" in loads:
        growth = forecast.growth_assumptions(loads["weo"], forecast.PROJECTION_YEARS)
        suite_all = forecast.scenario_suite(fii_result, merged, growth)
        series_all = _forecast_outputs(
            suite_all, loads["population"], None, out_dir / "forecast", "all")
        figures.global_paths(series_all, fig_dir / "fig5_global_paths.png",
                             title="All countries")
        lines = ["scenario,year,rate"]
        for name in sorted(series_all):
            lines += [f"{name},{y},{r!r}" for y, r in series_all[name]]
        _write_text(fig_dir / "fig5_global_paths.csv", "\n".join(lines) + "\n")

        scoped_codes = set(scoped.country_codes())
        suite_scope = forecast.scenario_suite(fii_result, scoped, growth)
        series_scope = _forecast_outputs(
            suite_scope, loads["population"], scoped_codes,
            out_dir / "forecast", "scoped")
        figures.global_paths(series_scope, fig_dir / "fig6_scoped_paths.png",
                             title="Low- and lower-middle-income countries")
        lines = ["scenario,year,rate"]
        for name in sorted(series_scope):
            lines += [f"{name},{y},{r!r}" for y, r in series_scope[name]]
        _write_text(fig_dir / "fig6_scoped_paths.csv", "\n".join(lines) + "\n")

    print(f"report written to {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    codes = "\n".join(f"  {code:>3}  {name}" for code, name in exit_code_table())
    parser = argparse.ArgumentParser(
        prog="povkit",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="exit codes:\n" + codes
               + "\n\nenvironment:\n  POVKIT_SEED  seed for the synth subcommand",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate deterministic synthetic source CSVs")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--countries", type=int, default=40)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ingest", help="load, merge, and filter source CSVs")
    for schema in _SOURCE_SCHEMAS:
        p.add_argument(f"--{schema.replace('_', '-')}", dest=schema)
    p.add_argument("--scope", default=None,
                   help="comma-separated income levels to keep (default: all)")
    p.add_argument("--fill-waves", default=None,
                   help="comma-separated survey wave years for account forward-fill")
    p.add_argument("--strict", action="store_true",
                   help="raise on the first bad source row instead of skipping")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("index", help="financial-inclusion index construction")
    index_sub = p.add_subparsers(dest="index_command", required=True)
    pb = index_sub.add_parser("build", help="build FII/outreach/usage indices")
    pb.add_argument("--fas", required=True)
    pb.add_argument("--out-dir", required=True)
    pb.add_argument("--winsor-pct", type=float, default=inclusion.WINSOR_PCT)
    pb.add_argument("--strict", action="store_true")
    pb.set_defaults(func=cmd_index_build)

    p = sub.add_parser("measures", help="poverty and inequality measures of a sample")
    p.add_argument("--sample", required=True, help="CSV with income[,weight] columns")
    p.add_argument("--line", type=float, default=measures.DEFAULT_POVERTY_LINE)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("decompose",
                       help="growth/redistribution decomposition of a poverty change")
    p.add_argument("--initial", required=True)
    p.add_argument("--final", required=True)
    p.add_argument("--line", type=float, default=measures.DEFAULT_POVERTY_LINE)
    p.add_argument("--measure", default="headcount", choices=measures.MEASURE_NAMES)
    p.add_argument("--quantiles", type=int, default=decomposition.DEFAULT_N_QUANTILES)
    p.add_argument("--reference", default="initial", choices=("initial", "final"))
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("regress", help="panel fixed-effects regression")
    p.add_argument("--panel", required=True, help="merged panel CSV")
    p.add_argument("--dep", required=True,
                   help="dependent field; d_ prefix means first-differenced")
    p.add_argument("--x", required=True, help="comma-separated regressors")
    p.add_argument("--interact", default="",
                   help="comma-separated a:b interaction pairs")
    p.add_argument("--fe", default="country")
    p.add_argument("--cluster", default="country")
    p.add_argument("--layout", default="table3",
                   choices=sorted(tables.REGRESSION_LAYOUTS))
    p.add_argument("--scope", default=None)
    p.add_argument("--max-gap", type=int, default=None,
                   help="drop differenced rows spanning more than this many years")
    p.add_argument("--header", default=None, help="column header label")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_regress)

    p = sub.add_parser("forecast", help="scenario projection of poverty headcounts")
    p.add_argument("--model", required=True, help="model CSV from regress")
    p.add_argument("--panel", required=True)
    p.add_argument("--weo", required=True)
    p.add_argument("--population", required=True)
    p.add_argument("--scope", default=None)
    p.add_argument("--years", default="2019,2020,2021")
    p.add_argument("--shock-year", type=int, default=forecast.DEFAULT_SHOCK_YEAR)
    p.add_argument("--gini-shock", type=float, default=0.01)
    p.add_argument("--fii-shock", type=float, default=0.10)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("report", help="full pipeline: tables, figure data, PNGs")
    p.add_argument("--data-dir", required=True,
                   help="directory holding the source CSVs (as written by synth)")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--scope", default=SCOPE_DEFAULT)
    p.add_argument("--max-gap", type=int, default=None)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PovkitError as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return type(err).exit_code
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
