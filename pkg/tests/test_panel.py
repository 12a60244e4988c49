import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from povkit.errors import (
    BadNumeric,
    ConflictingValue,
    DuplicateKey,
    EmptyVariable,
    MissingColumn,
    RangeViolation,
    UnknownIncomeLevel,
)
from povkit.panel import (
    AnalysisPanel,
    CountryKey,
    PanelRow,
    complete_rows,
    filter_income,
    first_difference,
    forward_fill_waves,
    load_csv,
    merge_panels,
    summarize,
    write_panel_csv,
)


def row(iso3, year, **kw):
    level = kw.pop("level", None)
    name = kw.pop("name", None)
    return PanelRow(country=CountryKey(iso3, level, name), year=year, **kw)


def panel(*rows, extra=()):
    return AnalysisPanel.from_rows(rows, extra)


class TestTypes:
    def test_iso3_validation(self):
        with pytest.raises(ValueError):
            CountryKey("ke")
        with pytest.raises(ValueError):
            CountryKey("KENY")

    def test_income_level_enum(self):
        with pytest.raises(ValueError):
            CountryKey("KEN", "middle")

    def test_rate_bounds(self):
        with pytest.raises(ValueError):
            row("KEN", 2010, headcount=1.2)
        with pytest.raises(ValueError):
            row("KEN", 2010, gini=-0.1)

    def test_year_bounds(self):
        with pytest.raises(ValueError):
            row("KEN", 1979)
        with pytest.raises(ValueError):
            row("KEN", 2031)

    def test_poverty_ordering_invariant(self):
        with pytest.raises(ValueError):
            row("KEN", 2010, headcount=0.1, poverty_gap=0.2, poverty_gap_sq=0.05)
        row("KEN", 2010, headcount=0.3, poverty_gap=0.1, poverty_gap_sq=0.05)

    def test_duplicate_keys_rejected(self):
        with pytest.raises(DuplicateKey):
            panel(row("KEN", 2010), row("KEN", 2010))

    def test_rows_sorted(self):
        p = panel(row("UGA", 2010), row("KEN", 2012), row("KEN", 2010))
        keys = [(r.country.iso3, r.year) for r in p.rows]
        assert keys == sorted(keys)


class TestLoadCsv:
    def write(self, tmp_path, name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    def test_fas_row(self, tmp_path):
        path = self.write(tmp_path, "fas.csv",
                          "iso3,country_name,year,branches_per_100k,atms_per_100k,"
                          "branches_per_1000km2,atms_per_1000km2,accounts_per_1000\n"
                          "AFG,Afghanistan,2004,1.2,0.5,0.3,0.12,41\n")
        result = load_csv(path, "fas")
        assert not result.rejected
        r = result.panel.rows[0]
        assert r.country.iso3 == "AFG"
        assert r.country.name == "Afghanistan"
        assert r.branches_per_100k == 1.2
        assert r.accounts_per_1000 == 41

    def test_absent_cell_is_absent_not_zero(self, tmp_path):
        path = self.write(tmp_path, "povcal.csv",
                          "iso3,year,headcount,poverty_gap,poverty_gap_sq,watts,gini\n"
                          "KEN,2010,0.3,0.1,0.05,0.2,\n")
        r = load_csv(path, "povcal").panel.rows[0]
        assert r.gini is None
        assert r.headcount == 0.3

    def test_bad_rows_rejected_others_load(self, tmp_path):
        path = self.write(tmp_path, "povcal.csv",
                          "iso3,year,headcount,poverty_gap,poverty_gap_sq,watts,gini\n"
                          "KEN,2010,0.3,,,,\n"
                          "UGA,2010,1.2,,,,\n"
                          "TZA,2010,0.4,,,,\n")
        result = load_csv(path, "povcal")
        assert len(result.panel.rows) == 2
        assert {r.country.iso3 for r in result.panel.rows} == {"KEN", "TZA"}
        assert len(result.rejected) == 1
        err = result.rejected[0]
        assert isinstance(err, RangeViolation)
        assert err.row == 3 and err.column == "headcount"

    def test_strict_raises(self, tmp_path):
        path = self.write(tmp_path, "povcal.csv",
                          "iso3,year,headcount,poverty_gap,poverty_gap_sq,watts,gini\n"
                          "UGA,2010,abc,,,,\n")
        with pytest.raises(BadNumeric):
            load_csv(path, "povcal", strict=True)

    def test_missing_column(self, tmp_path):
        path = self.write(tmp_path, "weo.csv", "iso3,year,gdp_growth\nKEN,2010,0.05\n")
        with pytest.raises(MissingColumn):
            load_csv(path, "weo")

    def test_duplicate_key_diagnostic(self, tmp_path):
        path = self.write(tmp_path, "population.csv",
                          "iso3,year,population\nKEN,2010,100\nKEN,2010,200\n")
        result = load_csv(path, "population")
        assert len(result.panel.rows) == 1
        assert isinstance(result.rejected[0], DuplicateKey)

    def test_income_class(self, tmp_path):
        path = self.write(tmp_path, "income_class.csv",
                          "iso3,income_level\nAFG,low\nAUT,high\n")
        result = load_csv(path, "income_class")
        assert result.panel.rows == ()
        assert result.panel.countries["AFG"].income_level == "low"
        assert result.panel.countries["AUT"].income_level == "high"

    def test_weo_forecast_flag(self, tmp_path):
        path = self.write(tmp_path, "weo.csv",
                          "iso3,year,gdp_growth,is_forecast\n"
                          "KEN,2020,-0.05,1\nKEN,2019,0.05,0\n")
        rows = load_csv(path, "weo").panel.rows
        assert rows[0].gdp_is_forecast is False
        assert rows[1].gdp_is_forecast is True


class TestMerge:
    def test_disjoint_fields_combine(self):
        a = panel(row("KEN", 2010, gini=0.40))
        b = panel(row("KEN", 2010, fii=0.25))
        merged = merge_panels([a, b])
        assert len(merged) == 1
        assert merged.rows[0].gini == 0.40
        assert merged.rows[0].fii == 0.25

    def test_conflict_raises(self):
        a = panel(row("KEN", 2010, gini=0.40))
        b = panel(row("KEN", 2010, gini=0.41))
        with pytest.raises(ConflictingValue):
            merge_panels([a, b])

    def test_equal_values_coincide(self):
        a = panel(row("KEN", 2010, gini=0.40))
        b = panel(row("KEN", 2010, gini=0.40))
        assert merge_panels([a, b]).rows[0].gini == 0.40

    def test_empty_identity(self):
        p = panel(row("KEN", 2010, gini=0.4), row("UGA", 2011, fii=0.1))
        merged = merge_panels([AnalysisPanel(), p])
        assert merged.rows == p.rows

    def test_income_level_attaches(self):
        data = panel(row("KEN", 2010, gini=0.4))
        levels = AnalysisPanel.from_rows([], [CountryKey("KEN", "lower_middle")])
        merged = merge_panels([data, levels])
        assert merged.rows[0].country.income_level == "lower_middle"

    def test_order_insensitive_for_disjoint_fragments(self):
        fragments = [
            panel(row("KEN", 2010, gini=0.4), row("KEN", 2012, gini=0.42)),
            panel(row("KEN", 2010, fii=0.2), row("UGA", 2010, fii=0.1)),
            AnalysisPanel.from_rows([], [CountryKey("KEN", "lower_middle"),
                                         CountryKey("UGA", "low")]),
        ]
        baseline = None
        for perm in itertools.permutations(fragments):
            merged = merge_panels(list(perm))
            if baseline is None:
                baseline = merged
            assert merged.rows == baseline.rows
            assert merged.countries == baseline.countries


class TestFilterIncome:
    def test_filters_levels(self):
        p = panel(row("AFG", 2010, level="low", gini=0.3),
                  row("AUT", 2010, level="high", gini=0.3))
        out = filter_income(p, {"low", "lower_middle"})
        assert [r.country.iso3 for r in out.rows] == ["AFG"]

    def test_identity_with_all_levels(self):
        p = panel(row("AFG", 2010, level="low"), row("AUT", 2010, level="high"))
        out = filter_income(p, {"low", "lower_middle", "upper_middle", "high"})
        assert out.rows == p.rows

    def test_unknown_level_raises(self):
        p = panel(row("KEN", 2010))
        with pytest.raises(UnknownIncomeLevel):
            filter_income(p, {"low"})


class TestFirstDifference:
    def test_gap_spanning_arithmetic(self):
        p = panel(
            row("KEN", 2004, level="low", headcount=0.30, gdp_growth=0.01),
            row("KEN", 2006, level="low", headcount=0.25, gdp_growth=0.02),
            row("KEN", 2008, level="low", headcount=0.20, gdp_growth=0.03),
        )
        diffs = first_difference(p, ["headcount"])
        assert len(diffs) == 2
        assert diffs[0].year == 2006 and diffs[0].gap_years == 2
        assert diffs[0].deltas["headcount"] == pytest.approx(-0.05)
        assert diffs[1].year == 2008 and diffs[1].gap_years == 2
        assert diffs[1].deltas["headcount"] == pytest.approx(-0.05)
        # the growth level comes from the later row
        assert diffs[0].levels["gdp_growth"] == 0.02
        assert diffs[1].levels["gdp_growth"] == 0.03

    def test_single_observation_country_contributes_nothing(self):
        p = panel(row("KEN", 2010, headcount=0.3))
        assert first_difference(p, ["headcount"]) == []

    def test_absent_side_gives_absent_delta(self):
        p = panel(row("KEN", 2010, headcount=0.3),
                  row("KEN", 2012, headcount=None, gini=0.4))
        diffs = first_difference(p, ["headcount", "gini"])
        assert diffs[0].deltas["headcount"] is None
        assert diffs[0].deltas["gini"] is None

    def test_row_count_formula(self):
        # sum over countries of max(0, n_obs - 1)
        p = panel(
            *[row("KEN", y, headcount=0.3) for y in (2004, 2005, 2009)],
            *[row("UGA", y, headcount=0.2) for y in (2010, 2015)],
            row("TZA", 2011, headcount=0.1),
        )
        diffs = first_difference(p, ["headcount"])
        assert len(diffs) == (3 - 1) + (2 - 1) + 0

    def test_record_naming(self):
        p = panel(row("KEN", 2010, headcount=0.3, gdp_growth=0.01),
                  row("KEN", 2011, headcount=0.25, gdp_growth=0.02))
        rec = first_difference(p, ["headcount"])[0].record()
        assert rec["country"] == "KEN"
        assert rec["d_headcount"] == pytest.approx(-0.05)
        assert rec["gdp_growth"] == 0.02
        assert rec["gap_years"] == 1


class TestForwardFill:
    def test_wave_fill_example(self):
        p = panel(
            row("KEN", 2011, account_all=0.30),
            row("KEN", 2012),
            row("KEN", 2013),
            row("KEN", 2014, account_all=0.35),
        )
        out = forward_fill_waves(p, ["account_all"], [2011, 2014, 2017])
        values = {r.year: r.account_all for r in out.rows}
        assert values == {2011: 0.30, 2012: 0.30, 2013: 0.30, 2014: 0.35}

    def test_before_first_wave_stays_absent(self):
        p = panel(row("KEN", 2010), row("KEN", 2011, account_all=0.3))
        out = forward_fill_waves(p, ["account_all"], [2011])
        assert out.rows[0].account_all is None

    def test_no_overwrite(self):
        p = panel(row("KEN", 2011, account_all=0.30),
                  row("KEN", 2012, account_all=0.99))
        out = forward_fill_waves(p, ["account_all"], [2011])
        assert out.rows[1].account_all == 0.99

    def test_idempotent(self):
        p = panel(
            row("KEN", 2011, account_all=0.30),
            row("KEN", 2013),
            row("KEN", 2015),
            row("UGA", 2012),
        )
        once = forward_fill_waves(p, ["account_all"], [2011, 2014])
        twice = forward_fill_waves(once, ["account_all"], [2011, 2014])
        assert once.rows == twice.rows

    def test_fill_skips_missing_wave(self):
        # 2014 wave missing for this country: 2015 falls back to 2011
        p = panel(row("KEN", 2011, account_all=0.3), row("KEN", 2015))
        out = forward_fill_waves(p, ["account_all"], [2011, 2014])
        assert out.rows[1].account_all == 0.3


class TestSummarize:
    def test_hand_values(self):
        p = panel(row("KEN", 2010, gini=0.1), row("KEN", 2011, gini=0.2),
                  row("KEN", 2012, gini=0.3))
        s = summarize(p, ["gini"])["gini"]
        assert s.mean == pytest.approx(0.2)
        assert s.median == pytest.approx(0.2)
        assert s.sd == pytest.approx(0.1)
        assert (s.min, s.max, s.n) == (0.1, 0.3, 3)

    def test_integers_one_two_three(self):
        p = panel(row("KEN", 2010, watts=1.0), row("KEN", 2011, watts=2.0),
                  row("KEN", 2012, watts=3.0))
        s = summarize(p, ["watts"])["watts"]
        assert (s.mean, s.median, s.sd, s.min, s.max, s.n) == (2, 2, 1, 1, 3, 3)

    def test_single_value_sd_absent(self):
        p = panel(row("KEN", 2010, watts=5.0))
        s = summarize(p, ["watts"])["watts"]
        assert s.sd is None and s.n == 1

    def test_empty_variable(self):
        p = panel(row("KEN", 2010, gini=0.4))
        with pytest.raises(EmptyVariable):
            summarize(p, ["fii"])

    def test_min_median_max_ordering(self):
        p = panel(*[row("KEN", 2004 + i, gini=v)
                    for i, v in enumerate([0.5, 0.2, 0.9, 0.4])])
        s = summarize(p, ["gini"])["gini"]
        assert s.min <= s.median <= s.max


class TestRoundTrip:
    def test_merged_csv_round_trip(self, tmp_path):
        p = panel(
            row("KEN", 2010, level="lower_middle", name="Kenya",
                headcount=0.371234567890123, poverty_gap=0.12, poverty_gap_sq=0.05,
                watts=0.2, gini=0.40787878, gdp_growth=0.047, fii=1 / 3,
                population=4.2e7, branches_per_100k=5.123456789),
            row("UGA", 2011, level="low", gini=0.35, gdp_growth=-0.013,
                account_all=0.22),
        )
        from dataclasses import replace

        rows = list(p.rows)
        rows[0] = replace(rows[0], gdp_is_forecast=False)
        p = AnalysisPanel.from_rows(rows, p.countries.values())
        path = tmp_path / "merged.csv"
        write_panel_csv(p, path)
        back = load_csv(path, "merged")
        assert not back.rejected
        assert back.panel.rows == p.rows
        assert back.panel.countries == p.countries


class TestCompleteRows:
    def test_keeps_only_complete(self):
        p = panel(row("KEN", 2010, headcount=0.3, gini=0.4),
                  row("KEN", 2011, headcount=0.3),
                  row("KEN", 2012, headcount=0.2, gini=0.41))
        out = complete_rows(p, ["headcount", "gini"])
        assert [r.year for r in out.rows] == [2010, 2012]


@given(st.lists(st.tuples(st.integers(2004, 2018),
                          st.floats(0.0, 1.0, allow_nan=False)),
                min_size=1, max_size=12, unique_by=lambda t: t[0]))
@settings(max_examples=50, deadline=None)
def test_diff_count_property(year_values):
    rows = [row("KEN", y, headcount=v) for y, v in year_values]
    p = AnalysisPanel.from_rows(rows)
    diffs = first_difference(p, ["headcount"])
    assert len(diffs) == max(0, len(year_values) - 1)
