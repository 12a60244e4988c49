import pytest

from povkit.errors import LayoutMismatch
from povkit.panel import CountryKey, VariableSummary
from povkit.tables import (
    CoefCell,
    TableColumn,
    parse_summary_csv,
    parse_table_csv,
    read_index_wide,
    render_summary,
    render_table,
    write_index_wide,
)


def table2_col1():
    """Reference first column of the baseline change regression."""
    return TableColumn(
        header="ΔHeadcount",
        coefficients=(
            CoefCell(0.618, 0.326, "*"),
            CoefCell(0.011, 0.037, ""),
        ),
        constant=CoefCell(-0.007, 0.002, "***"),
        n_obs=856,
        adjusted_r2=0.0977,
        n_countries=77,
    )


class TestRenderTable:
    def test_reference_column_fixture(self):
        text, csv_text = render_table([table2_col1()], "table2")
        assert "0.618*" in text
        assert "[0.326]" in text
        assert "-0.007***" in text
        assert "856" in text
        assert "0.0977" in text
        assert "77" in text
        assert "Country fixed effects" in text
        assert "Yes" in text
        assert "Robust standard error cluster" in text
        # row order: coefficient block, then the footer block in fixed order
        lines = text.splitlines()
        order = [i for i, line in enumerate(lines) for label in
                 ("Observations", "Adjusted R²", "Number of country",
                  "Country fixed effects", "Robust standard error cluster")
                 if line.startswith(label)]
        assert order == sorted(order)

    def test_zero_coefficient_no_stars(self):
        col = TableColumn(
            header="ΔHeadcount",
            coefficients=(CoefCell(0.0, 0.5, ""), CoefCell(0.1, 0.2, "")),
            constant=None, n_obs=10, adjusted_r2=0.1, n_countries=5,
        )
        text, _ = render_table([col], "table2")
        assert "0.000" in text
        assert "0.000*" not in text

    def test_csv_round_trip(self):
        col = table2_col1()
        _, csv_text = render_table([col], "table2")
        back = parse_table_csv(csv_text)
        assert len(back) == 1
        assert back[0] == col

    def test_layout_arity_mismatch(self):
        col = table2_col1()
        with pytest.raises(LayoutMismatch):
            render_table([col], "table3")  # table3 expects 4 coefficient rows

    def test_unknown_layout(self):
        with pytest.raises(LayoutMismatch):
            render_table([table2_col1()], "table9")

    def test_multi_column(self):
        cols = [table2_col1(), table2_col1()]
        text, csv_text = render_table(cols, "table2")
        assert text.count("0.618*") == 2
        assert parse_table_csv(csv_text) == cols

    def test_adjusted_r2_three_significant_digits(self):
        col = TableColumn(
            header="x", coefficients=(CoefCell(0, 1, ""), CoefCell(0, 1, "")),
            constant=None, n_obs=1, adjusted_r2=0.23, n_countries=1,
        )
        text, _ = render_table([col], "table2")
        assert "0.23" in text


class TestRenderSummary:
    def test_reference_row_fixture(self):
        summaries = {"headcount": VariableSummary(
            mean=0.271, median=0.173, sd=0.25, min=0.0, max=0.941, n=933)}
        text, csv_text = render_summary(summaries, {"headcount": "Headcount"})
        assert "Headcount" in text
        assert "0.271" in text
        assert "933" in text
        back = parse_summary_csv(csv_text)
        assert back["headcount"] == summaries["headcount"]

    def test_absent_sd(self):
        summaries = {"watts": VariableSummary(5.0, 5.0, None, 5.0, 5.0, 1)}
        text, csv_text = render_summary(summaries)
        back = parse_summary_csv(csv_text)
        assert back["watts"].sd is None


class TestIndexWide:
    def test_round_trip_with_income(self, tmp_path):
        values = {("AFG", 2004): 0.019, ("AFG", 2005): 0.020, ("ALB", 2004): 0.257}
        countries = {
            "AFG": CountryKey("AFG", "low", "Afghanistan"),
            "ALB": CountryKey("ALB", "upper_middle", "Albania"),
        }
        path = tmp_path / "fii.csv"
        write_index_wide(values, countries, path, include_income=True)
        back_values, back_countries = read_index_wide(path)
        assert back_values == values
        assert back_countries["AFG"].income_level == "low"
        assert back_countries["AFG"].name == "Afghanistan"
        text = path.read_text()
        assert "Low income" in text
        assert "0.019" in text

    def test_round_trip_without_income(self, tmp_path):
        values = {("KEN", 2010): 0.5}
        path = tmp_path / "usage.csv"
        write_index_wide(values, {"KEN": CountryKey("KEN")}, path,
                         include_income=False)
        back_values, _ = read_index_wide(path)
        assert back_values == values

    def test_missing_cells_left_empty(self, tmp_path):
        values = {("KEN", 2010): 0.5, ("UGA", 2011): 0.3}
        path = tmp_path / "x.csv"
        write_index_wide(values, {}, path, include_income=False)
        back_values, _ = read_index_wide(path)
        assert back_values == values
