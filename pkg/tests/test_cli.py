import csv
import filecmp
from pathlib import Path

import pytest

from povkit.cli import main
from povkit.errors import DegenerateColumn


@pytest.fixture(scope="module")
def data_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("synthdata")
    assert main(["synth", "--out-dir", str(out), "--seed", "99",
                 "--countries", "30"]) == 0
    return out


def write_sample(path: Path, incomes, weights=None):
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        if weights is None:
            writer.writerow(["income"])
            writer.writerows([[y] for y in incomes])
        else:
            writer.writerow(["income", "weight"])
            writer.writerows(list(zip(incomes, weights)))


class TestSynth:
    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["synth", "--out-dir", str(a), "--seed", "5"]) == 0
        assert main(["synth", "--out-dir", str(b), "--seed", "5"]) == 0
        for name in ("fas.csv", "povcal.csv", "weo.csv", "findex.csv",
                     "population.csv", "income_class.csv"):
            assert filecmp.cmp(a / name, b / name, shallow=False), name

    def test_seed_changes_output(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        main(["synth", "--out-dir", str(a), "--seed", "5"])
        main(["synth", "--out-dir", str(b), "--seed", "6"])
        assert not filecmp.cmp(a / "povcal.csv", b / "povcal.csv", shallow=False)

    def test_env_seed(self, tmp_path, monkeypatch):
        a, b = tmp_path / "a", tmp_path / "b"
        monkeypatch.setenv("POVKIT_SEED", "123")
        main(["synth", "--out-dir", str(a)])
        main(["synth", "--out-dir", str(b), "--seed", "123"])
        assert filecmp.cmp(a / "povcal.csv", b / "povcal.csv", shallow=False)


class TestMeasures:
    def test_values_against_library(self, tmp_path, capsys):
        sample = tmp_path / "sample.csv"
        write_sample(sample, [1.0, 2.0, 3.0])
        assert main(["measures", "--sample", str(sample), "--line", "1.9"]) == 0
        out = capsys.readouterr().out
        rows = {line.split(",")[0]: float(line.split(",")[2])
                for line in out.strip().splitlines()[1:]}
        assert rows["headcount"] == pytest.approx(1 / 3)
        assert rows["poverty_gap"] == pytest.approx((0.9 / 1.9) / 3)

    def test_nonpositive_line_exit_code(self, tmp_path):
        sample = tmp_path / "sample.csv"
        write_sample(sample, [1.0])
        assert main(["measures", "--sample", str(sample), "--line", "0"]) == 20

    def test_bad_numeric_exit_code(self, tmp_path):
        sample = tmp_path / "sample.csv"
        sample.write_text("income\nabc\n")
        assert main(["measures", "--sample", str(sample)]) == 11


class TestDecompose:
    def test_identical_inputs_zero_components(self, tmp_path, capsys):
        sample = tmp_path / "s.csv"
        write_sample(sample, [1.0, 2.0, 3.0, 4.0])
        assert main(["decompose", "--initial", str(sample), "--final", str(sample),
                     "--quantiles", "1000"]) == 0
        out = capsys.readouterr().out.strip().splitlines()
        _, _, total, growth, redis, resid = out[1].split(",")
        assert float(total) == float(growth) == float(redis) == float(resid) == 0.0

    def test_output_file(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_sample(a, [1.0, 2.0, 3.0, 4.0])
        write_sample(b, [1.5, 2.5, 3.5, 4.5])
        out = tmp_path / "decomp.csv"
        assert main(["decompose", "--initial", str(a), "--final", str(b),
                     "--quantiles", "1000", "--out", str(out)]) == 0
        text = out.read_text()
        assert text.startswith("measure,z,total,growth,redistribution,residual")


class TestIndexBuild:
    def test_build_on_synth(self, data_dir, tmp_path):
        out = tmp_path / "idx"
        assert main(["index", "build", "--fas", str(data_dir / "fas.csv"),
                     "--out-dir", str(out)]) == 0
        assert (out / "fii.csv").exists()
        assert (out / "outreach.csv").exists()
        assert (out / "usage.csv").exists()
        diag = (out / "diagnostics.txt").read_text()
        assert "eigenvalue" in diag

    def test_degenerate_column_exit_code(self, tmp_path):
        fas = tmp_path / "fas.csv"
        header = ("iso3,country_name,year,branches_per_100k,atms_per_100k,"
                  "branches_per_1000km2,atms_per_1000km2,accounts_per_1000\n")
        rows = "".join(
            f"AA{chr(65 + i)},X,2010,5,{2 + i},{1 + i},{0.5 + i},{10 + i}\n"
            for i in range(6)
        )
        fas.write_text(header + rows)
        code = main(["index", "build", "--fas", str(fas),
                     "--out-dir", str(tmp_path / "o")])
        assert code == DegenerateColumn.exit_code


class TestIngestRegressForecast:
    def test_ingest(self, data_dir, tmp_path):
        out = tmp_path / "merged.csv"
        assert main([
            "ingest",
            "--povcal", str(data_dir / "povcal.csv"),
            "--weo", str(data_dir / "weo.csv"),
            "--findex", str(data_dir / "findex.csv"),
            "--population", str(data_dir / "population.csv"),
            "--income-class", str(data_dir / "income_class.csv"),
            "--out", str(out),
        ]) == 0
        header = out.read_text().splitlines()[0]
        assert header.startswith("iso3,country_name,income_level,year,headcount")

    def test_regress_and_forecast(self, data_dir, tmp_path, capsys):
        merged = tmp_path / "merged.csv"
        idx = tmp_path / "idx"
        main(["index", "build", "--fas", str(data_dir / "fas.csv"),
              "--out-dir", str(idx)])
        assert main([
            "ingest",
            "--fas", str(data_dir / "fas.csv"),
            "--povcal", str(data_dir / "povcal.csv"),
            "--weo", str(data_dir / "weo.csv"),
            "--income-class", str(data_dir / "income_class.csv"),
            "--out", str(merged),
        ]) == 0
        # indices are built by report; for the standalone path regress on
        # gini/growth only
        reg_dir = tmp_path / "reg"
        assert main([
            "regress", "--panel", str(merged),
            "--dep", "d_headcount", "--x", "d_gini,gdp_growth",
            "--layout", "table2", "--out-dir", str(reg_dir),
        ]) == 0
        out = capsys.readouterr().out
        assert "ΔGini" in out
        assert (reg_dir / "table2.txt").exists()
        assert (reg_dir / "model.csv").exists()

    def test_regress_rank_deficient_exit(self, data_dir, tmp_path):
        merged = tmp_path / "merged.csv"
        main(["ingest", "--povcal", str(data_dir / "povcal.csv"),
              "--income-class", str(data_dir / "income_class.csv"),
              "--out", str(merged)])
        code = main([
            "regress", "--panel", str(merged),
            "--dep", "d_headcount", "--x", "d_gini,d_gini2",
        ])
        assert code == 2  # unknown field -> usage error


class TestReport:
    def test_full_report_and_determinism(self, data_dir, tmp_path):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        assert main(["report", "--data-dir", str(data_dir),
                     "--out-dir", str(out1)]) == 0
        assert main(["report", "--data-dir", str(data_dir),
                     "--out-dir", str(out2)]) == 0
        files1 = sorted(p.relative_to(out1) for p in out1.rglob("*") if p.is_file())
        files2 = sorted(p.relative_to(out2) for p in out2.rglob("*") if p.is_file())
        assert files1 == files2
        for rel in files1:
            assert (out1 / rel).read_bytes() == (out2 / rel).read_bytes(), rel

    def test_report_contents(self, data_dir, tmp_path):
        out = tmp_path / "rep"
        assert main(["report", "--data-dir", str(data_dir),
                     "--out-dir", str(out)]) == 0
        for rel in (
            "merged.csv", "model.csv",
            "tables/table1.txt", "tables/table2.csv", "tables/table3.txt",
            "tables/table4.csv",
            "indices/fii.csv", "indices/diagnostics.txt",
            "figures/fig2_inclusion_levels.csv",
            "figures/fig2_inclusion_levels.png",
            "figures/fig3_marginal_effects.png",
            "figures/fig4_gini_effect_profile.csv",
            "figures/fig5_global_paths.png",
            "figures/fig6_scoped_paths.csv",
            "forecast/all_global.csv", "forecast/scoped_paths.csv",
        ):
            assert (out / rel).exists(), rel
        # figure PNGs are real images
        assert (out / "figures/fig5_global_paths.png").read_bytes()[:8] == \
            b"\x89PNG\r\n\x1a\n"
        # forecast subcommand consumes the saved model
        fc = tmp_path / "fc"
        assert main([
            "forecast", "--model", str(out / "model.csv"),
            "--panel", str(out / "merged.csv"),
            "--weo", str(data_dir / "weo.csv"),
            "--population", str(data_dir / "population.csv"),
            "--scope", "low,lower_middle",
            "--out-dir", str(fc),
        ]) == 0
        text = (fc / "forecast_global.csv").read_text().splitlines()
        assert text[0] == "scenario,year,rate,poor_count"
        assert len(text) == 1 + 3 * 3  # 3 scenarios x 3 years


class TestHelp:
    def test_exit_codes_documented(self, capsys):
        with pytest.raises(SystemExit):
            main(["--help"])
        out = capsys.readouterr().out
        assert "exit codes" in out
        assert "DegenerateColumn" in out
        assert "TooFewClusters" in out
        assert "POVKIT_SEED" in out
