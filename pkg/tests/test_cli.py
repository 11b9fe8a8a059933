"""Command-line surface: happy paths, exit codes, determinism."""

import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner

from mipool.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def fractional_csv(tmp_path, m=3, name="f.csv"):
    lines = ["_Imputation_,Source,DF,MS,de_DF,MSE"]
    for i in range(1, m + 1):
        lines.append(f"{i},agegroup,3,2.0,20,1.0")
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


class TestPoolCommands:
    def test_pool_f(self, runner, tmp_path):
        out = str(tmp_path / "out.csv")
        result = runner.invoke(main, ["pool-f", "--input",
                                      fractional_csv(tmp_path), "--output", out])
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(out)
        assert frame["MI adjusted F"].iloc[0] == pytest.approx(2.0, abs=1e-10)
        assert frame["DF"].iloc[0] == pytest.approx(3.0, abs=1e-10)
        assert "MI adjusted F" in result.output

    def test_pool_chisq_text_flag(self, runner, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text(
            "Imputation,Source,DF,ChiSq\n1,a,2,4.0\n2,a,2,8.0\n", encoding="utf-8")
        macro = runner.invoke(main, ["pool-chisq", "--input", str(path),
                                     "--precision", "full"])
        text = runner.invoke(main, ["pool-chisq", "--input", str(path),
                                    "--chisq-scaling", "text", "--precision", "full"])
        assert macro.exit_code == 0 and text.exit_code == 0
        assert macro.output != text.output

    def test_pool_welch(self, runner, tmp_path):
        lines = ["_Imputation_,Source,DF,FValue"]
        for i in (1, 2):
            lines.append(f"{i},agegroup,4,14.{i}")
            lines.append(f"{i},Error,80.0,")
        path = tmp_path / "w.csv"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        result = runner.invoke(main, ["pool-welch", "--input", str(path)])
        assert result.exit_code == 0, result.output
        assert "agegroup" in result.output

    def test_pool_welch_matches_pipeline_route(self, runner, tmp_path):
        # exporting the per-imputation Welch ODS table and pooling it via
        # the CLI must reproduce the in-process pipeline result
        from mipool import datasets
        from mipool.analyzers import summaries_from_arrays, welch_anova
        from mipool.imputer import ImputationSpec, delete_values, impute_monotone_reg
        from mipool.pipeline import run_example

        m, seed = 12, 31
        data = datasets.load_upsit()
        missing = delete_values(data, "smell", datasets.upsit_missing_mask(data))
        lines = ["_Imputation_,Source,DF,FValue"]
        for completed in impute_monotone_reg(
                missing, ImputationSpec("smell", ("agegroup",), m, seed)):
            welch = welch_anova(summaries_from_arrays(
                completed.data["agegroup"].to_numpy(),
                completed.data["smell"].to_numpy()))
            lines.append(f"{completed.imputation},agegroup,{welch.k - 1},"
                         f"{welch.f_value!r}")
            lines.append(f"{completed.imputation},Error,{welch.gamma!r},")
        path = tmp_path / "welch_ods.csv"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        out = str(tmp_path / "pooled.csv")
        result = runner.invoke(main, ["pool-welch", "--input", str(path),
                                      "--output", out])
        assert result.exit_code == 0, result.output
        via_cli = pd.read_csv(out)
        via_pipeline = run_example("upsit", m=m, seed=seed).pooled
        assert via_cli["MI adjusted F"].iloc[0] == pytest.approx(
            via_pipeline["MI adjusted F"].iloc[0], rel=1e-12)
        assert via_cli["DF"].iloc[0] == pytest.approx(
            via_pipeline["DF"].iloc[0], rel=1e-12)
        assert via_cli["Error DF"].iloc[0] == pytest.approx(
            via_pipeline["Error DF"].iloc[0], rel=1e-12)

    def test_pool_tests3(self, runner, tmp_path):
        lines = ["Imputation,Effect,NumDF,DenDF,FValue"]
        for i in (1, 2, 3):
            lines.append(f"{i},Age,1,79,{40 + i}")
        path = tmp_path / "t3.csv"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        result = runner.invoke(main, ["pool-tests3", "--input", str(path),
                                      "--sfa-variant", "text"])
        assert result.exit_code == 0, result.output
        assert "Age" in result.output


class TestExitCodes:
    def test_schema_error_exits_2(self, runner, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("Imputation,Source,DF\n1,a,2\n", encoding="utf-8")
        result = runner.invoke(main, ["pool-chisq", "--input", str(path)])
        assert result.exit_code == 2
        assert "missing required column" in result.output

    def test_numeric_error_exits_3(self, runner, tmp_path):
        path = tmp_path / "zero.csv"
        path.write_text(
            "Imputation,Source,DF,ChiSq\n1,a,2,0.0\n2,a,2,5.0\n", encoding="utf-8")
        result = runner.invoke(main, ["pool-chisq", "--input", str(path)])
        assert result.exit_code == 3
        assert "row" in result.output

    def test_io_error_exits_4(self, runner, tmp_path):
        result = runner.invoke(main, ["pool-f", "--input",
                                      str(tmp_path / "nope.csv")])
        assert result.exit_code == 4

    def test_integrity_gap_exits_2(self, runner, tmp_path):
        path = tmp_path / "gap.csv"
        path.write_text(
            "Imputation,Source,DF,ChiSq\n1,a,2,4.0\n3,a,2,5.0\n", encoding="utf-8")
        result = runner.invoke(main, ["pool-chisq", "--input", str(path)])
        assert result.exit_code == 2


class TestRunExample:
    def test_upsit_single_imputation_degeneracy(self, runner, tmp_path):
        out = str(tmp_path / "out")
        result = runner.invoke(main, ["run-example", "upsit", "--m", "1",
                                      "--seed", "11", "--output", out])
        assert result.exit_code == 0, result.output
        pooled = pd.read_csv(f"{out}/upsit_pooled.csv")
        # M=1 pools to the single completed dataset's own Welch test
        from mipool import datasets
        from mipool.analyzers import summaries_from_arrays, welch_anova
        from mipool.imputer import ImputationSpec, delete_values, impute_monotone_reg
        data = datasets.load_upsit()
        missing = delete_values(data, "smell", datasets.upsit_missing_mask(data))
        completed = impute_monotone_reg(
            missing, ImputationSpec("smell", ("agegroup",), 1, 11))[0]
        welch = welch_anova(summaries_from_arrays(
            completed.data["agegroup"].to_numpy(),
            completed.data["smell"].to_numpy()))
        assert pooled["MI adjusted F"].iloc[0] == pytest.approx(
            welch.f_value, rel=1e-10)
        assert pooled["DF"].iloc[0] == pytest.approx(4.0, abs=1e-9)

    def test_growth_smoke(self, runner, tmp_path):
        out = str(tmp_path / "g")
        result = runner.invoke(main, ["run-example", "growth", "--m", "5",
                                      "--seed", "4", "--output", out])
        assert result.exit_code == 0, result.output
        complete = pd.read_csv(f"{out}/growth_complete.csv")
        assert complete["Source"].tolist() == ["Gender", "Age", "Age*Gender"]
        pooled = pd.read_csv(f"{out}/growth_pooled.csv")
        assert len(pooled) == 3

    def test_byte_identical_reruns_and_jobs(self, runner, tmp_path):
        outputs = {}
        for tag, jobs in (("a", "1"), ("b", "1"), ("c", "8")):
            out = tmp_path / tag
            result = runner.invoke(main, [
                "run-example", "upsit", "--m", "15", "--seed", "303",
                "--jobs", jobs, "--output", str(out)])
            assert result.exit_code == 0, result.output
            outputs[tag] = (
                (out / "upsit_complete.csv").read_bytes(),
                (out / "upsit_pooled.csv").read_bytes(),
            )
        assert outputs["a"] == outputs["b"] == outputs["c"]


class TestSimulateCommand:
    def test_smoke(self, runner, tmp_path):
        out = str(tmp_path / "sim.csv")
        result = runner.invoke(main, [
            "simulate", "--means", "0,0", "--sds", "1,2", "--sizes", "12,14",
            "--missing-fraction", "0.15", "--replications", "25", "--m", "4",
            "--seed", "5", "--output", out])
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(out)
        assert frame["Replications"].iloc[0] == 25
        assert 0.0 <= frame["Rejection rate"].iloc[0] <= 1.0

    def test_bad_config_exits_2(self, runner):
        result = runner.invoke(main, ["simulate", "--means", "0", "--sds", "1",
                                      "--sizes", "10"])
        assert result.exit_code == 2

    def test_unparseable_list_exits_2(self, runner):
        result = runner.invoke(main, ["simulate", "--means", "a,b",
                                      "--sds", "1,2", "--sizes", "5,5"])
        assert result.exit_code == 2
        assert "--means" in result.output
