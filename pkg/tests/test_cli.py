import json
import math

import pandas as pd
import pytest

from dashboard.export_contour_parquet import export_table_parquet
from dexterity.bounds import ConditionCeiling, SymmetricFactor, TransmissionInterval
from explorer.scans import contour_data
from explorer.volume import SINGULARITY_FREE_REGION
from kinematics.errors import InvalidBoundError
from pipeline import cli
from pipeline.cli import UsageError, main, parse_args, parse_cube, parse_volume_bound, run
from pipeline.verify import CheckResult
from pipeline.report import (
    design_to_record,
    designs_from_json,
    designs_to_json,
    format_design_table,
)
from synthesis.strategies import DesignSpec, synthesize

SCHEMA_KEYS = {
    "strategy", "link_length", "rho_min", "rho_max", "delta_rho", "p_min", "p_max", "cube_edge",
    "unit", "mu_cube", "mu_joint", "software_constraint", "rho_to_cube_ratio", "notes",
}


# ---------------------------------------------------------------------
# parse_args
# ---------------------------------------------------------------------

def test_parse_synthesize_prototype():
    config = parse_args(["synthesize", "--cube", "200mm", "--mu", "0.5", "--strategy", "all"])
    assert config.command == "synthesize"
    assert (config.cube_edge, config.unit) == (200.0, "mm")
    assert config.cube_edge_m == pytest.approx(0.2)
    assert config.bound == SymmetricFactor(0.5)
    assert config.strategies == (1, 2, 3)


def test_parse_condition_path():
    config = parse_args(["synthesize", "--cube", "1", "--condition", "2.5", "--strategy", "1"])
    assert config.bound == ConditionCeiling(2.5)
    assert config.strategies == (1,)
    assert config.unit == "normalized" and config.cube_edge_m is None


@pytest.mark.parametrize(
    "argv",
    [
        ["synthesize", "--mu", "1.5"],
        ["synthesize", "--cube", "1"],
        ["synthesize", "--mu", "0.5", "--condition", "2"],
        ["synthesize", "--mu", "0.5", "--strategy", "4"],
        ["synthesize", "--mu", "0.5", "--bogus"],
        ["synthesize", "--cube", "-3mm", "--mu", "0.5"],
        ["verify", "--resolution", "11"],
        ["explore"],
        ["explore", "--volume", "--rays", "10"],
        ["explore", "--offset", "5"],
        ["explore", "--singularity-free", "--samples", "200000"],
        ["launch"],
    ],
)
def test_usage_errors(argv):
    with pytest.raises(UsageError):
        parse_args(argv)


def test_main_returns_usage_status(capsys):
    assert main(["synthesize", "--mu", "1.5"]) == cli.EXIT_USAGE
    assert "--mu" in capsys.readouterr().err


@pytest.mark.parametrize(
    "text, expected",
    [("200mm", (200.0, "mm")), ("0.2m", (0.2, "m")), ("1", (1.0, "normalized")), ("2.5e2 mm", (250.0, "mm"))],
)
def test_parse_cube(text, expected):
    assert parse_cube(text) == expected


def test_parse_volume_bound():
    assert parse_volume_bound("lower:0.3333") == TransmissionInterval(0.3333, math.inf)
    assert parse_volume_bound("upper:3") == TransmissionInterval(0.0, 3.0)
    assert parse_volume_bound("two-sided:0.3333") == SymmetricFactor(0.3333)
    with pytest.raises(UsageError):
        parse_volume_bound("sideways:1")


# ---------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------

def test_json_record_schema():
    results = synthesize(DesignSpec(1.0, SymmetricFactor(0.5)))
    record = design_to_record(results[0])
    assert SCHEMA_KEYS <= set(record)
    assert record["mu_joint"] == "singular"
    assert design_to_record(results[1])["software_constraint"] is None


def test_json_round_trip_is_exact():
    results = synthesize(DesignSpec(200.0, SymmetricFactor(0.5), unit="mm"))
    assert designs_from_json(designs_to_json(results)) == results


def test_text_table_rounds_to_four_decimals():
    results = synthesize(DesignSpec(1.0, SymmetricFactor(0.5)))
    text = format_design_table(results)
    assert "0.7782" in text and "0.7618" in text and "0.7752" in text
    assert "singular" in text


# ---------------------------------------------------------------------
# run
# ---------------------------------------------------------------------

def test_run_synthesize_writes_json(tmp_path, capsys):
    out = tmp_path / "designs.json"
    config = parse_args(["synthesize", "--cube", "200mm", "--mu", "0.5", "--out", str(out)])
    assert run(config) == cli.EXIT_OK

    records = json.loads(out.read_text())
    assert [r["strategy"] for r in records] == [1, 2, 3]
    assert [r["unit"] for r in records] == ["mm"] * 3
    assert records[0]["link_length"] == pytest.approx(310.6, abs=0.1)
    assert "[synthesize]" in capsys.readouterr().out


def test_run_synthesize_no_save(tmp_path):
    out = tmp_path / "designs.json"
    config = parse_args(["synthesize", "--mu", "0.5", "--out", str(out), "--no-save"])
    assert run(config) == cli.EXIT_OK
    assert not out.exists()


def test_run_strategy3_with_condition_is_numeric_error(tmp_path):
    config = parse_args(["synthesize", "--condition", "2.5", "--strategy", "3", "--out", str(tmp_path / "d.json")])
    assert run(config) == cli.EXIT_NUMERIC
    assert not (tmp_path / "d.json").exists()


def test_run_contour_csv(tmp_path):
    out = tmp_path / "contour.csv"
    assert run(parse_args(["contour", "--resolution", "5", "--out", str(out)])) == cli.EXIT_OK

    raw = out.read_bytes()
    assert raw.startswith(b"rho_min,rho_max,mu_min,mu_max,kind_min,kind_max\n")
    assert b"\r\n" not in raw
    assert len(pd.read_csv(out)) == 25
    assert (tmp_path / "contour_loci.csv").exists()


def test_run_contour_removes_partial_files(tmp_path, monkeypatch):
    def broken_curves(_):
        raise InvalidBoundError("boom")

    monkeypatch.setattr(cli, "joint_limit_curves", broken_curves)
    out = tmp_path / "contour.csv"
    assert run(parse_args(["contour", "--resolution", "3", "--curves", "--out", str(out)])) == cli.EXIT_NUMERIC
    assert not out.exists()
    assert not (tmp_path / "contour_loci.csv").exists()


def test_run_tables_json(capsys):
    assert run(parse_args(["tables", "--format", "json"])) == cli.EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert [lm["name"] for lm in payload["landmarks"]] == ["P1", "O", "P2", "P3", "P4"]
    assert payload["region_constants"]["mu_star"] == pytest.approx(0.5387, abs=1e-3)
    assert [d["strategy"] for d in payload["designs"]] == [1, 2, 3]


def test_run_explore_offsets(tmp_path, capsys):
    out = tmp_path / "explore.json"
    argv = ["explore", "--offset", "5", "--cube", "200mm", "--mu", "0.5", "--out", str(out)]
    assert run(parse_args(argv)) == cli.EXIT_OK
    records = json.loads(out.read_text())
    assert [r["offset"] for r in records] == [0.0, 5.0]
    assert records[0]["mu_max"] == pytest.approx(2.0, abs=1e-9)


def test_run_verify_failure_exit_status(monkeypatch, capsys):
    def one_failing_check(pairs, resolution):
        return [
            CheckResult("round trip", True, 1e-12, 1e-10),
            CheckResult("global factors vs grid scan", False, 0.05, 0.01, "1 pair"),
        ]

    monkeypatch.setattr(cli, "run_all_checks", one_failing_check)
    assert run(parse_args(["verify", "--pairs", "1", "--resolution", "21"])) == cli.EXIT_VERIFY
    out = capsys.readouterr().out
    assert "FAIL  global factors vs grid scan" in out
    assert "1/2 checks passed" in out


def test_run_explore_singularity_free_reports_region(tmp_path, capsys):
    out = tmp_path / "explore.json"
    assert run(parse_args(["explore", "--singularity-free", "--out", str(out)])) == cli.EXIT_OK
    (record,) = json.loads(out.read_text())
    assert record["region"] == SINGULARITY_FREE_REGION
    assert record["fraction"] == pytest.approx(0.950, abs=0.003)
    assert "region counted" in capsys.readouterr().out


@pytest.mark.slow
def test_run_verify_passes(capsys):
    assert run(parse_args(["verify", "--pairs", "3", "--resolution", "21"])) == cli.EXIT_OK
    assert "FAIL" not in capsys.readouterr().out


def test_parquet_export(tmp_path):
    df = contour_data(3)
    summary = export_table_parquet(df, tmp_path / "contour.parquet", table_name="contour")
    back = pd.read_parquet(summary["out_path"])
    assert len(back) == len(df) == summary["rows"]
    assert "generated_at_utc" in back.columns
