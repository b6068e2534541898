"""
命令行入口测试
"""
import pytest

from cli import (
    EXIT_FAIL,
    EXIT_OK,
    EXIT_USAGE,
    CheckJob,
    RunConfig,
    VerifyReport,
    dims_rows,
    main,
    parse_checks,
    parse_t_range,
    run_job,
)
from config import Config


def test_parse_t_range():
    assert parse_t_range("4") == [4]
    assert parse_t_range("2..5") == [2, 3, 4, 5]
    with pytest.raises(ValueError):
        parse_t_range("5..2")
    with pytest.raises(ValueError):
        parse_t_range("x")


def test_parse_checks():
    assert parse_checks(None) == ["square-zero", "exactness", "euler"]
    assert parse_checks("all") == list(Config.ALL_CHECKS)
    assert parse_checks("bar, ext") == ["bar", "ext"]


def test_run_config_validation():
    config = RunConfig(n=2, t_values=[2, 3], field="F3", checks=["bar", "bar"])
    assert config.field == "f3"
    assert config.checks == ["bar"]
    with pytest.raises(ValueError):
        RunConfig(n=2, t_values=[0])
    with pytest.raises(ValueError):
        RunConfig(n=0, t_values=[1])
    with pytest.raises(ValueError):
        RunConfig(n=2, t_values=[2], checks=["nonsense"])
    with pytest.raises(ValueError):
        RunConfig(n=4, t_values=[6], cap=100)


def test_run_config_defaults_follow_config():
    config = RunConfig(n=2, t_values=[2])
    assert (config.seed, config.trials, config.cap, config.jobs) == (
        Config.DEFAULT_SEED, Config.DEFAULT_TRIALS, Config.BASIS_CAP, Config.MAX_JOBS,
    )
    Config.override(DEFAULT_SEED=7, DEFAULT_TRIALS=3, BASIS_CAP=500)
    config = RunConfig(n=2, t_values=[2])
    assert (config.seed, config.trials, config.cap) == (7, 3, 500)


def test_dims_rows():
    rows = dims_rows(2, 4)
    assert rows[0] == "p = 1: dim 0  [compositions: 0]"
    assert rows[2].startswith("p = 3: dim 12 = 3 × (2·2·1)")
    assert rows[2].endswith("[compositions: 3]")
    assert dims_rows(4, 1) == ["p = 1: dim 4 = 1 × (4)  [compositions: 1]"]


def test_cmd_dims(capsys):
    assert main(["dims", "--n", "3", "--t", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "p = 1: dim 1" in out
    assert "p = 2: dim 18" in out
    assert "p = 3: dim 27" in out
    assert "S^3: dim 10" in out


def test_cmd_verify_default_report(capsys):
    code = main(["verify", "--n", "3", "--t", "4", "--field", "q", "--checks", "exactness,square-zero"])
    captured = capsys.readouterr()
    assert code == EXIT_OK
    report = VerifyReport.model_validate_json(captured.out)
    assert report.n == 3
    assert report.t_values == [4]
    assert report.field == "q"
    assert report.seed == 12345
    assert report.tool_version == Config.TOOL_VERSION
    assert [record.name for record in report.checks] == ["exactness", "square-zero"]
    assert all(record.status == "PASS" for record in report.checks)
    assert all(record.elapsed_ms >= 0 for record in report.checks)
    assert "✅" in captured.err


def test_cmd_verify_bar_mod_two(capsys):
    assert main(["verify", "--n", "2", "--t", "2", "--field", "f2", "--checks", "bar"]) == EXIT_OK
    report = VerifyReport.model_validate_json(capsys.readouterr().out)
    assert report.checks[0].params["field"] == "f2"


def test_cmd_verify_range_and_output_file(tmp_path, capsys):
    out = tmp_path / "reports" / "report.json"
    code = main(["verify", "--n", "2", "--t", "1..3", "--seed", "7", "--out", str(out)])
    assert code == EXIT_OK
    assert capsys.readouterr().out == ""
    report = VerifyReport.model_validate_json(out.read_text(encoding="utf-8"))
    assert report.seed == 7
    assert report.t_values == [1, 2, 3]
    assert len(report.checks) == 9
    assert [record.params["t"] for record in report.checks] == [1, 1, 1, 2, 2, 2, 3, 3, 3]


def test_cmd_verify_spectral_emits_koszul(capsys):
    assert main(["verify", "--n", "2", "--t", "1..3", "--checks", "spectral"]) == EXIT_OK
    report = VerifyReport.model_validate_json(capsys.readouterr().out)
    assert [record.name for record in report.checks] == ["spectral", "koszul"] * 3


def test_cmd_verify_all_checks(capsys):
    assert main(["verify", "--n", "2", "--t", "2", "--checks", "all", "--trials", "2"]) == EXIT_OK
    report = VerifyReport.model_validate_json(capsys.readouterr().out)
    names = [record.name for record in report.checks]
    assert names == ["square-zero", "exactness", "euler", "hilbert", "equivariance", "spectral", "koszul", "bar", "ext"]


@pytest.mark.parametrize("argv", [
    ["verify", "--n", "2", "--t", "0"],
    ["verify", "--n", "2", "--t", "2", "--checks", "nonsense"],
    ["verify", "--n", "4", "--t", "6", "--cap", "100"],
    ["verify", "--n", "2", "--t", "2", "--field", "f11"],
    ["verify", "--t", "2"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE


def test_run_job_reports_failure_as_fail():
    records = run_job(CheckJob("euler", 2, 0, "q", 1, 1))
    assert len(records) == 1
    assert records[0].status == "FAIL"
    assert records[0].details.startswith("error:")
    assert EXIT_FAIL == 1


def test_parallel_jobs_match_serial(capsys):
    assert main(["verify", "--n", "2", "--t", "2..3", "--checks", "exactness,euler"]) == EXIT_OK
    serial = VerifyReport.model_validate_json(capsys.readouterr().out)
    assert main(["verify", "--n", "2", "--t", "2..3", "--checks", "exactness,euler", "--jobs", "2"]) == EXIT_OK
    parallel = VerifyReport.model_validate_json(capsys.readouterr().out)
    assert [(r.name, r.params, r.status, r.details) for r in serial.checks] == \
        [(r.name, r.params, r.status, r.details) for r in parallel.checks]


def test_cmd_export(tmp_path, capsys):
    out = tmp_path / "export"
    assert main(["export", "--n", "2", "--t", "2", "--out", str(out)]) == EXIT_OK
    directory = out / "n2_t2_q"
    assert (directory / "delta_T_2_1.txt").read_text() == "4 1 2\n2 1 1\n3 1 -1\n"
    first = {path.name: path.read_bytes() for path in directory.iterdir()}
    assert main(["export", "--n", "2", "--t", "2", "--out", str(out)]) == EXIT_OK
    second = {path.name: path.read_bytes() for path in directory.iterdir()}
    assert first == second
    assert "manifest.txt" in first
