import os
import sys

import pytest

# Fix imports
project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.insert(0, project_root)

from uur import acceptance, matrix_core  # noqa: E402
from uur import main as cli  # noqa: E402
from utils.config import Config, config  # noqa: E402


@pytest.fixture(autouse=True)
def isolated_dirs(monkeypatch, tmp_path):
    monkeypatch.setattr(config, "LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.setattr(config, "OUTPUT_DIR", str(tmp_path / "curves"))
    return tmp_path


def test_list_prints_catalog(capsys):
    exit_code = cli.main(["list"])

    out = capsys.readouterr().out
    assert exit_code == 0
    assert "example1-remark" in out
    assert "example6" in out


def test_run_writes_csv(tmp_path):
    out = tmp_path / "d2.csv"

    exit_code = cli.main(["run", "example1-d2", "--grid", "0:pi:5", "--out", str(out)])

    assert exit_code == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "theta,variance_product,I2,LB2"
    assert len(lines) == 6


def test_run_default_output_path(isolated_dirs):
    exit_code = cli.main(["run", "example1-d3", "--grid", "0:pi:3", "--format", "json"])

    assert exit_code == 0
    assert (isolated_dirs / "curves" / "example1-d3.json").exists()


def test_unknown_scenario_is_usage_error():
    assert cli.main(["run", "example9"]) == 2


def test_bad_grid_is_usage_error():
    assert cli.main(["run", "example2", "--grid", "0:pi:1"]) == 2


def test_bad_seed_is_usage_error():
    assert cli.main(["--seed", "-1", "list"]) == 2


def test_missing_scenario_file_is_usage_error(tmp_path):
    assert cli.main(["--config", str(tmp_path / "missing.yaml"), "list"]) == 2


def test_missing_command_exits_2():
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == 2


def test_log_file_written(isolated_dirs):
    cli.main(["list"])

    log_text = (isolated_dirs / "logs" / "log.txt").read_text(encoding="utf-8")
    assert "uur list" in log_text


def test_check_writes_report(monkeypatch, isolated_dirs):
    monkeypatch.setattr(acceptance, "CRITERIA", [acceptance.example2_purification])
    monkeypatch.setattr(Config, "GRID_COUNT", "9")
    report = isolated_dirs / "acceptance.json"

    exit_code = cli.main(["check", "--report", str(report)])

    assert exit_code == 0
    assert '"pass":true' in report.read_text(encoding="utf-8").replace(" ", "")


def test_check_failure_exits_1(monkeypatch, isolated_dirs):
    monkeypatch.setattr(acceptance, "CRITERIA", [acceptance.example2_purification])
    monkeypatch.setattr(Config, "GRID_COUNT", "9")
    monkeypatch.setattr(matrix_core, "VEC_ORDER", "C")

    assert cli.main(["check", "--report", str(isolated_dirs / "r.json")]) == 1
