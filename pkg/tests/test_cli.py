import csv
import io
import json

import pytest

from gponqkd.cli import main
from gponqkd.scenario import CONFIG_ENV_VAR

SNR_EXAMPLE = ["snr", "-o", "d0=1", "-o", "d1=1", "-o", "d2=1", "-o", "d3=1", "-o", "d4=1",
               "-o", "q=1", "-o", "N=2"]


@pytest.fixture(autouse=True)
def _no_env_config(monkeypatch):
    monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_no_arguments_prints_usage(capsys):
    code, _, err = run(capsys)
    assert code == 2
    assert "usage" in err


def test_unknown_flag(capsys):
    code, _, err = run(capsys, "sweep", "--bogus")
    assert code == 2 and "unrecognized arguments" in err


def test_tables_text(capsys):
    code, out, _ = run(capsys, "tables")
    assert code == 0
    assert "34.73" in out and "10900" in out and "35000" in out


def test_tables_csv_has_all_values(capsys):
    code, out, _ = run(capsys, "tables", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 48
    assert {r["table"] for r in rows} == {"I", "II"}


def test_tables_json(capsys):
    code, out, _ = run(capsys, "tables", "--format", "json")
    doc = json.loads(out)
    assert len(doc["table_i"]) == 24 and len(doc["table_ii"]) == 24


def test_snr_example(capsys):
    code, out, _ = run(capsys, *SNR_EXAMPLE, "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["k"] == pytest.approx(10 / 7, rel=1e-8)
    assert doc["snr_through"] == pytest.approx(0.2)
    assert doc["snr_bypass"] == pytest.approx(2 / 7, rel=1e-8)


def test_snr_text(capsys):
    code, out, _ = run(capsys, *SNR_EXAMPLE)
    assert code == 0 and "1.42857143" in out


def test_keyrate_json(capsys):
    code, out, _ = run(capsys, "keyrate", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["through"]["rate_bps"] == 0 and not doc["through"]["feasible"]
    assert doc["bypass"]["rate_bps"] > 0 and doc["bypass"]["feasible"]


def test_keyrate_explicit_channel(capsys):
    code, out, _ = run(capsys, "keyrate", "-o", "eta=0.01", "-o", "y0=1e-5", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["channel"]["rate_bps"] > 0


def test_calibrate(capsys):
    code, out, _ = run(capsys, "calibrate", "--format", "json")
    cells = json.loads(out)
    assert code == 0 and len(cells) == 24
    first = cells[0]
    assert first["r"] == pytest.approx(0.43807, abs=5e-6)


def test_config_errors_all_listed(capsys):
    code, _, err = run(capsys, "sweep", "-o", "detector.efficiency=2", "-o", "decoy.nu=0.9",
                       "-o", "detector.nope=1")
    assert code == 2
    assert "detector.efficiency" in err and "nu < mu" in err and "detector.nope" in err


def test_bad_override_syntax(capsys):
    code, _, err = run(capsys, "snr", "-o", "d0")
    assert code == 2 and "key=value" in err


def test_env_var_config(tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"fiber_configs": [[12, 2]], "ratios": [32], "architectures": "bypass"}))
    monkeypatch.setenv(CONFIG_ENV_VAR, str(cfg))
    code, out, _ = run(capsys, "sweep", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1 and rows[0]["architecture"] == "bypass"


def test_sweep_writes_output_and_plot(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    code, out, _ = run(capsys, "sweep", "--output", str(out_path))
    assert code == 0 and out == ""
    assert len(out_path.read_text().splitlines()) == 49
    assert (tmp_path / "sweep_plot.csv").exists()


def test_sweep_json_single_document(capsys):
    code, out, _ = run(capsys, "sweep", "--format", "json", "--compare")
    doc = json.loads(out)
    assert code == 0
    assert len(doc["records"]) == 48
    assert [c["table"] for c in doc["comparison"]] == ["I", "II"]


def test_sweep_default_matches_golden(tmp_path, capsys):
    from pathlib import Path
    golden = Path(__file__).parent / "golden" / "default_sweep.csv"
    code, out, _ = run(capsys, "sweep", "--plot-data", str(tmp_path / "p.csv"))
    assert code == 0
    assert out == golden.read_text(encoding="utf-8")
