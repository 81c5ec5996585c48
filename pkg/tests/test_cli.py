"""Command-line surface: parsing, outputs, determinism, exit codes."""
import csv
import json
from pathlib import Path

import pytest

from fpplab import cli


def run(args):
    return cli.main(args)


def test_theory_table_marks_minimizer(capsys):
    rc = run(["theory", "--s", "1", "--kmax", "4"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "minimizer" in out
    assert "limit hopcount: 2" in out


def test_theory_json_values(capsys):
    rc = run(["theory", "--s", "1", "--kmax", "4", "--format", "json"])
    doc = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert doc["limit_hops"] == 2
    assert doc["scale"]["2"] == pytest.approx(4.0, rel=1e-12)
    assert doc["scale"]["3"] == pytest.approx(4.5, rel=1e-12)
    assert doc["scale"]["1"] is None


def test_theory_tie_point(capsys):
    rc = run(["theory", "--special", "2"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "1.409420" in out


def test_simulate_writes_records_and_manifest(tmp_path):
    out = tmp_path / "runs"
    rc = run(["simulate", "--s", "0.5", "--n", "40", "--reps", "6",
              "--seed", "11", "--out", str(out), "--no-plots"])
    assert rc == 0
    (run_dir,) = out.iterdir()
    rows = list(csv.DictReader(open(run_dir / "records.csv")))
    assert len(rows) == 6
    assert {r["hopcount"] for r in rows} <= {"1", "2", "3", "4", "5"}
    manifest = json.loads((run_dir / "manifest.json").read_text())
    assert manifest["config"]["master_seed"] == 11
    assert "created_at" in manifest["metadata"]
    assert manifest["files"]["records"] == "records.csv"


def test_simulate_data_bytes_reproducible(tmp_path):
    args = ["simulate", "--s", "0.5,0.7", "--n", "30", "--reps", "4",
            "--seed", "3", "--no-plots"]
    rc1 = run(args + ["--out", str(tmp_path / "A")])
    rc2 = run(args + ["--out", str(tmp_path / "B")])
    assert rc1 == rc2 == 0
    (da,) = (tmp_path / "A").iterdir()
    (db,) = (tmp_path / "B").iterdir()
    assert (da / "records.csv").read_bytes() == \
        (db / "records.csv").read_bytes()


def test_simulate_json_format(tmp_path):
    rc = run(["simulate", "--s", "0.5", "--n", "30", "--reps", "3",
              "--seed", "5", "--format", "json",
              "--out", str(tmp_path / "J"), "--no-plots"])
    assert rc == 0
    (dj,) = (tmp_path / "J").iterdir()
    doc = json.loads((dj / "records.json").read_text())
    assert len(doc) == 3
    assert all(rec["weight"] > 0 for rec in doc)


def test_simulate_renders_figures(tmp_path):
    rc = run(["simulate", "--s", "0.5", "--n", "40", "--reps", "25",
              "--seed", "2", "--out", str(tmp_path / "F")])
    assert rc == 0
    (df,) = (tmp_path / "F").iterdir()
    figs = list((df / "figures").glob("*.png"))
    assert figs, "expected at least one rendered figure"
    manifest = json.loads((df / "manifest.json").read_text())
    assert manifest["files"]["figures"]


def test_invalid_config_rejected_before_any_write(tmp_path, capsys):
    out = tmp_path / "never"
    rc = run(["simulate", "--s", "-0.5", "--n", "40", "--reps", "2",
              "--out", str(out)])
    assert rc == 2
    assert not out.exists()
    assert "error" in capsys.readouterr().err
    rc = run(["simulate", "--s", "0.5", "--n", "40", "--reps", "0",
              "--out", str(out)])
    assert rc == 2
    assert not out.exists()


def test_config_file_merge_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "s_values": [0.5],
        "n_values": [25],
        "replications": 3,
        "master_seed": 9,
    }))
    out = tmp_path / "C"
    rc = run(["simulate", "--config", str(cfg), "--reps", "5",
              "--out", str(out), "--no-plots"])
    assert rc == 0
    (dc,) = out.iterdir()
    rows = list(csv.DictReader(open(dc / "records.csv")))
    assert len(rows) == 5  # flag wins over config file
    manifest = json.loads((dc / "manifest.json").read_text())
    assert manifest["config"]["master_seed"] == 9  # file value kept


def test_config_file_bad_json_rejected(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    out = tmp_path / "X"
    rc = run(["simulate", "--config", str(bad), "--out", str(out)])
    assert rc == 2
    assert not out.exists()


def test_sweep_summary_and_modal_hop(tmp_path):
    out = tmp_path / "S"
    rc = run(["sweep", "--s", "0.5", "--n", "200", "--reps", "40",
              "--seed", "20260819", "--out", str(out), "--no-plots"])
    assert rc == 0
    (ds,) = out.iterdir()
    rows = list(csv.DictReader(open(ds / "sweep.csv")))
    assert len(rows) == 1
    assert rows[0]["modal_hopcount"] == "2"
    assert rows[0]["predicted_hopcount"] == "2"


def test_validate_formulas_suite_exits_zero(tmp_path, capsys):
    out = tmp_path / "V"
    rc = run(["validate", "--suite", "formulas", "--out", str(out),
              "--no-plots"])
    captured = capsys.readouterr().out
    assert rc == 0
    assert "[PASS]" in captured
    (dv,) = out.iterdir()
    doc = json.loads((dv / "reports.json").read_text())
    assert all(r["passed"] for r in doc["formulas"])


def test_validate_rejects_unknown_suite(capsys):
    with pytest.raises(SystemExit):
        run(["validate", "--suite", "nonsense"])
