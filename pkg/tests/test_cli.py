import json

import pytest

from fivewise import cli


def run_cli(args, tmp_path, monkeypatch):
    monkeypatch.setenv("FIVEWISE_OUTDIR", str(tmp_path))
    return cli.main(args)


def test_exact_suite_passes(tmp_path, monkeypatch, capsys):
    code = run_cli(["exact", "all"], tmp_path, monkeypatch)
    out = capsys.readouterr().out
    assert code == cli.EXIT_PASS
    assert "exact suite: PASS" in out
    assert "5/8" in out


def test_sample_path_csv_and_rerun_byte_identical(tmp_path, monkeypatch):
    code = run_cli(["sample-path", "--window", "0:50", "--seed", "5"],
                   tmp_path, monkeypatch)
    assert code == cli.EXIT_PASS
    first = (tmp_path / "path_5.csv").read_text()
    assert first.startswith("k,x,n,anchor,j")
    (tmp_path / "path_5.csv").unlink()
    run_cli(["sample-path", "--window", "0:50", "--seed", "5"],
            tmp_path, monkeypatch)
    assert (tmp_path / "path_5.csv").read_text() == first


def test_sample_path_json(tmp_path, monkeypatch):
    code = run_cli(["sample-path", "--window=-5:5", "--seed", "2",
                    "--format", "json"], tmp_path, monkeypatch)
    assert code == cli.EXIT_PASS
    rows = json.loads((tmp_path / "path_2.json").read_text())
    assert len(rows) == 11
    assert rows[0]["k"] == -5
    assert all(r["x"] in (-1, 1) for r in rows)


def test_verify_writes_report(tmp_path, monkeypatch):
    code = run_cli(["verify", "double-one", "--seed", "3"],
                   tmp_path, monkeypatch)
    assert code == cli.EXIT_PASS
    payload = json.loads((tmp_path / "verify_double-one.json").read_text())
    assert payload["campaign"] == "double-one"
    assert payload["pass"] is True


def test_verify_campaign_flags(tmp_path, monkeypatch):
    code = run_cli(["verify", "tails", "--seed", "4", "--positions",
                    "200000", "--nmax", "4"], tmp_path, monkeypatch)
    assert code == cli.EXIT_PASS
    payload = json.loads((tmp_path / "verify_tails.json").read_text())
    assert payload["params"]["positions"] == 200000


def test_blocks_audit(tmp_path, monkeypatch, capsys):
    code = run_cli(["blocks", "--window", "0:5000", "--seed", "7"],
                   tmp_path, monkeypatch)
    out = capsys.readouterr().out
    assert code == cli.EXIT_PASS
    assert "PASS" in out
    payload = json.loads((tmp_path / "blocks_7.json").read_text())
    assert payload["pass"] is True
    assert payload["checked_blocks"] > 50
    assert all(row["sum"] == 0 for row in payload["blocks"])


def test_report_render_and_plot(tmp_path, monkeypatch, capsys):
    run_cli(["verify", "double-one", "--seed", "3"], tmp_path, monkeypatch)
    code = run_cli(["report", "--in",
                    str(tmp_path / "verify_double-one.json"),
                    "--plot", str(tmp_path / "plot.png")],
                   tmp_path, monkeypatch)
    assert code == cli.EXIT_PASS
    assert (tmp_path / "plot.png").stat().st_size > 1000


def test_config_file_defaults_flags_win(tmp_path, monkeypatch):
    cfgfile = tmp_path / "defaults.cfg"
    cfgfile.write_text("seed = 11\nnmax = 3\n")
    code = run_cli(["--config", str(cfgfile), "verify", "tails",
                    "--positions", "100000"], tmp_path, monkeypatch)
    assert code == cli.EXIT_PASS
    payload = json.loads((tmp_path / "verify_tails.json").read_text())
    assert payload["seed"] == 11
    assert payload["params"]["nmax"] == 3


def test_budget_exit_code(tmp_path, monkeypatch, capsys):
    # a level guard of 1 trips on the first depth-2 position
    code = run_cli(["blocks", "--window", "0:2000", "--seed", "7",
                    "--budget-level", "1"], tmp_path, monkeypatch)
    out = capsys.readouterr().out
    assert code == cli.EXIT_BUDGET
    assert "budget exceeded" in out


def test_ci_mode_requires_seed(tmp_path, monkeypatch):
    monkeypatch.setenv("FIVEWISE_CI", "1")
    with pytest.raises(SystemExit):
        run_cli(["verify", "double-one"], tmp_path, monkeypatch)
    # explicit seed is fine
    code = run_cli(["verify", "double-one", "--seed", "3"],
                   tmp_path, monkeypatch)
    assert code == cli.EXIT_PASS
