import json

from hybrid_ris import experiments as ex
from hybrid_ris.cli import main
from hybrid_ris.errors import InfeasibleBudget


def test_thresholds(capsys):
    assert main(["thresholds", "--lemma", "6"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "quantity,parameter,value"
    assert len(out) == 4


def test_bad_lemma():
    assert main(["thresholds", "--lemma", "9"]) == 2


def test_validate_shipped(capsys):
    assert main(["validate", "--scenario", "default"]) == 0
    assert "N=128" in capsys.readouterr().out


def test_validate_bad(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"N": 16, "a": 0.5, "M": 4}))
    assert main(["validate", "--scenario", str(p)]) == 2
    assert "K" in capsys.readouterr().err


def test_run_writes_csv_and_sidecar(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"N": 16, "a": 0.5, "M": 4, "K": 2, "trials": 1,
                             "solver": {"T_max": 2}, "architectures": ["fc_passive"]}))
    out = tmp_path / "r.csv"
    assert main(["run", "--scenario", str(p), "--out", str(out), "--seed", "5"]) == 0
    assert out.read_text().startswith("sweep_variable,")
    meta = json.loads((tmp_path / "r.csv.json").read_text())
    assert meta["seed"] == 5 and meta["violations"] == 0


def test_zero_forcing_needs_enough_antennas(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"N": 16, "a": 0.5, "M": 2, "K": 3, "trials": 1,
                             "architectures": ["zf:fc_passive"]}))
    assert main(["run", "--scenario", str(p)]) == 2


def test_run_all_infeasible(tmp_path, monkeypatch, capsys):
    def refuse(*args, **kw):
        raise InfeasibleBudget("no room")
    monkeypatch.setattr(ex, "bca_solve", refuse)
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"N": 16, "a": 0.5, "M": 4, "K": 2, "trials": 2,
                             "architectures": ["fc_passive"]}))
    assert main(["run", "--scenario", str(p)]) == 3
    assert "InfeasibleBudget" in capsys.readouterr().err


def test_asymptotics(capsys):
    assert main(["asymptotics", "--fig", "snr_vs_S"]) == 0
    assert capsys.readouterr().out.startswith("architecture,N,a_or_S,snr_db,regime")
