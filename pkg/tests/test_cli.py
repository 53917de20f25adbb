import json
import subprocess
import sys

import pytest

from heartlab.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_invariants_json(capsys, tmp_path):
    code, out, _ = call(capsys, "invariants", "--family", "P0")
    data = json.loads(out)
    assert code == 0 and data["schema_version"] == 1
    assert data["A"].startswith("0.6309297535714574370995271143427608542")
    for key in ("lambda", "mu", "nu", "gamma", "A", "s_paper", "s_model", "tau_paper", "tau_model"):
        assert key in data
    code, out2, _ = call(capsys, "invariants", "--family", "P0.toml")
    assert code == 0 and json.loads(out2)["A"] == data["A"]


def test_scan_tsv(capsys):
    code, out, _ = call(capsys, "scan", "--family", "P0", "--depth", "6", "--format", "tsv")
    lines = out.splitlines()
    assert code == 0
    assert lines[0].startswith("# precision_bits=256")
    assert lines[1] == "sigma\tmark\tn\tk"
    rows = [line.split("\t") for line in lines[2:]]
    assert len(rows) >= 6
    sigmas = [float(r[0]) for r in rows]
    assert all(a <= b for a, b in zip(sigmas, sigmas[1:]))
    assert {r[1] for r in rows} <= {"LE", "LI", "EI"}


def test_scan_is_deterministic():
    cmd = [sys.executable, "-m", "heartlab", "scan", "--family", "P1", "--depth", "8"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["schema_version"] == 1


def test_precision_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("HEARTLAB_PRECISION", "320")
    code, out, _ = call(capsys, "invariants")
    assert code == 0 and json.loads(out)["precision_bits"] == 320
    code, out, _ = call(capsys, "invariants", "--precision", "288")
    assert json.loads(out)["precision_bits"] == 288


def test_auto_precision(capsys):
    code, out, _ = call(capsys, "scan", "--depth", "4", "--precision", "auto", "--no-ei")
    assert code == 0 and json.loads(out)["precision_bits"] >= 256


def test_config_errors(capsys, tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text('depht = 3\n')
    code, _, err = call(capsys, "invariants", "--config", str(bad))
    assert code == 2 and "depht" in err
    floats = tmp_path / "floats.toml"
    floats.write_text('[families.F]\nlambda = 0.5\nmu = "12"\nB1 = "1"\nB2 = "1"\nC1 = "e"\nC2 = "e"\n')
    code, _, err = call(capsys, "invariants", "--config", str(floats), "--family", "F")
    assert code == 2 and "lambda" in err
    code, _, _ = call(capsys, "invariants", "--config", str(tmp_path / "missing.toml"))
    assert code == 2


def test_config_family(capsys, tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text('depth = 6\n[families.Half]\nlambda = "1/2"\nmu = "12"\nB1 = "1"\nB2 = "1"\n'
                   'C1 = "e"\nC2 = "e"\n')
    code, out, _ = call(capsys, "scan", "--config", str(cfg), "--family", "Half", "--no-ei")
    data = json.loads(out)
    assert code == 0 and data["depth"] == 6 and data["family"] == "Half"


def test_usage_errors(capsys):
    assert call(capsys, "frobnicate")[0] == 2
    assert call(capsys, "invariants", "--family", "nope")[0] == 2
    assert call(capsys, "ei-locate", "--index", "-1", "--depth", "4")[0] == 2


def test_ei_locate(capsys):
    code, out, _ = call(capsys, "ei-locate", "--index", "2", "--depth", "6")
    data = json.loads(out)
    assert code == 0 and data["root"]["mark"] == "EI"


def test_diophantine_exit_codes(capsys):
    code, out, _ = call(capsys, "diophantine-check", "--family", "P0", "--n-max", "100")
    assert code == 0 and json.loads(out)["verdict"] == "NoViolationsBeyond"
    code, out, _ = call(capsys, "diophantine-check", "--triple", "1/2", "1", "0", "--n-max", "40")
    assert code == 4 and json.loads(out)["verdict"] == "ViolationsFound"


def test_measure_experiment(capsys):
    code, out, _ = call(capsys, "measure-experiment", "--N", "10", "20", "--seed", "1")
    data = json.loads(out)
    assert code == 0 and data["decay_ratios"][0] >= 1.8


def test_lmf_commands(capsys, tmp_path):
    code, out, _ = call(capsys, "lmf", "--template", "PosEpsGeneric", "--surgery", "EI", "--text")
    assert code == 0 and "E cEI E I SC" in out
    a = tmp_path / "a.lmf"
    a.write_text(out)
    code, out, _ = call(capsys, "lmf", "--template", "PosEpsEI", "--text")
    b = tmp_path / "b.lmf"
    b.write_text(out)
    code, out, _ = call(capsys, "lmf", "--isotopic", str(a), str(b))
    assert code == 0 and json.loads(out)["isotopic"] is True
    assert call(capsys, "lmf", "--validate", str(a))[0] == 0
    broken = tmp_path / "broken.lmf"
    broken.write_text("V c SP:saddle\nV d VLC\nE l d c LC\nR c l-\nR d l+\n")
    code, out, _ = call(capsys, "lmf", "--validate", str(broken))
    assert code == 4 and json.loads(out)["violations"]


@pytest.mark.slow
def test_compare_p0_p1(capsys):
    code, out, _ = call(capsys, "compare", "--family-a", "P0", "--family-b", "P1", "--depth", "30")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "WeaklyEquivalent" and data["shift"] == [1, 0]
