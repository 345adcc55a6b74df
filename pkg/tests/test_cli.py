import csv
import json
from pathlib import Path

import numpy as np
import pytest

from b2p1 import io
from b2p1.cli import main

ROOT = Path(__file__).resolve().parents[1]

SMALL = """\
[grid]
nx = 32
ny = 32
Lx = 20.0
Ly = 20.0

[params]
alpha = 0.1
beta = 0.1
gamma = 0.1
delta = 0.1

[regime]
case = {case}
formulation = {formulation}

[bathymetry]
kind = tent
amp = 0.3

[initial]
kind = {initial}
amp = 0.2
width = 2.0
modes = 1:0:0.5:0.0:1, 0:1:0.3:0.4:1

[time]
dt = 0.05
t_end = 0.5
snapshot_every = 5

[potential]
M = 1
"""


def _cfg(tmp_path, case="1", formulation="pair", initial="gaussian"):
    p = tmp_path / "run.cfg"
    p.write_text(SMALL.format(case=case, formulation=formulation, initial=initial))
    return str(p)


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


@pytest.mark.parametrize("case,formulation", [("1", "pair"), ("2", "pair"), ("3st", "pair"),
                                              ("4", "pair"), ("1", "scalar"), ("3", "scalar")])
def test_simulate(tmp_path, case, formulation):
    out = tmp_path / "out"
    assert main(["simulate", "--config", _cfg(tmp_path, case, formulation), "--out", str(out)]) == 0
    rows = _rows(out / "diagnostics.csv")
    assert rows[0] == ["t", "mass", "l2_eta", "linf_eta", "tail_fraction"]
    assert len(rows) == 12
    snaps = sorted(out.glob("snap_*.b2p1"))
    assert len(snaps) == 3
    eta, f, meta = io.read_snapshot(snaps[-1].read_bytes())
    assert eta.shape == (32, 32) and meta["t"] == pytest.approx(0.5)
    man = json.loads((out / "run.manifest").read_text())
    assert man["subcommand"] == "simulate" and len(man["input_hash"]) == 40


def test_simulate_case2_scalar_is_refused(tmp_path, capsys):
    code = main(["simulate", "--config", _cfg(tmp_path, "2", "scalar"), "--out", str(tmp_path)])
    assert code != 0
    assert "error [" in capsys.readouterr().err


def test_residual(tmp_path):
    assert main(["residual", "--config", _cfg(tmp_path, initial="plane-wave"),
                 "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "residual.csv")[1:]
    assert len(rows) == 16
    for case, form, terms, mx, _ in rows:
        if terms == "linear":
            assert float(mx) < 1e-12


def test_perturb(tmp_path):
    assert main(["perturb", "--config", str(ROOT / "configs" / "perturb.cfg"),
                 "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "corrections.csv")[1:]
    assert all(float(r[3]) < 1e-12 for r in rows)
    ratio = float(_rows(tmp_path / "perturb.csv")[1][3])
    assert ratio < 0.2
    io.read_snapshot((tmp_path / "perturb_eta.b2p1").read_bytes())


def test_reduce_check(tmp_path):
    text = SMALL.format(case="2", formulation="pair", initial="soliton-line")
    text = text.replace("ny = 32", "ny = 16")
    p = tmp_path / "r.cfg"
    p.write_text(text)
    assert main(["reduce-check", "--config", str(p), "--out", str(tmp_path)]) == 0
    row = _rows(tmp_path / "reduce_check.csv")[1]
    assert row[1] == "1" and float(row[3]) < 1e-12


def test_potential(tmp_path):
    assert main(["potential", "--config", _cfg(tmp_path), "--out", str(tmp_path)]) == 0
    assert len(_rows(tmp_path / "potential_laplace.csv")) == 6
    assert float(_rows(tmp_path / "potential_bottom.csv")[1][0]) >= 0


def test_derive(tmp_path, capsys):
    assert main(["derive", "--case", "1", "--diff-printed", "--out", str(tmp_path)]) == 0
    assert "(empty diff)" in capsys.readouterr().out
    assert main(["derive", "--case", "4", "--diff-printed", "--out", str(tmp_path)]) == 0
    assert len(_rows(tmp_path / "derive_diff.csv")) == 7


def test_derive_needs_case(capsys):
    assert main(["derive"]) == 2


def test_soliton_demo_kdv(tmp_path, capsys):
    assert main(["soliton-demo", "--case", "kdv", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "soliton.csv")
    assert rows[0] == ["t", "crest", "shape_drift"]
    assert float(rows[-1][0]) == pytest.approx(10.0)
    assert float(rows[-1][2]) < 0.01


def test_sweep_is_byte_deterministic(tmp_path, monkeypatch):
    p = tmp_path / "s.cfg"
    p.write_text(SMALL.format(case="1", formulation="pair", initial="gaussian")
                 + "\n[sweep]\nquantity = surface-tension\neps = 0.2, 0.1, 0.05\n")
    monkeypatch.setenv("B2P1_THREADS", "3")
    assert main(["sweep", "--config", str(p), "--out", str(tmp_path / "a")]) == 0
    monkeypatch.setenv("B2P1_THREADS", "1")
    assert main(["sweep", "--config", str(p), "--out", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / "sweep.csv").read_bytes()
    assert a == (tmp_path / "b" / "sweep.csv").read_bytes()
    fit = _rows(tmp_path / "a" / "sweep.csv")[-1]
    assert fit[0] == "fit" and abs(float(fit[2]) - 2.0) < 0.2


def test_config_error_exit(tmp_path, capsys):
    p = tmp_path / "bad.cfg"
    p.write_text("[grid]\nnx = 32\nwidth = 3\n")
    assert main(["simulate", "--config", str(p)]) == 2
    assert "line 3" in capsys.readouterr().err


def test_missing_config(capsys):
    assert main(["simulate"]) == 2


@pytest.mark.parametrize("name", ["simulate.cfg", "perturb.cfg", "sweep.cfg", "reduce.cfg"])
def test_shipped_configs_parse(name):
    io.load_config(ROOT / "configs" / name)
