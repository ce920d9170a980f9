import csv
import json
import math
import subprocess
import sys

import pytest

from harmapprox.cli import KEY_TYPES, RunConfig, main, read_config

DOCUMENTED_KEYS = {"omega", "phi", "K", "m", "N", "M", "r_max", "grid_r", "grid_theta", "seed", "out", "threads"}


@pytest.fixture(autouse=True)
def in_tmp(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def read_rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


# -- approx -----------------------------------------------------------------


def test_approx_flat_step(in_tmp, capsys):
    code = main(["approx", "--omega", "1.0472", "--phi", "flat-step", "--m", "4,8,16,32,64", "--out", "report.csv"])
    out = capsys.readouterr().out
    assert code == 0
    rows = read_rows(in_tmp / "report.csv")
    assert [int(r["m"]) for r in rows] == [4, 8, 16, 32, 64]
    assert json.loads((in_tmp / "report.json").read_text())[0]["m"] == 4
    assert "PASS strict-monotonicity" in out and "FAIL" not in out


def test_approx_identity(in_tmp):
    assert main(["approx", "--phi", "identity", "--m", "4"]) == 0
    rows = read_rows(in_tmp / "report.csv")
    assert len(rows) == 1 and float(rows[0]["sup_err"]) == 0.0


def test_approx_bad_omega(capsys):
    assert main(["approx", "--omega", "2.0"]) != 0
    assert "omega must lie in (0, pi/2)" in capsys.readouterr().err


def test_approx_deterministic(in_tmp):
    args = ["approx", "--phi", "multi-flat", "--m", "4,16,64", "--seed", "7"]
    assert main(args + ["--out", "a.csv"]) == 0
    assert main(args + ["--out", "b.csv", "--threads", "3"]) == 0
    assert (in_tmp / "a.csv").read_bytes() == (in_tmp / "b.csv").read_bytes()


def test_approx_from_files(in_tmp):
    w = math.pi / 3
    (in_tmp / "phi.txt").write_text(f"# theta,phi\n{-w!r},{-w!r}\n0.0,{-w!r}\n{w!r},{w!r}\n")
    (in_tmp / "K.txt").write_text(f"{0.2 * w!r},{0.8 * w!r}\n")
    assert main(["approx", "--phi", "phi.txt", "--K", "K.txt", "--m", "4,8", "--out", "r.csv"]) == 0
    assert len(read_rows(in_tmp / "r.csv")) == 2


# -- config files -----------------------------------------------------------


def test_config_keys_cover_documented_keys():
    assert DOCUMENTED_KEYS <= set(KEY_TYPES)


def test_config_file_and_override(in_tmp):
    (in_tmp / "run.cfg").write_text("# demo\nphi = identity   # preset\nm = 4,8\nout = cfg.csv\n")
    assert read_config(in_tmp / "run.cfg") == {"phi": "identity", "m": "4,8", "out": "cfg.csv"}
    assert main(["approx", "--config", "run.cfg", "--m", "4"]) == 0
    assert len(read_rows(in_tmp / "cfg.csv")) == 1


def test_unknown_config_key(in_tmp, capsys):
    (in_tmp / "bad.cfg").write_text("omega = 1.0\ncolour = red\n")
    assert main(["approx", "--config", "bad.cfg"]) == 2
    err = capsys.readouterr().err
    assert "line 2" in err and "colour" in err


def test_unparseable_value(in_tmp, capsys):
    (in_tmp / "bad.cfg").write_text("N = many\n")
    assert main(["rkc", "--config", "bad.cfg"]) == 2
    err = capsys.readouterr().err
    assert "line 1" in err and "'N'" in err


def test_defaults_documented():
    cfg = RunConfig()
    assert cfg.omega == pytest.approx(math.pi / 3) and cfg.phi == "flat-step" and cfg.N == 512


# -- douglas ----------------------------------------------------------------


@pytest.mark.parametrize("name, value", [(None, 2 * math.pi), ("z2", 4 * math.pi), ("2x", 4 * math.pi)])
def test_douglas_closed_forms(capsys, name, value):
    argv = ["douglas", "--N", "16"] + ([] if name is None else ["--map", name])
    assert main(argv) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["dirichlet_fourier"] == pytest.approx(value, abs=1e-6)
    assert rep["douglas"] == pytest.approx(value, abs=1e-6)


def test_douglas_fixture_passes(capsys):
    assert main(["douglas", "--map", "flat-step"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["residual_fd_douglas"] <= 1e-4


def test_douglas_residual_fault(capsys):
    assert main(["douglas", "--map", "flat-step", "--N", "2"]) == 1
    assert "FAIL residuals" in capsys.readouterr().err


# -- chordarc ---------------------------------------------------------------


def test_chordarc_disk(in_tmp, capsys):
    assert main(["chordarc", "--domain", "disk", "--family", "diameter", "--out", "p.csv"]) == 0
    ratios = [float(r["ratio"]) for r in read_rows(in_tmp / "p.csv")]
    assert len(ratios) == 100
    assert max(ratios) == pytest.approx(math.pi / 2, rel=1e-6)
    assert "no violation found up to ratio" in capsys.readouterr().err


def test_chordarc_spiral_reproducible(in_tmp):
    assert main(["chordarc", "--domain", "spiral", "--seed", "4", "--out", "a.csv"]) == 0
    assert main(["chordarc", "--domain", "spiral", "--seed", "4", "--out", "b.csv"]) == 0
    assert (in_tmp / "a.csv").read_bytes() == (in_tmp / "b.csv").read_bytes()


def test_chordarc_gradients(capsys):
    assert main(["chordarc", "--domain", "cusp", "--probes", "5", "--gradients", "--out", "c.csv"]) == 0
    err = capsys.readouterr().err
    assert "spiral: |F_w| = 2.236067977" in err and "|F_wbar| = 2.000000000" in err
    assert "cusp: |F_w| = 1.500000000" in err and "J = 2.000000000" in err


def test_chordarc_polyline_file(in_tmp):
    (in_tmp / "square.txt").write_text("0,0\n1,0\n1,1\n0,1\n")
    assert main(["chordarc", "--domain", "square.txt", "--probes", "10", "--out", "s.csv"]) == 0
    assert max(float(r["ratio"]) for r in read_rows(in_tmp / "s.csv")) <= math.sqrt(2) + 1e-12


# -- rkc --------------------------------------------------------------------


def test_rkc_fixture(capsys):
    assert main(["rkc"]) == 0
    assert capsys.readouterr().out.startswith("min J = ")


def test_rkc_conjugate(capsys):
    assert main(["rkc", "--map", "zbar", "--N", "8"]) == 1
    assert "min J = -1.0" in capsys.readouterr().out


def test_rkc_malformed_phi(in_tmp, capsys):
    (in_tmp / "phi.txt").write_text("-1.0471975511965976,-1.0471975511965976\n0.1 0.2\n")
    assert main(["rkc", "--phi", "phi.txt"]) == 2
    assert "line 2" in capsys.readouterr().err


def test_missing_file(capsys):
    assert main(["rkc", "--phi", "nope.txt"]) == 2
    assert "error:" in capsys.readouterr().err


def test_module_entry_point(in_tmp):
    res = subprocess.run([sys.executable, "-m", "harmapprox", "rkc", "--map", "identity", "--N", "8"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "min J = 1.0" in res.stdout
