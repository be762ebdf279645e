import subprocess
import sys

import pytest

from copreg import __version__
from copreg.cli import dispatch, load_dataset


def run(tmp_path, *args):
    return dispatch([a if not a.startswith("@") else str(tmp_path / a[1:]) for a in args])


def test_simulate_row_count(tmp_path):
    assert run(tmp_path, "simulate", "--model", "m1", "--n", "100", "--sigma", "0.1", "--seed", "7", "--out", "@d.csv") == 0
    lines = (tmp_path / "d.csv").read_text().splitlines()
    assert lines[0] == "y,x1" and len(lines) == 101
    manifest = (tmp_path / "d.csv.manifest").read_text().splitlines()
    assert f"version={__version__}" in manifest and "seed=7" in manifest and "reps=1000" in manifest
    assert load_dataset(tmp_path / "d.csv").shape == (100, 2)


def test_fit_survival_clayton(tmp_path):
    run(tmp_path, "simulate", "--seed", "3", "--out", "@d.csv")
    assert run(tmp_path, "fit", "--family", "clayton@180", "--data", "@d.csv", "--out", "@f.csv") == 0
    row = (tmp_path / "f.csv").read_text().splitlines()[1].split(",")
    assert row[:2] == ["clayton", "180"]
    assert "family=clayton@180" in (tmp_path / "f.csv.manifest").read_text()


def test_rotation_flag(tmp_path):
    assert run(tmp_path, "fit", "--family", "gumbel", "--rotation", "90", "--out", "@f.csv") == 0
    assert (tmp_path / "f.csv").read_text().splitlines()[1].startswith("gumbel,90,")


def test_unknown_family(tmp_path, capsys):
    assert run(tmp_path, "fit", "--family", "nosuch", "--out", "@f.csv") == 2
    err = capsys.readouterr().err
    assert "clayton" in err and "gaussmix2" in err
    assert not (tmp_path / "f.csv").exists()


@pytest.mark.parametrize(
    "args",
    [
        ("simulate", "--model", "m9", "--out", "@x.csv"),
        ("simulate", "--n", "ten", "--out", "@x.csv"),
        ("simulate",),
        ("fit", "--fit", "l3", "--out", "@x.csv"),
        ("fit", "--data", "@missing.csv", "--out", "@x.csv"),
        ("vine", "--model", "m1", "--out", "@x.csv"),
        ("frobnicate",),
    ],
)
def test_config_errors(tmp_path, args):
    assert run(tmp_path, *args) == 2


def test_empty_and_malformed_data(tmp_path, capsys):
    (tmp_path / "e.csv").write_text("")
    assert run(tmp_path, "fit", "--data", "@e.csv", "--out", "@x.csv") == 2
    (tmp_path / "m.csv").write_text("y,x1\n1,2\n3\n")
    assert run(tmp_path, "fit", "--data", "@m.csv", "--out", "@x.csv") == 2
    assert ":3:" in capsys.readouterr().err


def test_numeric_failure_exit_code(tmp_path, monkeypatch):
    import copreg.cli as cli
    from copreg.errors import NumericError

    def boom(cfg, out):
        raise NumericError("did not converge")

    monkeypatch.setitem(cli._HANDLERS, "fit", boom)
    assert run(tmp_path, "fit", "--out", "@x.csv") == 3


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep settings\nmodel = m2\nn=40\nseed=5\n")
    assert run(tmp_path, "simulate", "--config", str(cfg), "--seed", "9", "--out", "@d.csv") == 0
    manifest = (tmp_path / "d.csv.manifest").read_text().splitlines()
    assert {"model=m2", "n=40", "seed=9"} <= set(manifest)
    (tmp_path / "bad.cfg").write_text("colour=blue\n")
    assert run(tmp_path, "simulate", "--config", "@bad.cfg", "--out", "@d.csv") == 2


@pytest.mark.parametrize(
    "cmd",
    [
        ("regress", "--model", "m1", "--family", "joe", "--grid", "5"),
        ("regress", "--model", "m3", "--family", "vine", "--candidates", "indep,gaussian,clayton", "--grid", "3"),
        ("regress", "--model", "m2", "--family", "auto-aic", "--fit", "l2", "--candidates", "frank,gaussian"),
        ("vine", "--model", "m5", "--candidates", "indep,gaussian,frank"),
        ("mse", "--model", "m2", "--family", "frank", "--reps", "6", "--grid", "5"),
        ("contour", "--model", "m2", "--n", "10000", "--grid", "6"),
        ("fit", "--family", "auto-aic", "--candidates", "indep,clayton,gumbel@180"),
    ],
)
def test_commands_run_and_are_reproducible(tmp_path, cmd):
    assert run(tmp_path, *cmd, "--out", "@a.out") == 0
    assert run(tmp_path, *cmd, "--out", "@b.out") == 0
    assert (tmp_path / "a.out").read_bytes() == (tmp_path / "b.out").read_bytes()
    assert (tmp_path / "a.out.manifest").exists()


def test_regress_columns(tmp_path):
    run(tmp_path, "regress", "--model", "m1", "--family", "frank", "--grid", "3", "--out", "@r.csv")
    lines = (tmp_path / "r.csv").read_text().splitlines()
    assert lines[0] == "x,m_hat,extrapolated" and lines[1].endswith(",true")


def test_mse_workers_identical(tmp_path):
    base = ("mse", "--model", "m1", "--family", "clayton@180", "--reps", "8", "--grid", "5")
    run(tmp_path, *base, "--workers", "1", "--out", "@w1.csv")
    run(tmp_path, *base, "--workers", "4", "--out", "@w4.csv")
    assert (tmp_path / "w1.csv").read_bytes() == (tmp_path / "w4.csv").read_bytes()


def test_vine_text(tmp_path):
    run(tmp_path, "vine", "--model", "m3", "--candidates", "indep,gaussian", "--out", "@v.txt")
    lines = (tmp_path / "v.txt").read_text().splitlines()
    assert lines[0].startswith("center ") and len(lines) == 4


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "copreg.cli", "fit", "--family", "nosuch", "--out", str(tmp_path / "x")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2 and "valid names" in proc.stderr
