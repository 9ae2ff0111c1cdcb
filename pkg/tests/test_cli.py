import json

import numpy as np
import pytest

from conftest import sech
from mkdv_ist import io
from mkdv_ist.cli import EXIT_INPUT, EXIT_OK, main
from mkdv_ist.scattering import breather, reflectionless, soliton


@pytest.fixture
def soliton_csv(tmp_path):
    x = np.linspace(-20, 20, 4001)
    path = tmp_path / "u0.csv"
    io.save_profile(path, x, 2 * sech(2 * x))
    return path


def test_scatter(tmp_path, soliton_csv, capsys):
    out = tmp_path / "d.json"
    assert main(["scatter", "--input", str(soliton_csv), "--out", str(out)]) == EXIT_OK
    summary = json.loads(capsys.readouterr().out)
    assert summary["solitons"] == 1 and summary["generic"]
    d = io.load_scattering(out)
    assert abs(d.solitons[0].c - 2j) < 1e-6


def test_reconstruct_and_asymptote(tmp_path, capsys):
    data = tmp_path / "d.json"
    io.save_scattering(data, reflectionless([soliton(0.5, 1j), soliton(1.0, 2j)]))
    prof = tmp_path / "u.csv"
    args = ["--data", str(data), "--t", "30", "--xmin", "-10", "--xmax", "140", "--nx", "151"]
    assert main(["reconstruct", *args, "--out", str(prof)]) == EXIT_OK
    x, u = io.load_profile(prof)
    asym = tmp_path / "a.csv"
    assert main(["asymptote", *args, "--out", str(asym)]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert {p["region"] for p in report["regions"]} >= {"SolitonIII"}
    assert np.max(np.abs(io.load_profile(asym)[1] - u)) < 1e-6
    assert main(["asymptote", *args, "--frame", "soliton:1", "--out", str(asym)]) == EXIT_OK


def test_evolve_writes_log(tmp_path, soliton_csv):
    out = tmp_path / "uT.csv"
    rc = main(["evolve", "--input", str(soliton_csv), "--out", str(out), "--L", "40",
               "--N", "512", "--dt", "0.001", "--T", "0.01"])
    assert rc == EXIT_OK
    t, mass, _ = io.loads_csv((tmp_path / "uT.csv.conserved.csv").read_text(), ("t", "mass", "momentum"))
    assert t[0] == 0 and mass[-1] == pytest.approx(np.pi, rel=1e-8)


@pytest.mark.parametrize(
    "argv",
    [
        ["scatter", "--input", "/nonexistent.csv", "--out", "x.json"],
        ["scatter", "--out", "x.json"],
        ["evolve", "--input", "u.csv", "--out", "o.csv", "--dt", "-1"],
        ["verify", "--suite", "nonsense"],
    ],
)
def test_input_errors(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == EXIT_INPUT


def test_bad_frame_and_reflection(tmp_path):
    data = tmp_path / "d.json"
    io.save_scattering(data, reflectionless(breathers=[breather(1.0, 0.5, 1.0)]))
    out = str(tmp_path / "o.csv")
    assert main(["asymptote", "--data", str(data), "--t", "10", "--frame", "soliton:0", "--out", out]) == EXIT_INPUT
    assert main(["asymptote", "--data", str(data), "--t", "10", "--frame", "wave:0", "--out", out]) == EXIT_INPUT
    d = reflectionless(zmax=2.0, nz=8)
    io.save_scattering(data, type(d)(2.0, 0.1j * np.ones(8), (soliton(1.0, 1j),)))
    assert main(["reconstruct", "--data", str(data), "--out", out]) == EXIT_INPUT
    assert main(["reconstruct", "--data", str(data), "--out", out, "--discrete-only"]) == EXIT_OK


def test_verify_closed_forms(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert main(["verify", "--suite", "closed-forms", "--out", str(out)]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 4 and all(line.startswith("[PASS]") for line in lines)
    assert [r["id"] for r in json.loads(out.read_text())] == [1, 9, 10, 11]


def test_help_exits_cleanly():
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
