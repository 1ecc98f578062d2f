import json
import subprocess
import sys

import pytest

from ptspectra.cli import main


def _write(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return p


def test_validate_ok(tmp_path, capsys):
    p = _write(tmp_path, {"n": [1], "g": 1, "L": [1], "tasks": ["spectrum"]})
    assert main(["validate", str(p)]) == 0
    assert capsys.readouterr().out.startswith("ok ")


def test_validate_reports_pointer(tmp_path, capsys):
    p = _write(tmp_path, {"n": [1], "g": 1, "L": [3, 2], "tasks": ["spectrum"]})
    assert main(["validate", str(p)]) == 2
    assert "/L/1" in capsys.readouterr().err


def test_malformed_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["validate", str(p)]) == 2


def test_spectrum_command(capsys):
    assert main(["spectrum", "-n", "1", "-L", "1", "--count", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("n,g,L,hbar,j")
    assert len(lines) >= 5


def test_linear_exact_command(capsys):
    assert main(["linear-exact", "-L", "3", "--count", "6"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 7


def test_scaling_graph_range(capsys):
    assert main(["scaling-graph", "-n", "0..1"]) == 0
    out = capsys.readouterr().out
    assert out.count("tau_c,E_c") == 2


def test_stokes_command(capsys):
    assert main(["stokes", "-n", "1", "--emapped", "0.3-0.4i"]) == 0
    assert capsys.readouterr().out


def test_stokes_zero_energy_is_bad_input():
    assert main(["stokes", "-n", "1", "--emapped", "0"]) == 2


def test_run_and_figures(tmp_path, capsys):
    cfg = _write(tmp_path, {"n": [0, 1], "g": 1, "L": [1.0], "tasks": ["scaling_graph"],
                            "output_dir": str(tmp_path / "out")})
    assert main(["run", str(cfg), "--figures", "fig3a"]) == 0
    assert (tmp_path / "out" / "bundle.json").exists()
    assert (tmp_path / "out" / "fig3a.svg").exists()
    assert main(["figures", str(tmp_path / "out" / "bundle.json"), "--which", "fig1a"]) == 3


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "ptspectra", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "scaling-graph" in out.stdout
