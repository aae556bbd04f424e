import csv
import io
import math
import shutil
import subprocess
import sys
import textwrap

import pytest

from obsmix import __version__
from obsmix.cli import SUBCOMMANDS, main, preset_names

SMALL_EVOLVE = """
[run]
seed = 3

[lattice]
L_A = 3
L_B = 2
N_plus = 2
N_minus = 1

[evolve]
t_max = 4.0
n_times = 9
init_mode = haar
"""

SMALL_SCAN = """
[scan]
ladder = explicit
points = 3 3 2 2; 2 2 2 2; 3 2 3 2
"""

SMALL_LIFT = """
[lift]
L = 3
N = 2
L_A = 1
n_unitaries = 4
fiber_seeds = 0 1
lemma_samples = 20
"""


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(textwrap.dedent(text))
    return str(p)


def run(argv, tmp_path, name="out.csv"):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    text = out.read_text() if out.exists() else ""
    return code, text


def table(text):
    body = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def meta(text):
    return [l[2:] for l in text.splitlines() if l.startswith("# ")]


def test_presets_listed(capsys):
    assert main(["volumes", "--list-presets"]) == 0
    listed = capsys.readouterr().out.split()
    assert listed == preset_names()
    assert {"fig2-volumes", "fig3-symmetric", "fig4-desk", "table1", "lift-default"} <= set(listed)


def test_volumes_default_preset(tmp_path):
    code, text = run(["volumes"], tmp_path)
    assert code == 0
    rows = table(text)
    first = rows[0]
    assert first["observer"] == "rick"
    assert math.exp(float(first["ln_V_exact"])) == pytest.approx(100)
    # the overflowing label is reported in-row, the run continues
    assert rows[-1]["error"] and rows[-1]["ln_V_exact"] == "nan"
    assert any(l.startswith(f"obsmix {__version__} volumes") for l in meta(text))
    assert "config source = preset:fig2-volumes" in meta(text)


def test_gas_table(tmp_path):
    code, text = run(["gas-table", "--preset", "table1"], tmp_path)
    assert code == 0
    rows = {r["model"]: r for r in table(text)}
    assert float(rows["ideal"]["bracket"]) == pytest.approx(0.8046, abs=5e-4)
    for r in rows.values():
        assert float(r["bracket"]) == pytest.approx(float(r["bracket_general"]), rel=1e-12)


def test_static_scan_explicit(tmp_path):
    cfg = write(tmp_path, "scan.ini", SMALL_SCAN)
    code, text = run(["static-scan", "--config", cfg, "--threads", "2"], tmp_path)
    assert code == 0
    rows = table(text)
    assert [(r["L_A"], r["L_B"]) for r in rows] == [("3", "3"), ("2", "2"), ("3", "2")]
    assert rows[1]["error"]
    assert float(rows[0]["dW_exact"]) > 0
    assert "[run] threads = 2" in meta(text)


def test_evolve_is_deterministic(tmp_path):
    cfg = write(tmp_path, "ev.ini", SMALL_EVOLVE)
    a = run(["evolve", "--config", cfg], tmp_path, "a.csv")
    b = run(["evolve", "--config", cfg], tmp_path, "b.csv")
    assert a[0] == b[0] == 0
    assert a[1] == b[1]
    rows = table(a[1])
    assert len(rows) == 9
    assert "meta S_init" in "\n".join(meta(a[1]))
    c = run(["evolve", "--config", cfg, "--seed", "4"], tmp_path, "c.csv")
    assert table(c[1])[3]["S_rick"] != rows[3]["S_rick"]


def test_threads_from_environment(tmp_path, monkeypatch):
    cfg = write(tmp_path, "scan.ini", SMALL_SCAN)
    monkeypatch.setenv("OBSMIX_THREADS", "3")
    code, text = run(["static-scan", "--config", cfg], tmp_path)
    assert code == 0 and "[run] threads = 3" in meta(text)
    monkeypatch.setenv("OBSMIX_THREADS", "many")
    assert run(["static-scan", "--config", cfg], tmp_path)[0] == 2


def test_verify_lift_small(tmp_path):
    cfg = write(tmp_path, "lift.ini", SMALL_LIFT)
    code, text = run(["verify-lift", "--config", cfg], tmp_path)
    assert code == 0
    rows = {r["check"]: r for r in table(text)}
    assert rows["work equality"]["passed"] == "1"
    assert rows["negative control (colour field on site 0)"]["passed"] == "1"


def test_verify_lift_failure_exit_code(tmp_path):
    # a zero-strength control perturbs nothing, so the control is not caught
    cfg = write(tmp_path, "lift.ini", SMALL_LIFT + "control_eps = 0.0\n")
    code, text = run(["verify-lift", "--config", cfg], tmp_path)
    assert code == 4
    assert "# meta all_passed = 0" in text


def test_selftest(tmp_path):
    code, text = run(["selftest"], tmp_path)
    assert code == 0
    assert all(r["passed"] == "1" for r in table(text))


@pytest.mark.parametrize(
    "argv,body",
    [
        (["static-scan", "--config", "{cfg}"], "[scan]\nladder = spiral\nsizes = 6\n"),
        (["static-scan", "--config", "{cfg}"], "[scan]\nsizes = 7\n"),
        (["evolve", "--config", "{cfg}"], "[lattice]\nL_A = 3\n"),
        (["evolve", "--config", "{cfg}"], "[lattice]\nL_A = x\nL_B = 2\nN_plus = 1\nN_minus = 1\n"),
        (["evolve", "--preset", "nope"], None),
        (["evolve", "--seed", "-1"], None),
        (["evolve", "--threads", "0"], None),
        (["volumes", "--config", "{cfg}"], "[volumes]\nrows = wizard 1 1 1\n"),
        (["gas-table", "--config", "{cfg}"], "[gas]\nmodels = plasma\n"),
        (["evolve", "--config", "/nonexistent/file.ini"], None),
    ],
)
def test_config_errors_exit_2(tmp_path, argv, body, capsys):
    cfg = write(tmp_path, "bad.ini", body) if body else ""
    code, _ = run([a.format(cfg=cfg) for a in argv], tmp_path)
    assert code == 2
    assert "obsmix: error" in capsys.readouterr().err


@pytest.mark.parametrize(
    "sub,body",
    [
        ("evolve", "[lattice]\nL_A = 2\nL_B = 1\nN_plus = 4\nN_minus = 0\n"),
        ("gas-table", "[gas]\nmodels = liquid-helium\n[gas.liquid-helium]\nT = 2.0\nT_c = 2.17\nA = 1\nB = 1\nalpha = 0.1\n"),
        ("gas-table", "[gas]\nmodels = debye-low-T\n"),
    ],
)
def test_domain_errors_exit_3(tmp_path, sub, body):
    cfg = write(tmp_path, "dom.ini", body)
    assert run([sub, "--config", cfg], tmp_path)[0] == 3


def test_config_and_preset_are_exclusive(tmp_path):
    cfg = write(tmp_path, "a.ini", SMALL_EVOLVE)
    assert run(["evolve", "--config", cfg, "--preset", "fig4-desk"], tmp_path)[0] == 2


def test_every_subcommand_has_help():
    for name in SUBCOMMANDS:
        with pytest.raises(SystemExit) as exc:
            main([name, "--help"])
        assert exc.value.code == 0


def test_stdout_and_console_script(tmp_path):
    exe = shutil.which("obsmix")
    cmd = [exe] if exe else [sys.executable, "-m", "obsmix.cli"]
    res = subprocess.run(cmd + ["gas-table"], capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.startswith(f"# obsmix {__version__} gas-table")
