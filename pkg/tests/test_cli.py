import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from malevich import bounds, cli
from malevich.formats import matrix_to_json
from malevich.qutrit import pure_qutrit

HI = (3 + math.sqrt(3)) / 6


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def write_matrix(tmp_path, m, name="m.json"):
    path = tmp_path / name
    path.write_text(json.dumps(matrix_to_json(m)))
    return str(path)


# --- qubit ----------------------------------------------------------------


def test_qubit_center(capsys):
    r = run_json(capsys, "qubit", "--p", "0.5,0.5,0.5")
    assert r["S"] == 1.5 and r["S_L"] == 0.5 and r["class"] == "mixed"
    assert r["density_matrix"] == {"dim": 2, "re": [0.5, 0.0, 0.0, 0.5], "im": [0.0, 0.0, 0.0, 0.0]}


def test_qubit_outside_ball(capsys):
    r = run_json(capsys, "qubit", "--p", "1,1,1")
    assert r["quantumness_residual"] == 0.5 and r["not_positive"] is True
    code, _, err = run(capsys, "qubit", "--p", "1,1,1", "--strict")
    assert code == 3 and "quantum ball" in err


def test_qubit_global_max(capsys):
    r = run_json(capsys, "qubit", "--p", "0.7886751,0.7886751,0.7886751")
    assert r["S"] == pytest.approx(3, abs=1e-6) and r["class"] == "global_max"
    r = run_json(capsys, "qubit", "--p", "0.7886751,0.7886751,0.7886751", "--class-tol", "1e-9")
    assert r["class"] == "mixed"


@pytest.mark.parametrize("p", ["a,b,c", "0.5,0.5", "1.5,0,0", "0.5,nan,0.5"])
def test_qubit_parse_errors(capsys, p):
    assert run(capsys, "qubit", "--p", p)[0] == 2


def test_qubit_csv(capsys):
    code, out, _ = run(capsys, "qubit", "--p", "0.5,0.5,0.5", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "# malevich-qstate v1 qubit" and lines[1] == "key,value"
    table = dict(csv.reader(io.StringIO("\n".join(lines[2:]))))
    assert table["S"] == "1.5" and table["class"] == "mixed" and table["not_positive"] == "false"


# --- qutrit ---------------------------------------------------------------


def test_qutrit_maximally_mixed(capsys, tmp_path):
    # B, C, D all have p1 = p2 = 1/2 with p3 = 2/3, 1/3, 1/3, and
    # S(1/2, 1/2, p3) = 4 p3^2 - 4 p3 + 5/2 = 29/18 at both populations
    r = run_json(capsys, "qutrit", "--matrix", write_matrix(tmp_path, np.eye(3) / 3))
    assert r["S_total"] == pytest.approx(3 * 29 / 18, abs=1e-12)


def test_qutrit_half_diagonal(capsys, tmp_path):
    r = run_json(capsys, "qutrit", "--matrix", write_matrix(tmp_path, np.diag([0.5, 0.5, 0])))
    assert r["S_total"] == pytest.approx(4.5, abs=1e-12)
    assert r["S_L"] == pytest.approx(0.5, abs=1e-12)
    assert r["S_L_from_qubits"] == pytest.approx(0.5, abs=1e-12)


def test_qutrit_appendix_state(capsys, tmp_path):
    R = pure_qutrit(bounds.APPENDIX_ARGMAX)
    r = run_json(capsys, "qutrit", "--matrix", write_matrix(tmp_path, R))
    assert r["S_total"] == pytest.approx(8.1565, abs=1e-3)


def test_qutrit_abd_input(capsys):
    r = run_json(capsys, "qutrit", "--abd", "0.5,0.5,0.5,0.5,0.5,0.5,0.5,0.5")
    # rebuilds diag(0, 1/2, 1/2): B and D sit at the center, C at p3 = 0
    assert r["components"]["C"][2] == pytest.approx(0.0)
    assert r["S_total"] == pytest.approx(1.5 + 2.5 + 1.5, abs=1e-12)


def test_qutrit_errors(capsys, tmp_path):
    assert run(capsys, "qutrit", "--matrix", write_matrix(tmp_path, np.diag([1.2, -0.2, 0])))[0] == 3
    assert run(capsys, "qutrit", "--abd", "1,1,0.5,0.5,0.5,0.5,0.5,0.5")[0] == 3
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "qutrit", "--matrix", str(bad))[0] == 2
    short = tmp_path / "short.json"
    short.write_text(json.dumps({"dim": 3, "re": [1, 0], "im": [0, 0]}))
    assert run(capsys, "qutrit", "--matrix", str(short))[0] == 2
    assert run(capsys, "qutrit", "--matrix", write_matrix(tmp_path, np.eye(2) / 2))[0] == 2
    assert run(capsys, "qutrit", "--matrix", str(tmp_path / "missing.json"))[0] == 6


# --- twoqubit -------------------------------------------------------------


def test_twoqubit_center_entangled(capsys):
    r = run_json(capsys, "twoqubit", "--family", "center", "--p", "0.75,0.5,0.5")
    assert r["negativity"] == pytest.approx(0.25, abs=1e-12)
    assert r["concurrence"] == pytest.approx(0.5, abs=1e-9)
    assert r["ppt_verdict"] == "entangled" and r["physical"] is True


def test_twoqubit_center_separable(capsys):
    r = run_json(capsys, "twoqubit", "--family", "center", "--p", "0.5,0.5,0.3")
    assert r["negativity"] == pytest.approx(0, abs=1e-14)
    assert r["ppt_verdict"] == "separable_by_ppt"
    assert r["area_witness"] == "inconclusive"


def test_twoqubit_embed1_without_d(capsys, tmp_path):
    R = np.array([[0.4, 0.1, 0.05j], [0.1, 0.3, 0], [-0.05j, 0, 0.3]])
    r = run_json(capsys, "twoqubit", "--family", "embed1", "--qutrit", write_matrix(tmp_path, R))
    assert r["concurrence"] == pytest.approx(0, abs=1e-9)
    assert r["concurrence_closed_form"] == 0
    assert min(r["pt_eigenvalues"]) >= -1e-10


def test_twoqubit_unphysical(capsys):
    code, _, err = run(capsys, "twoqubit", "--family", "corner", "--p", "1,1,0.5")
    assert code == 4
    r = run_json(capsys, "twoqubit", "--family", "corner", "--p", "1,1,0.5", "--allow-unphysical")
    assert r["physical"] is False and r["concurrence_closed_form"] == pytest.approx(math.sqrt(2))


def test_twoqubit_unphysical_abd(capsys):
    argv = ("twoqubit", "--family", "embed2", "--abd", "1,0.5,0.6,1,1,0.6,0.5,0.5")
    assert run(capsys, *argv)[0] == 4
    assert run_json(capsys, *argv, "--allow-unphysical")["physical"] is False


def test_twoqubit_missing_input(capsys):
    assert run(capsys, "twoqubit", "--family", "center")[0] == 2
    assert run(capsys, "twoqubit", "--family", "embed3")[0] == 2


# --- bounds ---------------------------------------------------------------


def test_bounds_qubit_min(capsys):
    r = run_json(capsys, "bounds", "--problem", "qubit_area", "--sense", "min")
    assert r["extremum_value"] == pytest.approx(1.5, abs=1e-9)
    assert r["within_tolerance"] is True


def test_bounds_regression_exit(capsys, monkeypatch):
    real = bounds.reproduce_bound

    def off(problem, seed=42, sense="max"):
        return real(problem, seed=seed, sense=sense)._replace(extremum_value=2.9)

    monkeypatch.setattr(bounds, "reproduce_bound", off)
    code, out, err = run(capsys, "bounds", "--problem", "qubit_area", "--sense", "min")
    assert code == 5 and "misses" in err
    assert json.loads(out)["within_tolerance"] is False


# --- scan -----------------------------------------------------------------


def test_scan_fig4a(capsys):
    code, out, _ = run(capsys, "scan", "--target", "concurrence_fig4a", "--resolution", "3")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "# malevich-qstate v1 scan concurrence_fig4a"
    assert lines[1] == "p1,p2,value,physical"
    assert len(lines) == 2 + 9
    assert lines[2 + 4] == "0.5,0.5,0,true"


def test_scan_is_byte_identical(tmp_path):
    paths = [tmp_path / f"run{k}.csv" for k in range(2)]
    for p in paths:
        assert cli.main(["scan", "--target", "logneg_fig4b", "--resolution", "15", "--out", str(p)]) == 0
    a, b = (p.read_bytes() for p in paths)
    assert a == b and b"\r" not in a


def test_scan_fig4b_columns(tmp_path):
    out = tmp_path / "b.csv"
    cli.main(["scan", "--target", "logneg_fig4b", "--resolution", "11", "--out", str(out)])
    rows = list(csv.DictReader(io.StringIO(out.read_text().split("\n", 1)[1])))
    assert len(rows) == 121
    for row in rows:
        assert float(row["value"]) == pytest.approx(math.log(2 * float(row["negativity"]) + 1), abs=1e-11)


def test_scan_fig6_negative_branch(capsys):
    code, out, _ = run(capsys, "scan", "--target", "coherent_fig6", "--resolution", "11", "--jx-sign", "-")
    rows = list(csv.DictReader(io.StringIO(out.split("\n", 1)[1])))
    assert code == 0 and rows
    assert all(4.5 - 1e-9 <= float(r["S_total"]) <= 8.10 for r in rows)


def test_scan_unwritable(capsys, tmp_path):
    target = tmp_path / "no" / "such" / "dir.csv"
    assert run(capsys, "scan", "--target", "concurrence_fig4a", "--resolution", "3", "--out", str(target))[0] == 6


def test_scan_bad_resolution(capsys):
    assert run(capsys, "scan", "--target", "concurrence_fig4a", "--resolution", "1")[0] == 2


def test_argparse_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["scan", "--target", "nope"])
    assert info.value.code == 2


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "malevich", "qubit", "--p", "0.5,0.5,0.5", "--format", "csv"],
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.startswith("# malevich-qstate v1 qubit\n")
