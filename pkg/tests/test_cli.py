import csv
import io
import json
import subprocess
import sys

import pytest

from zeroshift.cli import main, parse_range
from zeroshift.codes import loads_code
from zeroshift.core import to_simplex


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def shift_code_file(tmp_path, capsys):
    path = tmp_path / "shift.code"
    code, _, _ = run(capsys, "construct", "--channel", "shift", "--P", "1", "--K", "1",
                     "--n", "9", "--W", "2", "-o", str(path))
    assert code == 0
    return path


# -- capacity ----------------------------------------------------------------------


def test_capacity_shift_golden(capsys):
    code, out, _ = run(capsys, "capacity", "--channel", "shift", "--P", "1", "--K", "1")
    assert code == 0
    (row,) = csv_rows(out)
    assert row["capacity"] == "0.694242"
    assert row["r"] == "1.618034"
    assert row["w_opt"] == "0.447214"


def test_capacity_shift_noiseless(capsys):
    _, out, _ = run(capsys, "capacity", "--channel", "shift", "--P", "2", "--K", "0")
    assert csv_rows(out)[0]["capacity"] == "1.584963"


def test_capacity_queue_sparse(capsys):
    _, out, _ = run(capsys, "capacity", "--channel", "queue", "--P", "1", "--K", "2")
    row = csv_rows(out)[0]
    assert row["capacity"] == "0.333333"
    assert row["regime"] == "sparse"


def test_capacity_json_and_continuous(capsys):
    _, out, _ = run(capsys, "capacity", "--channel", "ctqueue", "--P", "4", "--tau", "0.1",
                    "--Tproc", "2", "--Ekappa", "1", "--format", "json")
    d = json.loads(out)
    assert d["capacity"] == pytest.approx(2.0)
    assert d["regime"] == "dense"
    _, out, _ = run(capsys, "capacity", "--channel", "ctshift", "--P", "1", "--tau", "0.5", "--Tres", "1")
    assert csv_rows(out)[0]["capacity"] == "1.388484"


def test_capacity_detection(capsys):
    _, out, _ = run(capsys, "capacity", "--channel", "shift", "--P", "3", "--K1", "0", "--K2", "4",
                    "--detection")
    assert csv_rows(out)[0]["capacity"] == "2.000000"


@pytest.mark.parametrize("argv", [
    ["capacity", "--channel", "shift", "--K", "1", "--K1", "0", "--K2", "1"],
    ["capacity", "--channel", "queue", "--K", "1", "--phi", "0.5,0.25,0.25"],
    ["capacity", "--channel", "queue", "--P", "2", "--K", "1", "--Ekappa", "3"],
    ["capacity", "--channel", "ctshift", "--P", "1"],
])
def test_capacity_bad_flags(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["capacity", "--channel", "shift", "--bogus"])
    assert exc.value.code == 2


# -- construct / verify ------------------------------------------------------------


def test_construct_shift_code_file(shift_code_file):
    code = loads_code(shift_code_file.read_text())
    assert len(code) == 10
    assert shift_code_file.read_text().startswith("n=9 P=1 channel=SHIFT(1;0,1) kind=correction construction=shift-lattice\n")


def test_construct_queue_reports_formula(capsys):
    code, out, err = run(capsys, "construct", "--channel", "queue", "--P", "1", "--K", "2", "--n", "10", "--W", "2")
    assert code == 0
    assert len(loads_code(out)) == 6
    assert json.loads(err) == {"size": 6, "formula_count": 6, "n": 10}


def test_construct_detection_auto(capsys, tmp_path):
    path = tmp_path / "det.code"
    code, _, err = run(capsys, "construct", "--kind", "detection", "--channel", "shift", "--K1", "-1",
                       "--K2", "1", "--n", "9", "--W", "2", "--a", "auto", "-o", str(path))
    assert code == 0
    summary = json.loads(err)
    assert summary["size"] >= summary["pigeonhole_bound"] >= 1
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0
    assert json.loads(out)["verdict"] == "verified"


def test_construct_greedy_queue(capsys):
    _, out, _ = run(capsys, "construct", "--channel", "queue", "--K", "2", "--n", "10", "--W", "2",
                    "--construction", "greedy")
    assert {to_simplex(w).coords for w in loads_code(out)} == {(0, 0), (0, 5), (0, 8), (3, 3), (3, 8), (6, 6)}


def test_construct_infeasible_queue(capsys):
    code, _, err = run(capsys, "construct", "--channel", "queue", "--K", "2", "--n", "4", "--W", "3")
    assert code == 2


def test_verify_shift_code(capsys, shift_code_file):
    code, out, _ = run(capsys, "verify", str(shift_code_file))
    assert code == 0
    d = json.loads(out)
    assert d["verdict"] == "verified"
    assert d["witness"] is None
    assert set(d) == {"instance", "verdict", "witness", "elapsed"}


def test_verify_refuted_on_wider_window(capsys, shift_code_file):
    code, out, _ = run(capsys, "verify", str(shift_code_file), "--channel", "shift", "--K", "2")
    assert code == 1
    d = json.loads(out)
    assert d["verdict"] == "refuted"
    assert len(d["witness"]) == 3


def test_verify_empty_weight_singleton(capsys, tmp_path):
    path = tmp_path / "zero.code"
    path.write_text("n=4 P=2 channel=QUEUE(2;2;0.5,0.25,0.25) kind=correction construction=custom\n0000\n")
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0


def test_verify_guard_exit_code(capsys, shift_code_file):
    code, _, err = run(capsys, "verify", str(shift_code_file), "--max-outputs", "5")
    assert code == 3
    assert "guard" in err


def test_verify_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "verify", str(tmp_path / "nope.code"))
    assert code == 2


# -- simulate ----------------------------------------------------------------------


def test_simulate_queue_code(capsys, tmp_path):
    path = tmp_path / "q.code"
    run(capsys, "construct", "--channel", "queue", "--K", "2", "--phi", "0.2,0.3,0.5", "--n", "10",
        "--W", "2", "-o", str(path))
    code, out, _ = run(capsys, "simulate", str(path), "--trials", "20000", "--seed", "3")
    assert code == 0
    d = json.loads(out)
    assert d["success_rate"] == 1.0
    assert d["Lav"] <= 12


def test_simulate_is_deterministic(capsys, shift_code_file):
    _, a, _ = run(capsys, "simulate", str(shift_code_file), "--trials", "500", "--seed", "11")
    _, b, _ = run(capsys, "simulate", str(shift_code_file), "--trials", "500", "--seed", "11")
    assert a == b


def test_simulate_zero_window_length(capsys, shift_code_file):
    _, out, _ = run(capsys, "simulate", str(shift_code_file), "--channel", "shift", "--K", "0", "--trials", "200")
    assert json.loads(out)["Lav"] == 9.0


def test_simulate_all_ones(capsys, tmp_path):
    path = tmp_path / "ones.code"
    path.write_text("n=100 P=1 channel=QUEUE(1;2;1/3,1/3,1/3) kind=correction construction=custom\n"
                    + "1" * 100 + "\n")
    code, out, _ = run(capsys, "simulate", str(path), "--trials", "20000", "--seed", "1")
    d = json.loads(out)
    assert abs(d["Lav"] - 200) < 4 * d["Lav_stderr"]


def test_simulate_detection_code(capsys, tmp_path):
    path = tmp_path / "qd.code"
    run(capsys, "construct", "--kind", "detection", "--channel", "queue", "--K", "1", "--n", "7", "--W", "2",
        "-o", str(path))
    code, out, _ = run(capsys, "simulate", str(path), "--trials", "5000")
    assert code == 0
    assert json.loads(out)["success_rate"] == 1.0


# -- table / sweep -----------------------------------------------------------------


def test_sweep_integer_grid(capsys):
    code, out, err = run(capsys, "sweep", "--P", "1:4", "--K", "0:10")
    assert code == 0
    assert "violations: 0" in err
    assert len(csv_rows(out)) == 44


def test_sweep_r_constant_at_K0(capsys):
    _, out, _ = run(capsys, "sweep", "--P", "1", "--K", "0:0")
    (row,) = csv_rows(out)
    assert float(row["r"]) == 2.0


def test_sweep_finite_length(capsys):
    code, out, _ = run(capsys, "sweep", "--finite-length", "--P", "1", "--K", "1", "--nmax", "400")
    rows = csv_rows(out)
    assert len(rows) == 401
    tail = [float(r["residual"]) for r in rows[-50:]]
    assert max(tail) - min(tail) < 1e-9


def test_table_columns(capsys):
    _, out, _ = run(capsys, "table", "--P", "2", "--K", "1:2", "--nmax", "5")
    rows = csv_rows(out)
    assert len(rows) == 12
    assert rows[0]["residual"] == "0.000000"


def test_parse_range():
    assert parse_range("0:1:0.25") == [0, 0.25, 0.5, 0.75, 1.0]
    assert parse_range("3", integer=True) == [3]
    with pytest.raises(Exception):
        parse_range("1:a")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "zeroshift", "capacity", "--channel", "shift", "--P", "1",
                           "--K", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "0.694242" in proc.stdout
