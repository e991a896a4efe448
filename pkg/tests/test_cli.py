import json
import subprocess
import sys

import numpy as np
import pytest

from wmwplan.cli import (
    CliError,
    apply_effect,
    main,
    parse_allocation,
    read_sample,
    read_table,
    render_json,
)
from wmwplan.synthetic import WeightedSample


def run_json(capsys, *argv):
    code = main([*argv, "--format", "json"])
    out, err = capsys.readouterr()
    assert code == 0, err
    return json.loads(out), out


# -- plan ----------------------------------------------------------------


def test_plan_nasal_balanced(capsys):
    d, _ = run_json(capsys, "plan", "--example", "nasal", "--alpha", "0.05", "--power", "0.8",
                    "--allocation", "balanced")
    assert (d["n1"], d["n2"], d["N_total"]) == (85, 85, 170)
    assert d["noether_n_per_group"] == 134


def test_plan_albumin_optimal(capsys):
    d, _ = run_json(capsys, "plan", "--example", "albumin", "--allocation", "optimal")
    assert (d["n1"], d["n2"]) == (909, 842)
    assert d["t"] == pytest.approx(0.52, abs=5e-3)
    assert d["power"] == 0.9
    assert d["interval_lower"] <= d["t"] <= d["interval_upper"]


def test_plan_seizures_fixed(capsys):
    d, _ = run_json(capsys, "plan", "--example", "seizures", "--allocation", "fixed:0.5")
    assert (d["n1"], d["n2"]) == (24, 24)


def test_plan_json_fields(capsys):
    d, _ = run_json(capsys, "plan", "--example", "kidney")
    for key in ("p_star", "sigma_null", "sigma1", "sigma2", "kappa", "t", "n1", "n2",
                "N_total", "interval_lower", "interval_upper", "noether_n_per_group"):
        assert key in d


def test_plan_text_output(capsys):
    assert main(["plan", "--example", "seizures"]) == 0
    out = capsys.readouterr().out
    assert "n1" in out and "24" in out
    assert "0.2" in out and "kappa" in out


def test_json_round_trip_is_byte_identical(capsys):
    for argv in (["plan", "--example", "albumin", "--allocation", "optimal"],
                 ["power", "--example", "kidney", "--n1", "5", "--n2", "6", "--reps", "50"]):
        _, raw = run_json(capsys, *argv)
        assert render_json(json.loads(raw)) == raw


def test_infinite_kappa_is_null(tmp_path, capsys):
    (tmp_path / "a.txt").write_text("1\n")
    (tmp_path / "b.txt").write_text("0\n2\n2\n")
    d, _ = run_json(capsys, "plan", "--g1", str(tmp_path / "a.txt"), "--g2", str(tmp_path / "b.txt"),
                    "--allocation", "optimal")
    assert d["kappa"] is None


# -- power ---------------------------------------------------------------


def test_power_kidney(capsys):
    d, _ = run_json(capsys, "power", "--example", "kidney", "--n1", "30", "--n2", "30",
                    "--reps", "10000", "--seed", "0")
    assert d["power_hat"] == pytest.approx(0.7976, abs=0.015)
    assert d["replications"] == 10_000


def test_power_nasal_noether(capsys):
    d, _ = run_json(capsys, "power", "--example", "nasal", "--n1", "134", "--n2", "134")
    assert d["power_hat"] == pytest.approx(0.9417, abs=0.015)


def test_power_single_replication(capsys):
    d, _ = run_json(capsys, "power", "--example", "seizures", "--reps", "1")
    assert d["power_hat"] in (0.0, 1.0)


def test_power_sizes_from_plan(capsys):
    d, _ = run_json(capsys, "power", "--example", "albumin", "--allocation", "optimal", "--reps", "20")
    assert (d["n1"], d["n2"]) == (909, 842)


def test_power_threads_do_not_change_bytes(capsys, monkeypatch):
    argv = ["power", "--example", "nasal", "--n1", "30", "--n2", "31", "--reps", "2000", "--seed", "8"]
    _, a = run_json(capsys, *argv, "--threads", "1")
    _, b = run_json(capsys, *argv, "--threads", "4")
    monkeypatch.setenv("WMWPLAN_THREADS", "3")
    _, c = run_json(capsys, *argv)
    assert a == b == c


# -- errors --------------------------------------------------------------


@pytest.mark.parametrize(
    "argv, needle",
    [
        (["plan"], "no input"),
        (["plan", "--example", "nasal", "--effect", "scale:0.5"], "cannot be combined"),
        (["plan", "--example", "nasal", "--allocation", "fixed:x"], "bad allocation"),
        (["plan", "--example", "nasal", "--allocation", "fixed:1.5"], ""),
        (["plan", "--example", "nasal", "--alpha", "2"], "alpha"),
        (["power", "--example", "nasal", "--n1", "10"], "both --n1 and --n2"),
        (["power", "--example", "nasal", "--n1", "1", "--n2", "5"], "group sizes"),
        (["plan", "--g1", "/nonexistent/file.txt", "--effect", "scale:0.5"], "/nonexistent"),
    ],
)
def test_errors_exit_nonzero_without_stdout(capsys, argv, needle):
    assert main(argv) == 1
    out, err = capsys.readouterr()
    assert out == ""
    assert err.startswith("wmwplan: error:") and needle in err


def test_null_effect_error_is_reported(tmp_path, capsys):
    f = tmp_path / "g.txt"
    f.write_text("1\n2\n3\n")
    assert main(["plan", "--g1", str(f), "--g2", str(f)]) == 1
    out, err = capsys.readouterr()
    assert out == "" and "null effect" in err


def test_bad_thread_env(monkeypatch, capsys):
    monkeypatch.setenv("WMWPLAN_THREADS", "lots")
    assert main(["power", "--example", "kidney", "--reps", "5"]) == 1
    assert "WMWPLAN_THREADS" in capsys.readouterr().err


def test_argparse_usage_error_is_nonzero():
    with pytest.raises(SystemExit) as exc:
        main(["plan", "--example", "unknown"])
    assert exc.value.code != 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "wmwplan", "plan", "--example", "seizures", "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["n1"] == 24


# -- file formats --------------------------------------------------------


def test_read_sample_plain_and_weighted(tmp_path):
    p = tmp_path / "plain.txt"
    p.write_text("# comment\nvalue\n3\n\n1.5\n3\n")
    ws = read_sample(str(p))
    np.testing.assert_array_equal(ws.values, [3, 1.5, 3])
    q = tmp_path / "weighted.csv"
    q.write_text("x,w\n0,0.85\n1,0.10\n2,0.05\n3,0\n")
    ws = read_sample(str(q))
    np.testing.assert_array_equal(ws.values, [0, 1, 2])
    np.testing.assert_allclose(ws.weights, [0.85, 0.10, 0.05])


@pytest.mark.parametrize(
    "text, needle",
    [
        ("1\n2\nabc\n", ":3:"),
        ("1,2\n3\n", ":2:"),
        ("1,2,3\n", ":1:"),
        ("1,1\n2,-1\n", ":2: negative"),
        ("1,0\n", "positive weight"),
        ("1\ninf\n", ":2:"),
    ],
)
def test_read_sample_errors_carry_line_numbers(tmp_path, text, needle):
    p = tmp_path / "bad.txt"
    p.write_text(text)
    with pytest.raises(CliError, match=needle):
        read_sample(str(p))


def test_read_table(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("score,a,b\n0,64,48\n1,12,25\n2,4,6\n3,0,1\n")
    f1, f2 = read_table(str(p))
    np.testing.assert_array_equal(f1.values, [0, 1, 2])
    np.testing.assert_array_equal(f2.weights, [48, 25, 6, 1])


@pytest.mark.parametrize("text, needle", [("a,1\n", ":1:"), ("a,1,2\nb,x,2\n", ":2:"), ("", "empty"),
                                          ("a,1,-2\n", "negative")])
def test_read_table_errors(tmp_path, text, needle):
    p = tmp_path / "t.csv"
    p.write_text(text)
    with pytest.raises(CliError, match=needle):
        read_table(str(p))


def test_table_reproduces_nasal_plan(tmp_path, capsys):
    p = tmp_path / "t.csv"
    p.write_text("0,64,48\n1,12,25\n2,4,6\n3,0,1\n")
    d, _ = run_json(capsys, "plan", "--table", str(p))
    assert (d["n1"], d["n2"]) == (85, 85)


def test_effect_from_file_reproduces_seizures(tmp_path, capsys):
    from wmwplan.datasets import SEIZURES_PLACEBO

    p = tmp_path / "placebo.txt"
    p.write_text("\n".join(str(v) for v in SEIZURES_PLACEBO) + "\n")
    d, _ = run_json(capsys, "plan", "--g1", str(p), "--effect", "scale:0.5:floor",
                    "--allocation", "optimal")
    assert (d["n1"], d["n2"]) == (23, 24)


# -- effect specs --------------------------------------------------------


def test_effect_specs():
    base = WeightedSample([0, 1, 2], [64, 12, 4])
    out = apply_effect("ordshift:0.25:up:cats=0,1,2:ncat=4", base)
    np.testing.assert_array_equal(out.weights, [48, 25, 6, 1])
    np.testing.assert_array_equal(apply_effect("scale:0.5", WeightedSample([3])).values, [1.5])
    np.testing.assert_array_equal(apply_effect("scale:0.5:floor", WeightedSample([3])).values, [1])
    np.testing.assert_allclose(apply_effect("shift:0.333:round=2", WeightedSample([1])).values, [1.33])


@pytest.mark.parametrize(
    "spec",
    ["scale", "scale:2", "scale:0.5:ceil", "shift:1:decimals=2", "ordshift:0.2",
     "ordshift:0.2:up:bogus=1", "ordshift:0.2:up:ncat=1", "warp:1", "shift:abc"],
)
def test_bad_effect_specs(spec):
    with pytest.raises(CliError):
        apply_effect(spec, WeightedSample([0, 1, 2]))


def test_ordshift_needs_codes():
    with pytest.raises(CliError, match="category codes"):
        apply_effect("ordshift:0.2:up", WeightedSample([0.5, 1.0]))


def test_parse_allocation():
    assert parse_allocation("optimal") == "optimal"
    assert parse_allocation("fixed:0.4") == 0.4
    with pytest.raises(CliError):
        parse_allocation("half")
