import json
import subprocess
import sys

import pytest

from exitweight.cli import Grid, main
from exitweight.errors import GridError
from exitweight.report import read_csv_tables


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_spectrum_rm13(capsys):
    rc, out, _ = run(capsys, "spectrum", "--rm", "1", "3")
    assert rc == 0
    dist = read_csv_tables(out)["distribution"]
    assert len(dist) == 9
    assert {r["i"]: r["a_i"] for r in dist}["4"] == "14"
    report = read_csv_tables(out)["bound_report"]
    assert report[0]["eps1"] == "0.0"


def test_spectrum_repetition_rm04(capsys):
    rc, out, _ = run(capsys, "spectrum", "--rm", "0", "4")
    assert rc == 0
    dist = read_csv_tables(out)["distribution"]
    nonzero = {r["i"]: r["a_i"] for r in dist if r["a_i"] != "0"}
    assert nonzero == {"0": "1", "16": "1"}


def test_spectrum_rejects_rank_deficient_file(tmp_path, capsys):
    path = tmp_path / "bad.gm"
    path.write_text("4 2\n1100\n1100\n")
    rc, _, err = run(capsys, "spectrum", "--code", str(path))
    assert rc != 0 and "dependent" in err


def test_spectrum_from_file(tmp_path, capsys):
    path = tmp_path / "h.gm"
    path.write_text("7 4\n1000110\n0100011\n0010111\n0001101\n")
    rc, out, _ = run(capsys, "spectrum", "--code", str(path))
    assert rc == 0
    dist = {r["i"]: int(r["a_i"]) for r in read_csv_tables(out)["distribution"]}
    assert dist == {"0": 1, "1": 0, "2": 0, "3": 7, "4": 7, "5": 0, "6": 0, "7": 1}


def test_exit_verify_identity(capsys):
    rc, out, _ = run(capsys, "exit", "--rm", "1", "3", "--grid", "0:1:101", "--verify-identity")
    assert rc == 0
    disc = float(next(line.split("=")[1] for line in out.splitlines()
                      if line.startswith("# identity_max_discrepancy")))
    assert disc <= 1e-9
    tables = read_csv_tables(out)
    assert len(tables["exit"]) == 101 and len(tables["mu"]) == 101


def test_exit_bad_grid(capsys):
    rc, _, err = run(capsys, "exit", "--rm", "1", "3", "--grid", "0:2:10")
    assert rc != 0 and "grid" in err


def test_exit_cutoff_suggests_mc(capsys):
    rc, _, err = run(capsys, "exit", "--rm", "1", "5")
    assert rc != 0 and "--mc" in err


def test_exit_mc_requires_seed(capsys):
    rc, _, err = run(capsys, "exit", "--rm", "1", "3", "--mc")
    assert rc != 0 and "seed" in err


def test_exit_mc_rm37_threshold(capsys):
    rc, out, _ = run(capsys, "exit", "--rm", "3", "7", "--mc", "--samples", "100000",
                     "--seed", "7", "--grid", "0.4:0.6:11", "--format", "json")
    assert rc == 0
    doc = json.loads(out)
    assert doc["meta"]["seed"] == 7 and doc["meta"]["samples"] == 100000
    assert abs(doc["meta"]["p_star"] - 0.5) <= 0.1


def test_bsc_simulation_json(capsys):
    rc, out, _ = run(capsys, "bsc", "--rm", "2", "5", "--p", "0.02", "--trials", "100000",
                     "--seed", "1", "--format", "json")
    assert rc == 0
    doc = json.loads(out)
    sim = doc["tables"]["simulation"]
    row = dict(zip(sim["columns"], sim["rows"][0]))
    assert row["trials"] == 100000 and row["seed"] == 1 and row["tie_policy"] == "tie-is-error"
    assert row["estimate"] <= row["union_bound"] + 3 * row["stderr"]


def test_bsc_rate_curve_endpoints(capsys):
    rc, out, _ = run(capsys, "bsc", "--rate-curves", "--grid", "0:0.5:501")
    assert rc == 0
    rows = read_csv_tables(out)["rate_curves"]
    assert len(rows) == 501
    first, last = rows[0], rows[-1]
    assert [float(first[c]) for c in ("p", "capacity", "critical_rate")] == [0, 1, 1]
    assert [float(last[c]) for c in ("p", "capacity", "critical_rate")] == [0.5, 0, 0]


def test_bsc_rejects_large_p(capsys):
    rc, _, err = run(capsys, "bsc", "--rm", "2", "5", "--p", "0.6", "--trials", "10",
                     "--seed", "1")
    assert rc != 0 and "0.6" in err


def test_bsc_union_sweep(capsys):
    rc, out, _ = run(capsys, "bsc", "--rm", "1", "4", "--sweep", "0.01:0.2:5")
    assert rc == 0
    rows = read_csv_tables(out)["union_bound"]
    assert [r["vacuous_flag"] for r in rows] == ["1" if float(r["bound"]) > 1 else "0"
                                                 for r in rows]


def test_bounds_with_and_without_code(capsys):
    rc, out, _ = run(capsys, "bounds", "--rm", "1", "3", "--c", "0.5", "--t", "1")
    assert rc == 0 and "# a=0.5" in out
    rc, out, _ = run(capsys, "bounds", "--n", "32", "--rate", "0.5")
    assert rc == 0
    rows = read_csv_tables(out)["bounds"]
    assert float(rows[8]["bound1"]) == pytest.approx(11.090354888959125)
    rc, _, _ = run(capsys, "bounds")
    assert rc != 0


@pytest.mark.parametrize("argv", [
    ["spectrum", "--rm", "2", "4"],
    ["exit", "--rm", "1", "3", "--grid", "0:1:11"],
    ["bsc", "--rm", "1", "4", "--p", "0.05", "0.1", "--trials", "2000", "--seed", "3"],
])
def test_csv_and_json_carry_same_numbers(capsys, argv):
    _, csv_out, _ = run(capsys, *argv)
    _, json_out, _ = run(capsys, *argv, "--format", "json")
    doc = json.loads(json_out)
    tables = read_csv_tables(csv_out)
    from exitweight.report import csv_cell
    for name, t in doc["tables"].items():
        as_csv = [[csv_cell(v) for v in row] for row in t["rows"]]
        assert as_csv == [[r[c] for c in t["columns"]] for r in tables[name]]


def test_outputs_identical_across_thread_counts(tmp_path, capsys):
    cmds = [
        ["exit", "--rm", "2", "5", "--mc", "--samples", "20000", "--seed", "5",
         "--grid", "0.3:0.7:5"],
        ["bsc", "--rm", "2", "5", "--p", "0.05", "--trials", "30000", "--seed", "9"],
    ]
    for argv in cmds:
        blobs = []
        for threads in ("1", "3"):
            out = tmp_path / f"{argv[0]}-{threads}"
            assert main(argv + ["--threads", threads, "--out", str(out)]) == 0
            blobs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
        assert blobs[0] == blobs[1]
    capsys.readouterr()


def test_env_thread_default(monkeypatch):
    from exitweight.parallel import default_threads
    monkeypatch.setenv("EXITWEIGHT_THREADS", "3")
    assert default_threads() == 3


def test_grid_parse():
    g = Grid.parse("0:1:101")
    assert g.values()[0] == 0.0 and g.values()[-1] == 1.0 and len(g.values()) == 101
    for bad in ("0:2:10", "0.5:0.2:3", "a:b:c", "0:1"):
        with pytest.raises(GridError):
            Grid.parse(bad)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "exitweight", "spectrum", "--rm", "1", "3",
                           "--pretty"], capture_output=True, text=True, check=True)
    assert "[distribution]" in proc.stdout
