import json

import pytest

from p2dyn.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, "--json", "-", *argv)
    return code, json.loads(out)


def strip_time(text):
    data = json.loads(text)
    data.pop("wall_time")
    return json.dumps(data, sort_keys=True)


def test_degseq_report(capsys):
    code, rep = report(capsys, "degseq", "example", "--N", "6", "--p", "5")
    assert code == 0
    assert rep["command"] == "degseq" and rep["seed"] == 0 and "version" in rep
    seq = rep["results"]["sequence"]
    assert seq["degrees"] == [2, 4, 8, 15, 28, 52] and seq["first_drop"] == 4
    # exact fractions survive serialization
    for b in rep["results"]["bounds"]["entries"]:
        assert "/" in b["value"] or b["value"].isdigit()


def test_degseq_cap_hit_exit_code(capsys):
    code, out, _ = run(capsys, "--term-cap", "100", "degseq", "example", "--N", "8")
    assert code == 3 and "term_cap_hit" in out


def test_lambda1_geometric(capsys):
    code, rep = report(capsys, "lambda1", "--geometric", "2", "--N", "62")
    res = rep["results"]
    assert code == 0 and res["consistent"]
    assert res["bounds"]["best_upper"]["n"] == 31
    code, rep = report(capsys, "lambda1", "--degrees", "2,4,8,16")
    assert rep["results"]["bounds"]["best_lower"] is None


def test_reduce(capsys):
    code, rep = report(capsys, "reduce", "example", "--p", "7")
    assert code == 0 and rep["results"]["birational_verified"] is True
    code, rep = report(capsys, "reduce", "example", "--p", "2")
    assert rep["results"]["degenerate"] is True


def test_stability(capsys):
    code, rep = report(capsys, "stability", "example", "--p", "11")
    assert rep["results"]["verdict"] == "UnstableAt" and rep["results"]["step"] == 8
    code, rep = report(capsys, "stability", "example", "--N", "5")
    assert rep["results"]["verdict"] == "StableUpTo"
    assert rep["results"]["orbits"]["[0,2,-3]"][1] == "[0,6,-7]"


def test_periodic_and_density_via_jsonl(capsys, tmp_path):
    jl = tmp_path / "census.jsonl"
    code, rep = report(capsys, "periodic", "example", "--p", "5", "--k", "2", "--noncritical", "--jsonl", str(jl))
    assert code == 0 and rep["results"]["count"] == 22
    lines = jl.read_text().splitlines()
    assert len(lines) == 22 and set(json.loads(lines[0])) == {"coords", "period", "critical"}
    code, rep2 = report(capsys, "density", "--points", str(jl), "--field", "GF(5,2)", "--D", "1,2")
    assert [d["verdict"] for d in rep2["results"]["density"]] == [d["verdict"] for d in rep["results"]["density"]]


def test_threads_do_not_change_results(capsys):
    a = report(capsys, "--threads", "1", "periodic", "example", "--p", "5", "--k", "2")[1]
    b = report(capsys, "--threads", "3", "periodic", "example", "--p", "5", "--k", "2")[1]
    assert a["results"] == b["results"]


def test_sweep_replay_is_byte_identical(capsys, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["--seed", "9", "--json", str(p), "sweep", "example", "--p", "5", "--trials", "20"]) == 0
    capsys.readouterr()
    assert strip_time(paths[0].read_text()) == strip_time(paths[1].read_text())


def test_root(capsys):
    code, rep = report(capsys, "root", "--n", "4")
    assert rep["results"]["inside"] is True
    assert abs(float(rep["results"]["root"]["decimal"]) - 1.839286755) < 1e-9
    code, rep = report(capsys, "root", "--n", "2")
    assert rep["results"]["root"]["lo"] == rep["results"]["root"]["hi"] == "1"


def test_example_reproduction(capsys):
    code, rep = report(capsys, "example-sec5", "--primes", "3,5,7", "--qq-steps", "5")
    assert code == 0 and rep["results"]["failures"] == []
    rows = {r["p"]: r for r in rep["results"]["primes"]}
    assert rows[5]["n_p"] == 4 and rows[5]["inside"] is True
    assert rows[7]["root"]["decimal"].startswith("1.6180339887")
    assert rows[3]["inequalities"].startswith("skipped") and rows[3]["root"]["lo"] == "1"


@pytest.mark.parametrize(
    "argv",
    [
        ["root", "--n", "1"],
        ["reduce", "example", "--p", "9"],
        ["degseq", "no-such-file.map"],
        ["example-sec5", "--primes", "2"],
        ["periodic", "example", "--k", "2"],
    ],
)
def test_precondition_violations_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("p2dyn:")


def test_map_file_input(capsys, tmp_path):
    path = tmp_path / "jonq.map"
    path.write_text("field: QQ\nmap: [x*z, x*y, z^2]\n")
    code, rep = report(capsys, "degseq", str(path), "--N", "8")
    assert rep["results"]["sequence"]["degrees"] == list(range(2, 10))
    assert rep["results"]["growth"]["kind"] == "linear"
    bad = tmp_path / "bad.map"
    bad.write_text("field: QQ\nmap: [x + y^2, y, z]\n")
    code, _, err = run(capsys, "degseq", str(bad))
    assert code == 2 and "non-homogeneous" in err
