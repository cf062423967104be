import csv
import io
import json

import pytest

from hybridsearch import bench
from hybridsearch.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_algorithm():
    assert bench.parse_algorithm("hybrid-inf") == ("hybrid", None)
    assert bench.parse_algorithm("hybrid-3") == ("hybrid", 3)
    assert bench.parse_algorithm("hybrid-k", 6) == ("hybrid", 6)
    assert bench.parse_algorithm("hybrid-k") == ("hybrid", 4)
    for bad in ("dfs", "hybrid-0", "hybrid-x"):
        with pytest.raises(ValueError):
            bench.parse_algorithm(bad)


def test_run_request_validation():
    with pytest.raises(ValueError):
        bench.RunRequest("builtin:figure1", threshold=0)
    with pytest.raises(ValueError):
        bench.RunRequest("builtin:figure1", format="xml")


def test_solve_figure1_with_calls_and_path(capsys):
    code, out, _ = run(capsys, "solve", "--instance", "builtin:figure1", "--algorithm", "hybrid-inf",
                       "--threshold", "12", "--calls", "--path", "--no-timing")
    assert code == 0
    assert "call bound=8 depths=[1] seeds=['B'] next_f=10" in out
    assert "call bound=9 depths=[3] seeds=['H', 'I', 'J', 'K'] solved" in out
    assert out.rstrip().endswith("9  Z")


def test_solve_csv_columns(capsys):
    code, out, _ = run(capsys, "solve", "--instance", "random:tile:3x3:20", "--seed", "4",
                       "--algorithm", "bfida", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert tuple(rows[0]) == bench.CSV_COLUMNS
    assert rows[0]["status"] == "solved" and float(rows[0]["time_s"]) >= 0


def test_solve_json_has_schema(capsys):
    code, out, _ = run(capsys, "solve", "--instance", "builtin:figure1", "--format", "json", "--no-timing")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == bench.SCHEMA_VERSION
    assert doc["rows"][0]["solution_cost"] == 9
    assert "wall_time_seconds" not in doc["rows"][0] and "hardware" not in doc


def test_budget_exit_code_and_lower_bound_marker(capsys):
    code, out, _ = run(capsys, "solve", "--instance", "random:tile:3x3:30", "--algorithm", "astar",
                       "--node-budget", "10", "--format", "csv", "--no-timing")
    assert code == 2
    row = next(csv.DictReader(io.StringIO(out)))
    assert row["status"] == "budget-exceeded" and row["peak_stored"].startswith(">")


def test_unsolvable_exit_code(tmp_path, capsys):
    p = tmp_path / "cut.txt"
    p.write_text("domain: graph\nvertex S h=0\nvertex A h=0\nvertex Z h=0\nedge S A\nstart S\ngoal Z\n")
    for alg in ("astar", "bfida", "hybrid-inf"):
        code, out, _ = run(capsys, "solve", "--instance", str(p), "--algorithm", alg, "--threshold", "1")
        assert code == 3 and "unsolvable" in out


def test_wrong_parity_tile_is_an_input_error(tmp_path, capsys):
    p = tmp_path / "odd.txt"
    p.write_text("domain: tile\nsize: 2x2\nstart: 0 2 1 3\n")
    code, _, err = run(capsys, "solve", "--instance", str(p))
    assert code == 1 and "parity" in err


def test_input_errors_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("domain: tile\nsize: 3x3\nstart: 1 2\n")
    code, _, err = run(capsys, "solve", "--instance", str(bad))
    assert code == 1 and "bad.txt:3:" in err
    assert run(capsys, "solve", "--instance", str(tmp_path / "missing.txt"))[0] == 1
    assert run(capsys, "solve", "--instance", "builtin:figure1", "--algorithm", "dfs")[0] == 1
    with pytest.raises(SystemExit) as info:
        main(["solve"])
    assert info.value.code == 1


def test_gen_oracle_and_bench(tmp_path, capsys):
    out_dir = tmp_path / "inst"
    code, out, _ = run(capsys, "gen", "--domain", "pancake", "--count", "3", "--seed", "5",
                       "--out", str(out_dir), "--with-oracle", "6")
    assert code == 0 and len(out.split()) == 3
    oracle = {r["instance"]: int(r["distance"]) for r in csv.DictReader((out_dir / "oracle.csv").open())}
    files = sorted(out_dir.glob("*.txt"))
    code, out, _ = run(capsys, "oracle", *map(str, files), "--format", "csv")
    assert code == 0
    got = {r["instance"] + ".txt": int(r["distance"]) for r in csv.DictReader(io.StringIO(out))}
    assert got == oracle

    suite = out_dir / "suite.txt"
    suite.write_text("".join(f"{f.name} {alg}\n" for f in files for alg in ("astar", "hybrid-2 threshold=5")))
    code, first, _ = run(capsys, "bench", str(suite), "--format", "csv", "--no-timing")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(first)))
    assert len(rows) == 6
    for r in rows:
        assert int(r["cost"]) == oracle[r["instance"] + ".txt"]
    code, again, _ = run(capsys, "bench", str(suite), "--format", "csv", "--no-timing", "--jobs", "2")
    assert again == first


def test_suite_parse_errors(tmp_path):
    with pytest.raises(ValueError):
        bench.parse_suite("x.txt\n")
    with pytest.raises(ValueError):
        bench.parse_suite("x.txt astar colour=red\n")
    entries = bench.parse_suite("# c\nx.txt hybrid-2 threshold=5 heuristic=zero\n", tmp_path)
    assert entries[0].options == {"threshold": 5, "heuristic": "zero"}
    assert entries[0].instance == str(tmp_path / "x.txt")


def test_generators_are_seeded():
    a = bench.generate_instances("hanoi4", 4, 9, ["3-6", "random"])
    b = bench.generate_instances("hanoi4", 4, 9, ["3-6", "random"])
    assert [i.start for i in a] == [i.start for i in b]
    assert [i.space.discs for i in a] == [3, 4, 5, 6]
    with pytest.raises(ValueError):
        bench.generate_instances("chess", 1, 0)
