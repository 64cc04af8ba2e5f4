import csv
import io
import json
import subprocess
import sys
from importlib import resources

import pytest

from groupcloseness.cli import BENCH_FIELDS, REPORT_FIELDS, TRACE_FIELDS, main


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


@pytest.fixture
def p5(tmp_path):
    f = tmp_path / "p5.txt"
    f.write_text("0 1\n1 2\n2 3\n3 4\n")
    return f


@pytest.fixture
def karate_file():
    return resources.files("groupcloseness") / "data" / "karate.txt"


def test_exact_on_path(p5):
    code, out = run("group-closeness", "--algo", "exact", "-k", 2, p5)
    assert code == 0
    assert json.loads(out)["distance_sum"] == 3
    code, out = run("exact", "-k", 2, p5)
    assert json.loads(out)["group"] == ["0", "3"]


@pytest.mark.parametrize("algo", ["greedy++", "bitgreedy++", "greedy-ref"])
def test_greedy_variants_on_karate(algo, karate_file):
    code, out = run("group-closeness", "--algo", algo, "-k", 10, karate_file)
    rep = json.loads(out)
    assert code == 0
    assert rep["distance_sum"] == 24 and rep["n"] == 34 and rep["k"] == 10
    assert set(REPORT_FIELDS) == set(rep)


def test_json_and_csv_agree(karate_file):
    _, js = run("group-closeness", "-k", 5, "--format", "json", karate_file)
    _, cs = run("group-closeness", "-k", 5, "--format", "csv", karate_file)
    a = json.loads(js)
    (b,) = list(csv.DictReader(io.StringIO(cs)))
    assert list(b) == REPORT_FIELDS
    for f in REPORT_FIELDS:
        if f in ("wall_time_s",):
            continue
        va = a[f]
        expected = "" if va is None else " ".join(va) if isinstance(va, list) else str(va)
        assert b[f] == expected, f


def test_text_format(p5):
    code, out = run("group-closeness", "-k", 2, "--format", "text", p5)
    assert code == 0 and "distance_sum: 4" in out


def test_bit_variant_reports_memory(karate_file):
    _, out = run("group-closeness", "--algo", "bitgreedy++", "-k", 3, karate_file)
    assert json.loads(out)["peak_memory_bytes"] == 2 * 34 * 8 + 8


def test_degree_and_topk_algorithms(p5):
    _, out = run("group-closeness", "--algo", "degree", "-k", 2, p5)
    assert json.loads(out)["group"] == ["1", "2"]
    _, out = run("group-closeness", "--algo", "topk", "-k", 1, p5)
    assert json.loads(out)["distance_sum"] == 6


def test_trace_csv(p5, tmp_path):
    trace = tmp_path / "trace.csv"
    run("group-closeness", "-k", 3, "--trace", trace, p5)
    rows = list(csv.DictReader(trace.open()))
    assert list(rows[0]) == TRACE_FIELDS
    assert [r["node_label"] for r in rows] == ["2", "0", "3"]
    assert rows[0]["gain"] == "" and rows[1]["gain"] == "2"


def test_top_k(p5):
    code, out = run("top-k", "-k", 2, "--format", "csv", p5)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [(r["node_label"], r["distance_sum"]) for r in rows] == [("2", "6"), ("1", "7")]


def test_export_ilp(p5, tmp_path):
    target = tmp_path / "p5.lp"
    assert run("export-ilp", "-k", 2, "-o", target, p5)[0] == 0
    text = target.read_text()
    assert text.count("link_") == 25 and "Minimize" in text
    code, out = run("export-ilp", "-k", 2, p5)
    assert out == text


def test_overlap(karate_file):
    code, out = run("overlap", "-k", "5,20", "--format", "csv", karate_file)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["k"] for r in rows] == ["5", "20"]
    assert all(0 <= float(r["overlap_topk_pct"]) <= 100 for r in rows)
    assert all(0 <= float(r["overlap_degree_pct"]) <= 100 for r in rows)


def test_bench_rows(karate_file):
    code, out = run("bench", "--algos", "greedy++,bitgreedy++,greedy-ref", "--ks", "2,10,20",
                    "--check-objective", karate_file)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and list(rows[0]) == BENCH_FIELDS and len(rows) == 9
    sums = [int(r["distance_sum"]) for r in rows if r["algorithm"] == "greedy++"]
    assert sums == sorted(sums, reverse=True)
    bit = [r for r in rows if r["algorithm"] == "bitgreedy++"][0]
    assert int(bit["peak_memory_bytes"]) == 2 * 34 * 8 + 8


def test_disconnected_input_warns_and_uses_lcc(tmp_path, capsys):
    f = tmp_path / "g.txt"
    f.write_text("0 1\n1 2\n2 3\n7 8\n")
    code, out = run("group-closeness", "-k", 1, f)
    assert code == 0 and json.loads(out)["n"] == 4
    assert "largest component" in capsys.readouterr().err


def test_exit_codes(p5, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1 2 3\n")
    assert run("group-closeness", "-k", 2, bad)[0] == 4
    assert run("group-closeness", "-k", 2, tmp_path / "missing.txt")[0] == 4
    assert run("group-closeness", "-k", 0, p5)[0] == 2
    assert run("group-closeness", "-k", 5, p5)[0] == 2
    assert run("group-closeness", "--algo", "nope", "-k", 2, p5)[0] == 2
    assert run("group-closeness", "-k", 2, "--threads", 0, p5)[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("group-closeness", "--algo", "bitgreedy++", "--memory-cap", 10, "-k", 2, p5)[0] == 3
    assert run("exact", "-k", 2, "--budget", 3, p5)[0] == 3


def test_console_script_entry_point(p5):
    proc = subprocess.run([sys.executable, "-m", "groupcloseness.cli", "group-closeness", "-k", "2", str(p5)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["distance_sum"] == 4
