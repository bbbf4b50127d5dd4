import json
import math
import subprocess
import sys

import pytest

from axial.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    return code, json.loads(out), err


def test_hind_hard_square(capsys):
    code, doc, _ = run_json(capsys, "hind", "hard_square")
    assert code == 0
    assert doc["schema_version"] == 1
    assert doc["p"] == "2" and doc["n"] == 2
    assert abs(doc["nats"] - 0.5 * math.log(2)) < 1e-12
    assert doc["witness"] == ["{0}", "{0,1}"]


def test_hind_log_base_2(capsys):
    code, doc, _ = run_json(capsys, "hind", "hard_square", "--log-base", "2")
    assert code == 0 and doc["value"] == 0.5
    # emitted float consistent with the exact pair in the stated base
    assert abs(doc["value"] - math.log(int(doc["p"])) / doc["n"] / math.log(2)) < 1e-9


def test_hind_add_from_file(capsys, tmp_path):
    path = tmp_path / "add.json"
    path.write_text(json.dumps(
        {"alphabet": [chr(ord("A") + i) for i in range(26)], "forbidden": ["ADD"]}))
    code, doc, _ = run_json(capsys, "hind", f"file:{path}")
    assert code == 0
    assert doc["p"] == "650" and doc["n"] == 2
    assert abs(doc["nats"] - (0.5 * math.log(25) + 0.5 * math.log(26))) < 1e-9


def test_classify_coloring3(capsys):
    code, doc, _ = run_json(capsys, "classify", "coloring:3")
    assert code == 0
    assert doc["verdict"] == "exactly_k" and doc["k"] == 3


def test_classify_unknown_exit_code(capsys):
    code, doc, _ = run_json(capsys, "classify", "coloring:3", "--max-cycles", "1")
    assert code == 4
    assert doc["verdict"] == "unknown_within_bounds"


def test_classify_multiple(capsys):
    code, doc, _ = run_json(capsys, "classify", "rll:2,inf")
    assert code == 0
    assert doc["verdict"] == "multiple"
    assert doc["counterexample"]["t"] == 1 and doc["counterexample"]["period"] == 3


def test_validation_exit_code(capsys):
    code, out, err = run_cli(capsys, "hind", "noliquid")
    assert code == 2 and out == "" and "unknown model" in err


def test_workcap_exit_code(capsys):
    code, out, err = run_cli(capsys, "count", "hard_square", "--n", "5", "--d", "3")
    assert code == 3 and "work cap" in err


def test_bad_caps_string(capsys):
    code, out, err = run_cli(capsys, "hind", "hard_square", "--caps", "bogus=1")
    assert code == 2


def test_caps_flag_applies(capsys):
    code, out, err = run_cli(capsys, "count", "hard_square", "--n", "5", "--d", "3",
                             "--caps", "sites=200")
    assert code == 0


def test_count_command(capsys):
    code, doc, _ = run_json(capsys, "count", "hard_square", "--n", "3", "--d", "2")
    assert code == 0 and doc["count"] == "63"
    assert abs(doc["estimate_nats"] - math.log(63) / 9) < 1e-12


def test_table_csv(capsys, tmp_path):
    out_path = tmp_path / "t.csv"
    code, doc, _ = run_json(capsys, "table", "hard_square", "--n", "2,4",
                            "--d", "1,2", "--csv", str(out_path))
    assert code == 0
    assert doc["checks"] == {"sandwich": True, "slice_monotone": True, "doubling": True}
    lines = out_path.read_text().strip().splitlines()
    assert lines[0] == "n,d,count,estimate_nats,h_ind_nats"
    assert len(lines) == 5
    assert lines[1].startswith("2,1,3,")


def test_entropy1d_command(capsys):
    code, doc, _ = run_json(capsys, "entropy1d", "plastic")
    assert code == 0 and abs(doc["nats"] - 0.2811995743) < 1e-6


def test_cycles_command(capsys):
    code, doc, _ = run_json(capsys, "cycles", "beach:3")
    assert code == 0 and doc["count"] == 2 and doc["complete"]


def test_pressure_command(capsys):
    code, doc, _ = run_json(capsys, "pressure", "hard_square", "--weights", "0=1,1=8")
    assert code == 0
    assert abs(doc["nats"] - 0.5 * math.log(9)) < 1e-12
    assert doc["witness"] == ["{0}", "{0,1}"]


def test_pressure_rational_weights(capsys):
    code, doc, _ = run_json(capsys, "pressure", "full:2", "--weights", "0=1/2,1=1/2")
    assert code == 0 and doc["p"] == "1"  # total mass 1: zero pressure


def test_sample_command_and_csv(capsys, tmp_path):
    out_path = tmp_path / "s.csv"
    code, doc, _ = run_json(capsys, "sample", "hard_square", "--n", "2", "--d", "2",
                            "--count", "5", "--seed", "9", "--emit", str(out_path))
    assert code == 0 and doc["violations"] == 0
    rows = out_path.read_text().strip().splitlines()
    assert len(rows) == 5
    assert all(len(r.split(",")) == 4 for r in rows)
    assert set("".join(rows)) <= set("01,\n")


def test_sample_reruns_bit_identical(capsys, tmp_path):
    args = ("sample", "hard_square", "--n", "3", "--d", "2",
            "--count", "20", "--seed", "123")
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2


def test_dump_graph(capsys):
    code, out, _ = run_cli(capsys, "dump-graph", "hard_square")
    assert code == 0
    assert out.splitlines() == [
        "vertex 0 {0}",
        "vertex 1 {0,1}",
        "edge 0 0 1 {0}",
        "edge 0 1 2 {0,1}",
        "edge 1 0 1 {0}",
    ]


def test_dump_graph_to_file(capsys, tmp_path):
    path = tmp_path / "g.txt"
    code, out, _ = run_cli(capsys, "dump-graph", "hard_square", "--dump-graph", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("vertex 0 {0}")


def test_byte_identical_reruns(capsys):
    _, a, _ = run_cli(capsys, "classify", "rll:1,3")
    _, b, _ = run_cli(capsys, "classify", "rll:1,3")
    assert a == b


def test_text_format(capsys):
    code, out, _ = run_cli(capsys, "hind", "hard_square", "--format", "text")
    assert code == 0 and "p=2" in out and "n=2" in out


def test_axial_threads_validation(capsys, monkeypatch):
    monkeypatch.setenv("AXIAL_THREADS", "zero")
    code, _, err = run_cli(capsys, "hind", "hard_square")
    assert code == 2 and "AXIAL_THREADS" in err
    monkeypatch.setenv("AXIAL_THREADS", "2")
    code, _, _ = run_cli(capsys, "hind", "hard_square")
    assert code == 0


def test_console_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "axial.cli", "hind", "hard_square"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["p"] == "2"