"""The command-line interface: exit codes, artifacts, CSV schema."""

from __future__ import annotations

import csv
import json

import pytest

from tdlite.cli import (
    CSV_HEADER,
    EXIT_FLOW,
    EXIT_INDEFINITE,
    EXIT_PARSE,
    EXIT_SAT,
    EXIT_UNSAT,
    main,
)

UNSAT_KB = "SIG\nconcept A\nindividual x\nTBOX\nA SUB BOT\nABOX\nA(x)@0\n"
SAT_KB = "SIG\nconcept A\nindividual x\nTBOX\nA SUB X A\nABOX\nA(x)@0\n"
PAST_KB = "SIG\nconcept A\nTBOX\nSOMP A SUB A\nABOX\n"


def run_cli(*argv) -> int:
    try:
        return main(list(argv))
    except SystemExit as e:
        return int(e.code)


@pytest.fixture
def kb_file(tmp_path):
    def write(text, name="in.kb"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def test_check_exit_codes(kb_file, capsys):
    assert run_cli("check", kb_file(UNSAT_KB), "--flow", "n") == EXIT_UNSAT
    assert capsys.readouterr().out.strip() == "UNSAT"
    assert run_cli("check", kb_file(SAT_KB), "--flow", "n") == EXIT_SAT
    assert capsys.readouterr().out.strip() == "SAT"


def test_parse_error_exit_code(kb_file, capsys):
    assert run_cli("check", kb_file("SIG\nTBOX oops\n")) == EXIT_PARSE
    assert "parse error" in capsys.readouterr().err


def test_validation_error_exit_code(kb_file, capsys):
    bad = "SIG\nconcept A\nTBOX\nB SUB A\nABOX\n"  # B undeclared
    assert run_cli("check", kb_file(bad)) == EXIT_PARSE
    assert "UNDECLARED_NAME" in capsys.readouterr().err


def test_missing_file_exit_code(capsys):
    assert run_cli("check", "/no/such/file.kb") == EXIT_PARSE


def test_flow_violation_exit_code(kb_file, capsys):
    assert run_cli("check", kb_file(PAST_KB), "--flow", "n") == EXIT_FLOW
    capsys.readouterr()
    assert run_cli("translate", kb_file(PAST_KB), "--flow", "n") == EXIT_FLOW
    # the same KB goes through over the integers
    capsys.readouterr()
    assert run_cli("translate", kb_file(PAST_KB), "--flow", "z") == EXIT_SAT


def test_unknown_solver_profile(kb_file, capsys):
    assert run_cli("check", kb_file(SAT_KB), "--solver", "nope") == EXIT_INDEFINITE


def test_translate_stages(kb_file, tmp_path, capsys):
    path = kb_file(SAT_KB)
    assert run_cli("translate", path, "--to", "qtl1") == EXIT_SAT
    assert "ALWF" in capsys.readouterr().out

    assert run_cli("translate", path, "--flow", "z", "--to", "infix") == EXIT_SAT
    out = capsys.readouterr().out
    assert "__pos" in out and "Y" not in out

    assert run_cli("translate", path, "--flow", "n", "--to", "smv") == EXIT_SAT
    assert capsys.readouterr().out.startswith("MODULE main")


def test_translate_trace_artifact(kb_file, tmp_path, capsys):
    trace_path = tmp_path / "trace.json"
    code = run_cli(
        "translate", kb_file(SAT_KB), "--flow", "z",
        "--out", str(tmp_path / "out.ltl"), "--emit-trace", str(trace_path),
    )
    assert code == EXIT_SAT
    doc = json.loads(trace_path.read_text())
    assert [s["name"] for s in doc["stages"]] == ["kb", "qtl1", "ltlp", "ltl"]
    assert (tmp_path / "out.ltl").read_text().strip()


def test_solve_command(tmp_path, capsys):
    sat = tmp_path / "sat.ltl"
    sat.write_text("F a\n")
    unsat = tmp_path / "unsat.ltl"
    unsat.write_text("a & (~ a)\n")
    bad = tmp_path / "bad.ltl"
    bad.write_text("&&&\n")
    assert run_cli("solve", str(sat)) == EXIT_SAT
    assert capsys.readouterr().out.strip() == "SAT"
    assert run_cli("solve", str(unsat)) == EXIT_UNSAT
    assert capsys.readouterr().out.strip() == "UNSAT"
    assert run_cli("solve", str(bad)) == EXIT_PARSE


def test_solve_handles_past_formulas(tmp_path, capsys):
    f = tmp_path / "past.ltl"
    f.write_text("(P a) & (~ a)\n")  # satisfiable over the integers
    assert run_cli("solve", str(f)) == EXIT_SAT


def test_gen_writes_batch(tmp_path, capsys):
    out = tmp_path / "batch"
    code = run_cli(
        "gen", "--out", str(out), "--F", "3", "--N", "2", "--Lt", "2",
        "--Lc", "3", "--seed", "9", "--flow", "n", "--temporal",
    )
    assert code == 0
    files = sorted(p.name for p in out.iterdir())
    assert files == ["manifest.json", "tbox_0000.kb", "tbox_0001.kb", "tbox_0002.kb"]
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["spec"]["seed"] == 9 and manifest["flow"] == "n"


@pytest.mark.parametrize("flow,jobs", [("n", "1"), ("z", "2")])
def test_bench_csv_schema(tmp_path, flow, jobs):
    out = tmp_path / "bench.csv"
    code = run_cli(
        "bench", "--F", "2", "--N", "1", "--Lt", "1", "--Lc", "2", "--Q", "1",
        "--seed", "1", "--flow", flow, "--jobs", jobs,
        "--cpu-seconds", "30", "--out", str(out),
    )
    assert code == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 3
    for row in rows[1:]:
        rec = dict(zip(CSV_HEADER, row))
        assert rec["flow"] == flow
        assert rec["solver"] == "oracle"
        assert rec["verdict"] in {"SAT", "UNSAT", "TIMEOUT", "FAIL", "SKIPPED"}
        assert rec["qtl-nodes"] and rec["ground-nodes"]
        if flow == "z":
            assert rec["depast-nodes"]
        else:
            assert rec["depast-nodes"] == ""
