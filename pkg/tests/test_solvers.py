"""Solver profiles, emitters, and the limited subprocess runner."""

from __future__ import annotations

import json
import sys

import pytest

from tdlite.ltl import parse_infix
from tdlite.solvers import (
    PastOperatorPresent,
    ProfileError,
    SolverProfile,
    emit_infix,
    emit_smv,
    load_profiles,
    oracle_profile,
    run_solver,
)


def _profile(**kw):
    base = dict(
        name="p",
        command=("true",),
        input_format="infix-ltl",
        sat_pattern=r"^SAT$",
        unsat_pattern=r"^UNSAT$",
    )
    base.update(kw)
    return SolverProfile(**base)


def test_emit_infix_round_trips_through_the_parser():
    f = parse_infix("(a & (~ b)) & (F (X c))")
    assert parse_infix(emit_infix(f)) is not None
    assert "F" in emit_infix(f)


def test_emitters_reject_past_operators():
    f = parse_infix("P a")
    with pytest.raises(PastOperatorPresent) as e1:
        emit_infix(f)
    with pytest.raises(PastOperatorPresent):
        emit_smv(f)
    assert e1.value.code == "PAST_OPERATOR_PRESENT"


def test_emit_smv_shape():
    text = emit_smv(parse_infix("(b & (~ a)) & (F true)"))
    lines = text.splitlines()
    assert lines[0] == "MODULE main"
    assert lines[1] == "VAR"
    assert lines[2:4] == ["  a : boolean;", "  b : boolean;"]
    assert lines[4].startswith("LTLSPEC !(")
    assert "TRUE" in lines[4] and "!" in lines[4]


def test_emit_smv_without_props_has_no_var_section():
    text = emit_smv(parse_infix("true"))
    assert "VAR" not in text
    assert "LTLSPEC !(TRUE)" in text


def test_profile_rejects_unknown_format():
    with pytest.raises(ProfileError):
        _profile(input_format="dimacs")


def test_load_profiles_always_has_the_oracle(tmp_path):
    profiles = load_profiles(None)
    assert set(profiles) == {"oracle"}
    assert profiles["oracle"].input_format == "infix-ltl"


def test_load_profiles_from_json(tmp_path):
    doc = {
        "profiles": [
            {
                "name": "ext",
                "command": "mysolver --in {input} --to {timeout}",
                "input-format": "smv",
                "sat-pattern": "is satisfiable",
                "unsat-pattern": "is unsatisfiable",
                "cpu-seconds": 30,
                "max-props": 500,
            }
        ]
    }
    path = tmp_path / "solvers.json"
    path.write_text(json.dumps(doc))
    profiles = load_profiles(str(path))
    assert set(profiles) == {"oracle", "ext"}
    ext = profiles["ext"]
    assert ext.command == ("mysolver", "--in", "{input}", "--to", "{timeout}")
    assert ext.cpu_seconds == 30.0
    assert ext.max_props == 500


def test_load_profiles_missing_field(tmp_path):
    path = tmp_path / "solvers.json"
    path.write_text(json.dumps({"profiles": [{"name": "x"}]}))
    with pytest.raises(ProfileError):
        load_profiles(str(path))


def test_oracle_profile_runs_end_to_end():
    sat = run_solver(oracle_profile(), parse_infix("F a"), cpu_seconds=60)
    unsat = run_solver(oracle_profile(), parse_infix("a & (~ a)"), cpu_seconds=60)
    assert sat.verdict == "SAT"
    assert unsat.verdict == "UNSAT"
    assert sat.cpu_ms > 0 and sat.wall_ms > 0
    assert sat.max_memory_bytes > 0
    assert len(sat.output_digest) == 64


def test_max_props_guard_skips():
    prof = _profile(max_props=1)
    r = run_solver(prof, parse_infix("a & b"))
    assert r.verdict == "SKIPPED"


def test_unclassifiable_output_is_a_fail():
    prof = _profile(command=("echo", "gibberish"))
    assert run_solver(prof, parse_infix("a")).verdict == "FAIL"


def test_missing_binary_is_a_fail():
    prof = _profile(command=("/nonexistent/solver", "{input}"))
    assert run_solver(prof, parse_infix("a")).verdict == "FAIL"


def test_ambiguous_output_is_a_fail():
    prof = _profile(
        command=(sys.executable, "-c", "print('SAT'); print('UNSAT')"),
    )
    assert run_solver(prof, parse_infix("a")).verdict == "FAIL"


def test_cpu_limit_yields_timeout():
    prof = _profile(
        command=(sys.executable, "-c", "while True:\n pass"),
        cpu_seconds=1.0,
    )
    r = run_solver(prof, parse_infix("a"))
    assert r.verdict == "TIMEOUT"


def test_sleeping_process_hits_the_wall_clock_backstop():
    # cannot be caught by the CPU rlimit; the kill-timer must fire at
    # roughly 2*cpu + 10 seconds
    prof = _profile(
        command=(sys.executable, "-c", "import time; time.sleep(600)"),
        cpu_seconds=0.5,
    )
    r = run_solver(prof, parse_infix("a"))
    assert r.verdict == "TIMEOUT"
    assert r.wall_ms < 60_000
