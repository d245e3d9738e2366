"""Bridges to external LTL solvers.

Formulas are emitted in one of two concrete formats — a one-line infix
syntax for tableau/automata tools, or an SMV module using the universal
model trick, where a counterexample to the negated specification is a
model of the formula.  Solvers run as subprocesses under CPU and memory
limits; their output is classified into a verdict by per-profile text
patterns.  The built-in ``oracle`` profile shells out to this package's
own command line, so everything works with no external tools installed.
"""

from __future__ import annotations

import hashlib
import json
import os
import resource
import shlex
import signal
import subprocess
import sys
import tempfile
import threading
import time
import re
from dataclasses import dataclass
from typing import Optional

from .ltl import (
    LAnd,
    LFalse,
    LNot,
    LProp,
    Ltl,
    _TOKEN_OF,
    _spine_conjuncts,
    count_props,
    has_past,
    prop_names,
    to_infix,
)

DEFAULT_CPU_SECONDS = 600.0
DEFAULT_MEMORY_BYTES = 1 << 30


class PastOperatorPresent(ValueError):
    """Raised when a formula with past operators reaches an emitter."""

    code = "PAST_OPERATOR_PRESENT"


class ProfileError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class SolverProfile:
    """How to drive one solver: command template, input format, verdict
    patterns, and resource limits.

    ``command`` is an argv list; ``{input}`` and ``{timeout}`` are
    substituted per run.  ``sat_pattern`` / ``unsat_pattern`` are regular
    expressions applied to the combined output; they must never both match
    a single output.
    """

    name: str
    command: tuple[str, ...]
    input_format: str  # "infix-ltl" | "smv"
    sat_pattern: str
    unsat_pattern: str
    cpu_seconds: float = DEFAULT_CPU_SECONDS
    memory_bytes: int = DEFAULT_MEMORY_BYTES
    max_props: Optional[int] = None

    def __post_init__(self) -> None:
        if self.input_format not in ("infix-ltl", "smv"):
            raise ProfileError(f"unknown input format {self.input_format!r}")


@dataclass(frozen=True, slots=True)
class RunResult:
    verdict: str  # SAT | UNSAT | TIMEOUT | FAIL | SKIPPED
    wall_ms: float
    cpu_ms: float
    max_memory_bytes: int
    output_digest: str


def oracle_profile() -> SolverProfile:
    """The always-available profile running this package's own checker."""
    return SolverProfile(
        name="oracle",
        command=(sys.executable, "-m", "tdlite.cli", "solve", "{input}"),
        input_format="infix-ltl",
        sat_pattern=r"^SAT$",
        unsat_pattern=r"^UNSAT$",
    )


# --- emitters ----------------------------------------------------------------

def emit_infix(f: Ltl) -> str:
    """One-line fully parenthesized infix form of a past-free formula."""
    if has_past(f):
        raise PastOperatorPresent("infix emission requires a past-free formula")
    return to_infix(f)


def emit_smv(f: Ltl) -> str:
    """An SMV module encoding satisfiability of f as model checking.

    One free boolean variable per proposition and no transition
    constraints, so the module's runs are exactly the words over the
    alphabet; the specification asserts ¬f, hence a counterexample is a
    model of f and "specification is false" means satisfiable.
    """
    if has_past(f):
        raise PastOperatorPresent("SMV emission requires a past-free formula")
    lines = ["MODULE main"]
    props = sorted(prop_names(f))
    if props:
        lines.append("VAR")
        lines.extend(f"  {p} : boolean;" for p in props)
    lines.append(f"LTLSPEC !({_smv_expr(f)})")
    return "\n".join(lines) + "\n"


def _smv_expr(f: Ltl) -> str:
    parts: list[str] = []
    stack: list[object] = [f]
    while stack:
        n = stack.pop()
        if isinstance(n, str):
            parts.append(n)
        elif isinstance(n, LFalse):
            parts.append("FALSE")
        elif isinstance(n, LProp):
            parts.append(n.name)
        elif isinstance(n, LNot) and isinstance(n.arg, LFalse):
            parts.append("TRUE")
        elif isinstance(n, LAnd):
            group: list[object] = ["("]
            for i, op in enumerate(_spine_conjuncts(n)):
                if i:
                    group.append(" & ")
                group.append(op)
            group.append(")")
            stack.extend(reversed(group))
        elif isinstance(n, LNot):
            stack.extend([")", n.arg, "(! "])
        else:
            stack.extend([")", n.arg, f"({_TOKEN_OF[type(n)]} "])
    return "".join(parts)


# --- profile files -----------------------------------------------------------

ENV_PROFILE_FILE = "TDLITE_SOLVERS"


def load_profiles(path: Optional[str] = None) -> dict[str, SolverProfile]:
    """Profiles from a JSON file plus the built-in oracle.

    When no path is given, the ``TDLITE_SOLVERS`` environment variable is
    consulted; if that is unset too, only the oracle is available.
    """
    profiles = {"oracle": oracle_profile()}
    if path is None:
        path = os.environ.get(ENV_PROFILE_FILE)
    if not path:
        return profiles
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    for entry in doc.get("profiles", []):
        try:
            prof = SolverProfile(
                name=entry["name"],
                command=tuple(entry["command"]) if isinstance(entry["command"], list)
                else tuple(shlex.split(entry["command"])),
                input_format=entry["input-format"],
                sat_pattern=entry["sat-pattern"],
                unsat_pattern=entry["unsat-pattern"],
                cpu_seconds=float(entry.get("cpu-seconds", DEFAULT_CPU_SECONDS)),
                memory_bytes=int(entry.get("memory-bytes", DEFAULT_MEMORY_BYTES)),
                max_props=entry.get("max-props"),
            )
        except KeyError as e:
            raise ProfileError(f"profile entry missing field {e}") from e
        profiles[prof.name] = prof
    return profiles


# --- running -----------------------------------------------------------------

def _limit_preexec(cpu_seconds: float, memory_bytes: int):
    cpu = max(1, int(cpu_seconds + 0.999))

    def apply() -> None:
        resource.setrlimit(resource.RLIMIT_CPU, (cpu, cpu + 1))
        try:
            resource.setrlimit(resource.RLIMIT_AS, (memory_bytes, memory_bytes))
        except (ValueError, OSError):
            pass
        os.setpgrp()

    return apply


def run_solver(
    profile: SolverProfile,
    f: Ltl,
    cpu_seconds: Optional[float] = None,
    memory_bytes: Optional[int] = None,
    keep_artifacts: bool = False,
    workdir: Optional[str] = None,
) -> RunResult:
    """Emit f, run the profile's command on it under resource limits, and
    classify the outcome.  Never raises: every mishap is a FAIL (or
    TIMEOUT when a limit was hit)."""
    cpu = profile.cpu_seconds if cpu_seconds is None else cpu_seconds
    mem = profile.memory_bytes if memory_bytes is None else memory_bytes

    if profile.max_props is not None and count_props(f) > profile.max_props:
        return RunResult("SKIPPED", 0.0, 0.0, 0, "")

    tmpdir = None
    try:
        text = emit_smv(f) if profile.input_format == "smv" else emit_infix(f) + "\n"
        suffix = ".smv" if profile.input_format == "smv" else ".ltl"
        tmpdir = tempfile.mkdtemp(prefix=f"tdlite-{profile.name}-", dir=workdir)
        in_path = os.path.join(tmpdir, "input" + suffix)
        out_path = os.path.join(tmpdir, "output.txt")
        with open(in_path, "w", encoding="utf-8") as fh:
            fh.write(text)

        argv = [
            a.replace("{input}", in_path).replace("{timeout}", str(int(cpu)))
            for a in profile.command
        ]
        t0 = time.monotonic()
        with open(out_path, "wb") as out_fh:
            proc = subprocess.Popen(
                argv,
                stdout=out_fh,
                stderr=subprocess.STDOUT,
                stdin=subprocess.DEVNULL,
                preexec_fn=_limit_preexec(cpu, mem),
            )
            # the CPU rlimit cannot stop a sleeping process, so add a
            # generous wall-clock backstop on top of it
            timer = threading.Timer(2 * cpu + 10, _kill_group, (proc,))
            timer.start()
            try:
                _, status, rusage = os.wait4(proc.pid, 0)
            finally:
                timer.cancel()
                proc.returncode = 0  # reaped by wait4; silence Popen cleanup
        wall_ms = (time.monotonic() - t0) * 1000.0
        cpu_ms = (rusage.ru_utime + rusage.ru_stime) * 1000.0
        max_mem = rusage.ru_maxrss * 1024

        with open(out_path, "rb") as fh:
            raw = fh.read()
        digest = hashlib.sha256(raw).hexdigest()
        out_text = raw.decode("utf-8", errors="replace")

        verdict = _classify(profile, status, cpu_ms, cpu, out_text)
        return RunResult(verdict, wall_ms, cpu_ms, max_mem, digest)
    except Exception:
        return RunResult("FAIL", 0.0, 0.0, 0, "")
    finally:
        if tmpdir is not None and not keep_artifacts:
            for name in os.listdir(tmpdir):
                try:
                    os.unlink(os.path.join(tmpdir, name))
                except OSError:
                    pass
            try:
                os.rmdir(tmpdir)
            except OSError:
                pass


def _kill_group(proc: subprocess.Popen) -> None:
    try:
        os.killpg(proc.pid, signal.SIGKILL)
    except (OSError, ProcessLookupError):
        pass


def _classify(
    profile: SolverProfile,
    status: int,
    cpu_ms: float,
    cpu_limit: float,
    output: str,
) -> str:
    sat = re.search(profile.sat_pattern, output, re.MULTILINE) is not None
    unsat = re.search(profile.unsat_pattern, output, re.MULTILINE) is not None
    if sat and not unsat:
        return "SAT"
    if unsat and not sat:
        return "UNSAT"
    # no definite answer: a hit resource limit is a timeout, following the
    # convention that running out of memory counts as T/O as well
    if os.WIFSIGNALED(status) and os.WTERMSIG(status) in (
        signal.SIGXCPU,
        signal.SIGKILL,
    ):
        return "TIMEOUT"
    if cpu_ms >= cpu_limit * 1000.0:
        return "TIMEOUT"
    if "MemoryError" in output or "bad_alloc" in output or "out of memory" in output:
        return "TIMEOUT"
    return "FAIL"
