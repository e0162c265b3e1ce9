"""Corpus runner: problem files with ``.expect`` sidecars listing expected statuses.

A sidecar holds one ``command: expected status`` pair per line (``#`` comments
allowed); ``trotman`` entries take the form ``trotman a b c d: status``.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .commands import COMMANDS, EXIT_OK, SCHEMA_VERSION, Flags, run
from .problem import ProblemError

EXIT_MISMATCH = 4
PROBLEM_SUFFIX = ".prob"
EXPECT_SUFFIX = ".expect"


@dataclass(frozen=True)
class Job:
    problem: str
    command: str
    args: tuple
    expected: str


def read_expectations(path: str) -> list[tuple[str, tuple, str]]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for number, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, sep, expected = line.rpartition(":")
            if not sep or not head.strip() or not expected.strip():
                raise ProblemError("expected 'command: status'", number, 1, path)
            words = head.split()
            if words[0] not in COMMANDS:
                raise ProblemError(f"unknown command {words[0]!r}", number, 1, path)
            out.append((words[0], tuple(words[1:]), expected.strip()))
    return out


def collect_jobs(directory: str) -> list[Job]:
    if not os.path.isdir(directory):
        raise ProblemError("not a directory", source=directory)
    jobs = []
    for name in sorted(os.listdir(directory)):
        if not name.endswith(PROBLEM_SUFFIX):
            continue
        path = os.path.join(directory, name)
        sidecar = path[: -len(PROBLEM_SUFFIX)] + EXPECT_SUFFIX
        if not os.path.exists(sidecar):
            raise ProblemError(f"missing expectation sidecar {os.path.basename(sidecar)}", source=path)
        for command, args, expected in read_expectations(sidecar):
            jobs.append(Job(path, command, args, expected))
    return jobs


def _run_job(job: Job, flags: Flags) -> dict:
    target = job.args if job.command == "trotman" else job.problem
    rep = run(job.command, target, flags)
    label = job.command + ("".join(" " + a for a in job.args))
    return {
        "problem": os.path.basename(job.problem),
        "command": label,
        "expected": job.expected,
        "actual": rep.status,
        "passed": rep.status == job.expected,
        "message": rep.message,
        "exit_code": rep.exit_code,
    }


def run_corpus(directory: str, flags: Flags | None = None, workers: int = 1) -> dict:
    """Run every expectation in ``directory``; the summary is deterministic.

    Entries run in a process pool when ``workers > 1``; results keep the
    sorted file order regardless of completion order.
    """
    flags = (flags or Flags()).resolved()
    flags = Flags(flags.max_steps, flags.precision, flags.arc_degree_bound, timing=False)
    jobs = collect_jobs(directory)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_job, jobs, [flags] * len(jobs)))
    else:
        results = [_run_job(j, flags) for j in jobs]
    failed = sum(not r["passed"] for r in results)
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "run-corpus",
        "directory": os.path.basename(os.path.normpath(directory)),
        "budget": {"max_steps": flags.max_steps, "precision": flags.precision,
                   "arc_degree_bound": flags.arc_degree_bound},
        "total": len(results),
        "passed": len(results) - failed,
        "failed": failed,
        "entries": results,
        "exit_code": EXIT_OK if failed == 0 else EXIT_MISMATCH,
    }


def render_corpus(summary: dict) -> str:
    rows = [("problem", "command", "expected", "actual", "result")]
    for e in summary["entries"]:
        rows.append((e["problem"], e["command"], e["expected"], e["actual"], "PASS" if e["passed"] else "FAIL"))
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    lines.append(f"{summary['passed']}/{summary['total']} passed, {summary['failed']} failed")
    return "\n".join(lines)
