"""Batch front-end: problem files in, certificates out."""

from .commands import COMMANDS, SCHEMA_VERSION, Flags, Report, render_human, run
from .corpus import read_expectations, render_corpus, run_corpus
from .problem import ProblemError, ProblemFile, load_problem, parse_problem

__all__ = [
    "COMMANDS",
    "Flags",
    "ProblemError",
    "ProblemFile",
    "Report",
    "SCHEMA_VERSION",
    "load_problem",
    "parse_problem",
    "read_expectations",
    "render_corpus",
    "render_human",
    "run",
    "run_corpus",
]
