import json
import os
import shutil

import jsonschema
import pytest

from afconormal.cli import Flags, ProblemError, parse_problem, render_human, run, run_corpus
from afconormal.cli.corpus import EXIT_MISMATCH, render_corpus
from afconormal.cli.main import main

from conftest import CORPUS

SCHEMA_PATH = os.path.join(os.path.dirname(__file__), "..", "src", "afconormal", "cli", "report_schema.json")
with open(SCHEMA_PATH, encoding="utf-8") as _fh:
    SCHEMA = json.load(_fh)


def corpus_file(name):
    return os.path.join(CORPUS, name)


def validate(doc):
    jsonschema.validate(doc, SCHEMA)


# problem-file parsing

@pytest.mark.parametrize("text,line,column", [
    ("[vars]\nx, y\n[equations]\nx^2 + * y\n", 4, 7),
    ("[vars]\nx, y\n[function]\n  x + q\n", 4, 7),
    ("[vars]\nx\n[bogus]\n", 3, 2),
    ("x, y\n", 1, 1),
    ("[vars]\nx, 2y\n", 2, 4),
    ("[vars]\ny: y\nz: z\n[point]\ny = 1/0\n", 5, 5),
    ("[vars]\nx, y\n[arcs]\nx = t, y = t^2\n[equations]\ny - x^3\n", 4, 1),
    ("[vars]\nx, y\n[arcs]\nx = t, y = t^^2\n", 4, 14),
])
def test_parse_errors_carry_line_and_column(text, line, column):
    with pytest.raises(ProblemError) as info:
        parse_problem(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_missing_vars_section():
    with pytest.raises(ProblemError):
        parse_problem("[equations]\n")


def test_problem_round_trip():
    with open(corpus_file("trotman_2213.prob"), encoding="utf-8") as fh:
        pf = parse_problem(fh.read())
    assert pf.y_vars == ("y",) and pf.z_vars == ("v", "w")
    assert len(pf.arcs) == 2
    assert str(pf.arcs[0]) == "(y=t, v=i*t, w=0)"
    assert pf.space().codim == 1


# exit codes

def test_exit_code_ok():
    rep = run("dim", corpus_file("umbrella_ideal.prob"))
    assert (rep.exit_code, rep.status) == (0, "2")


def test_exit_code_input_error(tmp_path):
    bad = tmp_path / "bad.prob"
    bad.write_text("[vars]\nx, y\n[equations]\nx^2 + * y\n")
    rep = run("dim", str(bad))
    assert rep.exit_code == 1
    assert rep.error == {"kind": "input", "message": "unexpected '*'", "line": 4, "column": 7}
    assert run("dim", str(tmp_path / "missing.prob")).exit_code == 1


def test_exit_code_budget():
    rep = run("decompose", corpus_file("umbrella_z.prob"), Flags(max_steps=20))
    assert rep.exit_code == 2
    assert rep.error["kind"] == "budget"


def test_exit_code_inconclusive():
    rep = run("af-arcs", corpus_file("submersion.prob"), Flags(precision=3, arc_degree_bound=3))
    assert rep.exit_code == 3
    assert rep.status == "inconclusive"


def test_verdict_false_is_still_exit_zero():
    rep = run("af-exact", corpus_file("af_fail_yz.prob"))
    assert (rep.exit_code, rep.status) == (0, "fails")


def test_missing_module_is_input_error():
    assert run("remark-check", corpus_file("submersion.prob")).exit_code == 1


def test_env_overrides(monkeypatch):
    monkeypatch.setenv("AFCONORMAL_PRECISION", "3")
    monkeypatch.setenv("AFCONORMAL_ARC_DEGREE_BOUND", "3")
    assert run("af-arcs", corpus_file("submersion.prob")).exit_code == 3
    assert Flags(precision=70).resolved().precision == 70


# reports

REPORT_CASES = [
    ("gb", "umbrella_ideal.prob"),
    ("dim", "cusp_y.prob"),
    ("conormal", "cusp_y.prob"),
    ("relconormal", "plane_m2.prob"),
    ("fiber", "plane_m2.prob"),
    ("join", "cusp_y.prob"),
    ("decompose", "cusp_y.prob"),
    ("af-exact", "af_fail_yz.prob"),
    ("af-arcs", "af_fail_yz.prob"),
    ("whitney-fiber", "trotman_2113.prob"),
    ("rees-fiber", "rees_yz.prob"),
    ("remark-check", "rees_yz.prob"),
    ("components-check", "rees_free.prob"),
    ("pipeline", "cusp_product_w.prob"),
]


@pytest.mark.parametrize("command,name", REPORT_CASES)
def test_json_validates_and_human_fields_appear(command, name):
    rep = run(command, corpus_file(name), Flags(timing=True))
    doc = json.loads(json.dumps(rep.as_dict()))
    validate(doc)
    assert "timing" in doc
    flat = json.dumps(doc)
    for line in render_human(rep).splitlines()[1:]:
        key, _, value = line.partition(": ")
        leaf = key.rsplit(".", 1)[-1].split("[")[0]
        if key in ("budget", "timing"):
            continue
        assert f'"{leaf}"' in flat, line
    assert doc["message"] == render_human(rep).splitlines()[0]


def test_trotman_command():
    rep = run("trotman", (2, 2, 1, 3))
    assert rep.message == "holds (b>1)"
    validate(rep.as_dict())
    assert run("trotman", (2, 1, 1, 2)).status == "fails"
    assert run("trotman", (1, 1, 1, 1)).exit_code == 1


def test_reports_are_deterministic():
    for command, name in REPORT_CASES[:8]:
        a = json.dumps(run(command, corpus_file(name)).as_dict(), sort_keys=True)
        b = json.dumps(run(command, corpus_file(name)).as_dict(), sort_keys=True)
        assert a == b


def test_witness_arc_and_covector_reported():
    rep = run("af-arcs", corpus_file("trotman_2213.prob"))
    assert rep.status == "fails"
    assert rep.verdict["witness_arc"] == ["t", "i*t", "0"]
    assert rep.verdict["witness_covector"] == ["-2*i", "2", "0"]


# main entry point

def test_main_trotman_prints_holds(capsys):
    assert main(["trotman", "2", "2", "1", "3"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "holds (b>1)"


def test_main_json(capsys):
    assert main(["dim", corpus_file("umbrella_ideal.prob"), "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    validate(doc)
    assert doc["status"] == "2"


def test_main_parse_error_to_stderr(tmp_path, capsys):
    bad = tmp_path / "bad.prob"
    bad.write_text("[vars]\nx\n[function]\nx +\n")
    assert main(["dim", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "bad.prob:4:4" in err


# corpus runner

def test_full_corpus_passes():
    summary = run_corpus(CORPUS, workers=2)
    validate(summary)
    failures = [e for e in summary["entries"] if not e["passed"]]
    assert failures == []
    assert summary["exit_code"] == 0
    assert summary["total"] >= 50


def test_perturbed_expectation_gives_one_mismatch(tmp_path):
    work = tmp_path / "corpus"
    shutil.copytree(CORPUS, work)
    sidecar = work / "cusp_y.expect"
    text = sidecar.read_text()
    assert "dim: 1" in text
    sidecar.write_text(text.replace("dim: 1", "dim: 7"))
    summary = run_corpus(str(work))
    bad = [e for e in summary["entries"] if not e["passed"]]
    assert len(bad) == 1
    assert (bad[0]["problem"], bad[0]["command"], bad[0]["actual"]) == ("cusp_y.prob", "dim", "1")
    assert summary["exit_code"] == EXIT_MISMATCH
    assert main(["run-corpus", str(work)]) == EXIT_MISMATCH
    assert "1 failed" in render_corpus(summary)


def test_empty_directory(tmp_path, capsys):
    summary = run_corpus(str(tmp_path))
    assert (summary["total"], summary["exit_code"]) == (0, 0)
    validate(summary)
    assert main(["run-corpus", str(tmp_path)]) == 0
    assert "0/0 passed" in capsys.readouterr().out


def test_missing_sidecar_is_an_error(tmp_path):
    shutil.copy(corpus_file("cusp_y.prob"), tmp_path / "cusp_y.prob")
    with pytest.raises(ProblemError):
        run_corpus(str(tmp_path))
    assert main(["run-corpus", str(tmp_path)]) == 1


def test_corpus_runs_are_byte_identical():
    a = json.dumps(run_corpus(CORPUS, workers=2), sort_keys=True)
    b = json.dumps(run_corpus(CORPUS, workers=1), sort_keys=True)
    assert a == b
