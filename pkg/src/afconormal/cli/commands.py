"""Command dispatch: each command maps a problem file to a deterministic report."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .. import arcs as arcmod
from ..conormal import (
    af_exact,
    conormal_space,
    fiber_at,
    join_point_set,
    relative_conormal,
    verify_decomposition,
)
from ..groebner import (
    BudgetExceeded,
    DEFAULT_MAX_STEPS,
    Ideal,
    dimension,
    projective_fiber_dimension,
    settings,
    stats,
)
from ..polycore import DEFAULT_PRECISION
from ..rees import fiber_C_of_y, fiber_Cy, rees_presentation, remark_identity_check, theorem_components_check
from .problem import ProblemError, ProblemFile, load_problem

SCHEMA_VERSION = "1.0"
FILE_COMMANDS = ("gb", "dim", "conormal", "relconormal", "fiber", "join", "decompose", "af-exact",
                 "af-arcs", "whitney-fiber", "rees-fiber", "remark-check", "components-check", "pipeline")
COMMANDS = FILE_COMMANDS + ("trotman",)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BUDGET = 2
EXIT_INCONCLUSIVE = 3


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        raise ProblemError(f"environment variable {name} must be an integer, got {raw!r}") from None


@dataclass
class Flags:
    max_steps: int | None = None
    precision: int | None = None
    arc_degree_bound: int | None = None
    timing: bool = False

    def resolved(self) -> "Flags":
        """Fill unset budgets from AFCONORMAL_* environment variables, then defaults."""
        return Flags(
            self.max_steps if self.max_steps is not None else _env_int("AFCONORMAL_MAX_STEPS", DEFAULT_MAX_STEPS),
            self.precision if self.precision is not None else _env_int("AFCONORMAL_PRECISION", DEFAULT_PRECISION),
            self.arc_degree_bound if self.arc_degree_bound is not None
            else _env_int("AFCONORMAL_ARC_DEGREE_BOUND", arcmod.DEFAULT_DEGREE_BOUND),
            self.timing,
        )


@dataclass
class Report:
    command: str
    input: dict
    status: str
    message: str
    verdict: dict
    budget: dict
    exit_code: int = EXIT_OK
    timing: dict | None = None
    error: dict | None = None

    def as_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "input": dict(self.input),
            "status": self.status,
            "message": self.message,
            "exit_code": self.exit_code,
            "verdict": self.verdict,
            "budget": dict(self.budget),
        }
        if self.error is not None:
            out["error"] = dict(self.error)
        if self.timing is not None:
            out["timing"] = dict(self.timing)
        return out


@dataclass
class _Outcome:
    status: str
    message: str
    verdict: dict = field(default_factory=dict)
    inconclusive: bool = False


def _gb(pf: ProblemFile, flags: Flags) -> _Outcome:
    I = Ideal(pf.equations, pf.vars, pf.order)
    basis = I.groebner_basis()
    return _Outcome("computed", f"reduced Groebner basis with {len(basis)} elements",
                    {"order": pf.order.kind, "basis": [str(g) for g in basis]})


def _dim(pf: ProblemFile, flags: Flags) -> _Outcome:
    d = dimension(Ideal(pf.equations, pf.vars))
    return _Outcome(str(d), f"dimension = {d}", {"dimension": d})


def _conormal(pf: ProblemFile, flags: Flags) -> _Outcome:
    S = pf.space()
    C = conormal_space(S)
    pt = pf.point_or_origin()
    fd = projective_fiber_dimension(C.ideal, pt, C.covector_vars)
    return _Outcome("computed", f"conormal space computed; fiber dimension at the point = {fd}",
                    {"ideal": str(C.ideal), "point": _pt(pt), "fiber": str(fiber_at(C, pt)),
                     "fiber_dimension": fd})


def _relconormal(pf: ProblemFile, flags: Flags) -> _Outcome:
    S = pf.space()
    C = relative_conormal(S)
    pt = pf.point_or_origin()
    fd = projective_fiber_dimension(C.ideal, pt, C.covector_vars)
    return _Outcome("computed", f"relative conormal space computed; fiber dimension at the point = {fd}",
                    {"ideal": str(C.ideal), "point": _pt(pt), "fiber": str(fiber_at(C, pt)),
                     "fiber_dimension": fd})


def _fiber(pf: ProblemFile, flags: Flags) -> _Outcome:
    S = pf.space()
    C = relative_conormal(S) if S.f is not None else conormal_space(S)
    which = "C(X,f)" if S.f is not None else "C(X)"
    pt = pf.point_or_origin()
    fd = projective_fiber_dimension(C.ideal, pt, C.covector_vars)
    return _Outcome(f"dim {fd}", f"fiber of {which} at the point has projective dimension {fd}",
                    {"space": which, "point": _pt(pt), "fiber": str(fiber_at(C, pt)), "fiber_dimension": fd})


def _join(pf: ProblemFile, flags: Flags) -> _Outcome:
    S = pf.space()
    pt = pf.point_or_origin()
    df = S.df_at(pt)
    c0 = fiber_at(conormal_space(S), pt)
    J = join_point_set(df, c0)
    fd = dimension(J) - 1 if not J.is_unit() else -1
    return _Outcome("computed", f"join of <df> with C(X) at the point has projective dimension {fd}",
                    {"point": _pt(pt), "df": [str(c) for c in df], "conormal_fiber": str(c0),
                     "join": str(J), "join_dimension": fd})


def _decompose(pf: ProblemFile, flags: Flags) -> _Outcome:
    rep = verify_decomposition(pf.space(), pf.point_or_origin())
    status = "verified" if rep.equal else "not verified"
    msg = f"decomposition {status}: radical-equal = {str(rep.equal).lower()}"
    return _Outcome(status, msg, rep.as_dict())


def _af_exact(pf: ProblemFile, flags: Flags) -> _Outcome:
    v = af_exact(pf.space())
    status = "holds" if v.holds else "fails"
    msg = f"A_f {status} (exact)"
    if v.witness_covector:
        cov = v.witness_covector["covector"]
        msg += "; witness covector [" + " : ".join(str(cov[x]) for x in pf.vars) + "]"
    return _Outcome(status, msg, v.as_dict())


def _arc_verdicts(pf: ProblemFile, verdicts: dict, what: str) -> _Outcome:
    status = arcmod.combine(v.status for v in verdicts.values())
    body = {"per_parameter": {y: v.as_dict() for y, v in verdicts.items()}}
    msg = f"{what}: {status}"
    for y, v in verdicts.items():
        if v.witness is not None:
            body["witness_arc"] = v.witness.expressions()
            body["witness_covector"] = [str(c) for c in v.covector]
            msg += (f"; witness arc for {y}: {v.witness}, covector ["
                    + " : ".join(str(c) for c in v.covector) + "]")
            break
    return _Outcome(status, msg, body, inconclusive=status == arcmod.INCONCLUSIVE)


def _af_arcs(pf: ProblemFile, flags: Flags) -> _Outcome:
    arcs = list(pf.arcs) or None
    res = arcmod.af_arcs(pf.space(), arcs, degree_bound=flags.arc_degree_bound, precision=flags.precision)
    return _arc_verdicts(pf, res, "A_f along arcs")


def _whitney(pf: ProblemFile, flags: Flags) -> _Outcome:
    arcs = list(pf.arcs) or None
    res = arcmod.whitney_fiber_check(pf.space(), arcs, degree_bound=flags.arc_degree_bound,
                                     precision=flags.precision)
    return _arc_verdicts(pf, res, "Whitney fiber condition")


def _rees_fiber(pf: ProblemFile, flags: Flags) -> _Outcome:
    R = pf.rees_setup()
    P = rees_presentation(R)
    pt = pf.point_or_origin()
    y0 = {y: pt[y] for y in R.y_vars}
    Cy = fiber_Cy(P, R.y_vars, y0)
    Cofy = fiber_C_of_y(R, y0).change_ring(Cy.vars)
    return _Outcome("computed", "fibers of the Rees projection computed",
                    {"y0": _pt(y0), "presentation": str(P.ideal), "Cy": str(Cy), "C_of_y": str(Cofy),
                     "dim_Cy": dimension(Cy), "dim_C_of_y": dimension(Cofy)})


def _saturation_identity(pf: ProblemFile, flags: Flags) -> _Outcome:
    R = pf.rees_setup()
    pt = pf.point_or_origin()
    rep = remark_identity_check(R, {y: pt[y] for y in R.y_vars})
    status = "holds" if rep.identity_holds else "fails"
    msg = f"saturation identity {status}"
    if not rep.plain_equal:
        msg += " (vertical component removed by saturation)"
    return _Outcome(status, msg, rep.as_dict())


def _components(pf: ProblemFile, flags: Flags) -> _Outcome:
    rep = theorem_components_check(pf.rees_setup())
    msg = f"fiber identity: {rep.verdict} (dim c^-1(0) = {rep.fiber_dimension}, r = {rep.r})"
    return _Outcome(rep.verdict, msg, rep.as_dict(), inconclusive=rep.verdict == "inconclusive")


def _pipeline(pf: ProblemFile, flags: Flags) -> _Outcome:
    arcs = list(pf.arcs) or None
    rep = arcmod.main_theorem_pipeline(pf.space(), arcs, degree_bound=flags.arc_degree_bound,
                                       precision=flags.precision)
    if rep.certified:
        status = "certified"
    elif rep.conclusion.startswith("inconclusive"):
        status = "inconclusive"
    else:
        status = "hypothesis failed"
    return _Outcome(status, rep.conclusion, rep.as_dict(), inconclusive=status == "inconclusive")


def trotman_outcome(a: int, b: int, c: int, d: int, precision: int = DEFAULT_PRECISION) -> _Outcome:
    closed = arcmod.trotman_criterion(a, b, c, d)
    S = arcmod.trotman_space(a, b, c, d)
    arc = arcmod.normalization_arc(a, d, precision=precision)
    v = arcmod.whitney_fiber_check(S, [arc])["y"]
    if b > 1:
        reason = "b>1"
    else:
        bound = min(Fraction(d - 1), Fraction(d) - Fraction(d, a))
        reason = f"c={c} {'>' if closed else '<='} min(d-1, d-d/a)={bound}"
    status = "holds" if closed else "fails"
    agree = (v.status == arcmod.HOLDS) == closed and v.status != arcmod.INCONCLUSIVE
    verdict = {"parameters": {"a": a, "b": b, "c": c, "d": d}, "closed_form": closed, "reason": reason,
               "normalization_arc": arc.expressions(), "arc_verdict": v.status, "agree": agree}
    return _Outcome(status, f"{status} ({reason})", verdict,
                    inconclusive=v.status == arcmod.INCONCLUSIVE)


HANDLERS = {
    "gb": _gb, "dim": _dim, "conormal": _conormal, "relconormal": _relconormal, "fiber": _fiber,
    "join": _join, "decompose": _decompose, "af-exact": _af_exact, "af-arcs": _af_arcs,
    "whitney-fiber": _whitney, "rees-fiber": _rees_fiber, "remark-check": _saturation_identity,
    "components-check": _components, "pipeline": _pipeline,
}


def _pt(pt: dict) -> dict:
    return {k: str(v) for k, v in pt.items()}


def _budget(flags: Flags) -> dict:
    snap = stats.snapshot()
    return {"max_steps": flags.max_steps, "precision": flags.precision,
            "arc_degree_bound": flags.arc_degree_bound,
            "steps_used": snap["reduction_steps"], "bases_computed": snap["bases"]}


def run(command: str, target, flags: Flags | None = None) -> Report:
    """Run ``command`` on a problem file path (or trotman parameters) and build a report.

    Input errors and budget exhaustion are reported, not raised.
    """
    flags = (flags or Flags()).resolved()
    old_steps = settings.max_steps
    settings.max_steps = flags.max_steps
    stats.reset()
    start = time.perf_counter()
    inp: dict = {}
    try:
        if command not in COMMANDS:
            raise ProblemError(f"unknown command {command!r}")
        if command == "trotman":
            try:
                a, b, c, d = (int(x) for x in target)
            except (TypeError, ValueError):
                raise ProblemError("trotman needs four integers a b c d") from None
            inp = {"parameters": [a, b, c, d]}
            try:
                out = trotman_outcome(a, b, c, d, flags.precision)
            except ValueError as err:
                raise ProblemError(str(err)) from None
        else:
            pf = load_problem(target, flags.precision)
            inp = {"file": os.path.basename(target), "sha256": pf.digest}
            try:
                out = HANDLERS[command](pf, flags)
            except (ValueError, ArithmeticError) as err:
                if isinstance(err, (BudgetExceeded, ProblemError)):
                    raise
                raise ProblemError(str(err), source=os.path.basename(target)) from None
        code = EXIT_INCONCLUSIVE if out.inconclusive else EXIT_OK
        rep = Report(command, inp, out.status, out.message, out.verdict, _budget(flags), code)
    except BudgetExceeded as err:
        rep = Report(command, inp, "budget exceeded", str(err), {}, _budget(flags), EXIT_BUDGET,
                     error={"kind": "budget", "message": str(err)})
    except ProblemError as err:
        err_dict = {"kind": "input", "message": err.message}
        if err.line is not None:
            err_dict["line"] = err.line
        if err.column is not None:
            err_dict["column"] = err.column
        rep = Report(command, inp, "input error", str(err), {}, _budget(flags), EXIT_INPUT, error=err_dict)
    finally:
        settings.max_steps = old_steps
    if flags.timing:
        rep.timing = {"seconds": round(time.perf_counter() - start, 3)}
    return rep


def render_human(report: Report) -> str:
    """Plain-text rendering; every field comes from the machine-readable report."""
    d = report.as_dict()
    lines = [d["message"], f"command: {d['command']}", f"status: {d['status']}"]
    for k, v in d["input"].items():
        lines.append(f"input.{k}: {_fmt(v)}")
    _walk(d["verdict"], "verdict", lines)
    if "error" in d:
        _walk(d["error"], "error", lines)
    lines.append("budget: " + " ".join(f"{k}={v}" for k, v in d["budget"].items()))
    lines.append(f"exit_code: {d['exit_code']}")
    lines.append(f"schema_version: {d['schema_version']}")
    if "timing" in d:
        lines.append(f"timing: {d['timing']['seconds']}s")
    return "\n".join(lines)


def _fmt(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, list):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _walk(obj, prefix: str, lines: list) -> None:
    if isinstance(obj, dict):
        if not obj:
            lines.append(f"{prefix}: {{}}")
        for k, v in obj.items():
            _walk(v, f"{prefix}.{k}", lines)
    elif isinstance(obj, list) and any(isinstance(x, dict) for x in obj):
        for i, x in enumerate(obj):
            _walk(x, f"{prefix}[{i}]", lines)
    else:
        lines.append(f"{prefix}: {_fmt(obj)}")
