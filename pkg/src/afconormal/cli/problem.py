"""Problem files: line-oriented plain text with named sections.

Example::

    # cusp family, f = w
    [vars]
    y: y
    z: v, w
    [equations]
    w^2 - v^3
    [function]
    w
    [codim]
    1

Sections (all optional except ``vars``):

``[vars]``        ``y: ...`` and ``z: ...`` lines, or one plain comma list (all fiber variables)
``[equations]``   one polynomial per line (the map G; empty means X is the ambient space)
``[function]``    the function f
``[codim]``       expected codimension of X (defaults to the number of equations)
``[order]``       ``degrevlex`` (default), ``lex`` or ``block k`` for ``gb``
``[module]``      ``jacobian`` or one matrix row per line, entries separated by commas
``[S]``           generators of the non-free locus, one per line
``[d]``, ``[e]``  integers (dimension of the fibers, generic rank)
``[point]``       ``var = value`` pairs separated by commas
``[arcs]``        one arc per line: ``var = series in t`` pairs separated by commas
``[assert]``      free-form asserted hypotheses, one per line

``#`` starts a comment.  Polynomials use the polycore grammar.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from fractions import Fraction

from ..arcs import Arc, series_from_string
from ..conormal import SpaceWithFunction
from ..groebner import MonomialOrder
from ..polycore import DEFAULT_PRECISION, ParseError, PolyMap, Polynomial, parse_polynomial
from ..rees import PresentedModule, ReesSetup

SECTIONS = ("vars", "equations", "function", "codim", "order", "module", "S", "d", "e",
            "point", "arcs", "assert")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class ProblemError(ValueError):
    """Input error with a source position (1-based line and column)."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 source: str = "<problem>"):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        where = source
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}")


@dataclass
class _Line:
    number: int
    offset: int
    text: str


@dataclass
class ProblemFile:
    source: str
    digest: str
    y_vars: tuple = ()
    z_vars: tuple = ()
    equations: tuple = ()
    function: Polynomial | None = None
    codim: int | None = None
    order: MonomialOrder = field(default_factory=MonomialOrder.degrevlex)
    module: PresentedModule | None = None
    S: tuple = ()
    d: int | None = None
    e: int | None = None
    point: dict = field(default_factory=dict)
    arcs: tuple = ()
    assertions: tuple = ()
    present: frozenset = frozenset()

    @property
    def vars(self) -> tuple:
        return self.y_vars + self.z_vars

    def space(self) -> SpaceWithFunction:
        codim = self.codim if self.codim is not None else len(self.equations)
        return SpaceWithFunction(PolyMap(self.vars, self.equations), self.function, self.y_vars,
                                 self.z_vars, codim)

    def rees_setup(self) -> ReesSetup:
        if self.module is None:
            raise ProblemError("this command needs a [module] section", source=self.source)
        codim = self.codim if self.codim is not None else len(self.equations)
        d = self.d if self.d is not None else len(self.z_vars) - codim
        e = self.e if self.e is not None else 1
        asserted = {a: True for a in self.assertions}
        return ReesSetup(self.y_vars, self.z_vars, self.equations, self.module, self.S, d, e, asserted)

    def point_or_origin(self) -> dict:
        pt = {v: 0 for v in self.vars}
        pt.update(self.point)
        return pt


def _split(line: _Line, sep: str = ",") -> list[tuple[str, int]]:
    """Split on ``sep`` keeping 1-based columns of each stripped piece."""
    out = []
    start = 0
    text = line.text
    for i, ch in enumerate(text + sep):
        if ch == sep:
            piece = text[start:i]
            stripped = piece.strip()
            if stripped:
                col = line.offset + start + (len(piece) - len(piece.lstrip())) + 1
                out.append((stripped, col))
            start = i + 1
    return out


def _poly(text: str, vars, line: int, col: int, source: str) -> Polynomial:
    try:
        return parse_polynomial(text, vars)
    except ParseError as err:
        raise ProblemError(err.message, line, col + err.pos, source) from None


def _int(lines: list[_Line], name: str, source: str) -> int:
    if len(lines) != 1:
        raise ProblemError(f"[{name}] takes exactly one integer", lines[0].number if lines else None,
                           source=source)
    try:
        return int(lines[0].text.strip())
    except ValueError:
        raise ProblemError(f"[{name}] is not an integer", lines[0].number, lines[0].offset + 1, source) from None


def _assignments(line: _Line, vars, source: str) -> list[tuple[str, str, int]]:
    out = []
    for piece, col in _split(line):
        if "=" not in piece:
            raise ProblemError("expected 'var = value'", line.number, col, source)
        name, _, value = piece.partition("=")
        name = name.strip()
        if name not in vars:
            raise ProblemError(f"unknown variable {name!r}", line.number, col, source)
        vcol = col + piece.index("=") + 1 + (len(value) - len(value.lstrip()))
        out.append((name, value.strip(), vcol))
    return out


def parse_problem(text: str, source: str = "<problem>", precision: int = DEFAULT_PRECISION) -> ProblemFile:
    sections: dict[str, list[_Line]] = {}
    current = None
    for number, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        stripped = body.strip()
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ProblemError("unterminated section header", number, len(body.rstrip()) + 1, source)
            name = stripped[1:-1].strip()
            if name not in SECTIONS:
                raise ProblemError(f"unknown section [{name}]", number, body.index("[") + 2, source)
            if name in sections:
                raise ProblemError(f"duplicate section [{name}]", number, body.index("[") + 1, source)
            sections[name] = []
            current = name
            continue
        if current is None:
            raise ProblemError("content before the first section", number, 1, source)
        offset = len(body) - len(body.lstrip())
        sections[current].append(_Line(number, offset, body.strip()))

    if "vars" not in sections:
        raise ProblemError("missing [vars] section", source=source)
    y_vars: list[str] = []
    z_vars: list[str] = []
    for line in sections["vars"]:
        target = z_vars
        content = line
        m = re.match(r"([yz])\s*:", line.text)
        if m:
            target = y_vars if m.group(1) == "y" else z_vars
            cut = m.end()
            content = _Line(line.number, line.offset + cut, line.text[cut:])
        for name, col in _split(content):
            if not _NAME.match(name) or name == "t":
                raise ProblemError(f"invalid variable name {name!r}", line.number, col, source)
            if name in y_vars or name in z_vars:
                raise ProblemError(f"duplicate variable {name!r}", line.number, col, source)
            target.append(name)
    vars = tuple(y_vars + z_vars)
    if not vars:
        raise ProblemError("no variables declared", source=source)

    pf = ProblemFile(source=source, digest=hashlib.sha256(text.encode()).hexdigest(),
                     y_vars=tuple(y_vars), z_vars=tuple(z_vars), present=frozenset(sections))

    pf.equations = tuple(_poly(l.text, vars, l.number, l.offset + 1, source)
                         for l in sections.get("equations", []))
    if "function" in sections:
        fl = sections["function"]
        if len(fl) != 1:
            raise ProblemError("[function] takes exactly one polynomial",
                               fl[0].number if fl else None, source=source)
        pf.function = _poly(fl[0].text, vars, fl[0].number, fl[0].offset + 1, source)
    if "codim" in sections:
        pf.codim = _int(sections["codim"], "codim", source)
    for key in ("d", "e"):
        if key in sections:
            setattr(pf, key, _int(sections[key], key, source))
    if "order" in sections:
        ol = sections["order"]
        words = ol[0].text.split() if ol else []
        if words == ["degrevlex"]:
            pf.order = MonomialOrder.degrevlex()
        elif words == ["lex"]:
            pf.order = MonomialOrder.lex()
        elif len(words) == 2 and words[0] == "block" and words[1].isdigit():
            pf.order = MonomialOrder.block(int(words[1]))
        else:
            raise ProblemError("order must be degrevlex, lex or 'block k'",
                               ol[0].number if ol else None, source=source)
    if "module" in sections:
        ml = sections["module"]
        if len(ml) == 1 and ml[0].text == "jacobian":
            pf.module = PresentedModule.jacobian_module(PolyMap(vars, pf.equations))
        else:
            rows = [[_poly(e, vars, l.number, c, source) for e, c in _split(l)] for l in ml]
            if not rows or len({len(r) for r in rows}) != 1:
                raise ProblemError("[module] rows must be nonempty and of equal length",
                                   ml[0].number if ml else None, source=source)
            pf.module = PresentedModule(vars, tuple(tuple(r) for r in rows))
    pf.S = tuple(_poly(l.text, vars, l.number, l.offset + 1, source) for l in sections.get("S", []))
    for line in sections.get("point", []):
        for name, value, col in _assignments(line, vars, source):
            try:
                pf.point[name] = Fraction(value)
            except (ValueError, ZeroDivisionError):
                raise ProblemError(f"point coordinate {value!r} is not a rational number",
                                   line.number, col, source) from None
    arcs = []
    for line in sections.get("arcs", []):
        comps = {v: "0" for v in vars}
        for name, value, col in _assignments(line, vars, source):
            try:
                series_from_string(value, precision)
            except ParseError as err:
                raise ProblemError(err.message, line.number, col + err.pos, source) from None
            comps[name] = value
        try:
            arcs.append(Arc.from_strings(vars, [comps[v] for v in vars], precision, label=f"line {line.number}"))
        except ValueError as err:
            raise ProblemError(str(err), line.number, line.offset + 1, source) from None
    for arc, line in zip(arcs, sections.get("arcs", [])):
        if pf.equations and not arc.lies_on(pf.equations):
            raise ProblemError("arc does not lie on the variety", line.number, line.offset + 1, source)
    pf.arcs = tuple(arcs)
    pf.assertions = tuple(l.text for l in sections.get("assert", []))
    return pf


def load_problem(path: str, precision: int = DEFAULT_PRECISION) -> ProblemFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise ProblemError(f"cannot read file: {err.strerror}", source=path) from None
    return parse_problem(text, source=path, precision=precision)
