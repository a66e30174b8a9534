"""Reading and writing model-definition files.

The format is line oriented; ``#`` starts a comment::

    bound 16                      # optional default bound for models
    grid 0 -1 1                   # optional homotopy search grid

    model S2
      generator a 2
      generator b 3
      d b = a^2
      bound 10
    end

    morphism g : S2 -> S3         # a map of spaces S2 -> S3 ...
      x |-> b                     # ... given by its model map, on generators of S3
    end

    cdga Q
      generator a 2
      relation a^3
    end

A morphism header names the map of spaces, so the ``|->`` lines give the
model map in the opposite direction: generators of the target space's model
are sent to elements of the source space's model.

``cdga`` blocks describe presented algebras ``A(P)/(relations)`` for the
minimal-model construction; they also accept ``d`` lines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Element, Generator, format_element
from .construction import PresentedCDGA
from .errors import InputError, ParseError
from .models import DEFAULT_BOUND, MinimalModel, Morphism
from .syntax import IDENT, parse_poly

DEFAULT_GRID = (0, -1, 1)

_HEADER_MORPHISM = re.compile(r"morphism\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)\s*$")


@dataclass
class Workspace:
    models: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    cdgas: dict = field(default_factory=dict)
    bound: int = DEFAULT_BOUND
    grid: tuple = DEFAULT_GRID

    def model(self, name: str) -> MinimalModel:
        try:
            return self.models[name]
        except KeyError:
            raise InputError(f"no model named {name!r}") from None

    def morphism(self, name: str) -> Morphism:
        try:
            return self.morphisms[name]
        except KeyError:
            raise InputError(f"no morphism named {name!r}") from None

    def cdga(self, name: str) -> PresentedCDGA:
        try:
            return self.cdgas[name]
        except KeyError:
            raise InputError(f"no cdga named {name!r}") from None

    def names(self) -> set:
        return set(self.models) | set(self.morphisms) | set(self.cdgas)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def _ident(tok: str, line: int, col: int) -> str:
    if not IDENT.match(tok):
        raise ParseError(f"invalid identifier {tok!r}", line, col)
    return tok


def _int(tok: str, line: int, col: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {tok!r}", line, col) from None


class _Block:
    def __init__(self, kind, name, line, extra=None):
        self.kind = kind
        self.name = name
        self.line = line
        self.extra = extra
        self.generators = []  # (name, degree, line, col)
        self.diffs = []  # (gen name, text, line, gen col, text col)
        self.relations = []  # (text, line, col)
        self.assignments = []  # (gen name, text, line, gen col, text col)
        self.bound = None


def parse(text: str) -> Workspace:
    """Parse a workspace; raises :class:`ParseError` with line and column."""
    ws = Workspace()
    block = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        col = indent + 1
        words = body.split()
        head = words[0]
        if block is None:
            if head == "model" or head == "cdga":
                if len(words) != 2:
                    raise ParseError(f"expected '{head} <name>'", lineno, col)
                name = _ident(words[1], lineno, col + body.index(words[1], len(head)))
                if name in ws.names():
                    raise ParseError(f"duplicate name {name!r}", lineno, col)
                block = _Block(head, name, lineno)
            elif head == "morphism":
                m = _HEADER_MORPHISM.match(body)
                if not m:
                    raise ParseError("expected 'morphism <name> : <source> -> <target>'", lineno, col)
                name, src, dst = m.groups()
                for tok in (name, src, dst):
                    _ident(tok, lineno, col + body.index(tok))
                if name in ws.names():
                    raise ParseError(f"duplicate name {name!r}", lineno, col)
                for ref in (src, dst):
                    if ref not in ws.models:
                        raise ParseError(f"unknown model {ref!r}", lineno, col + body.index(ref, len("morphism")))
                block = _Block("morphism", name, lineno, (src, dst))
            elif head == "bound":
                if len(words) != 2:
                    raise ParseError("expected 'bound <N>'", lineno, col)
                ws.bound = _int(words[1], lineno, col + 6, "bound")
            elif head == "grid":
                try:
                    ws.grid = tuple(Fraction(w) for w in words[1:])
                except ValueError:
                    raise ParseError("grid entries must be rationals", lineno, col) from None
                if not ws.grid:
                    raise ParseError("grid must not be empty", lineno, col)
            else:
                raise ParseError(f"unexpected {head!r} outside a block", lineno, col)
            continue

        if body == "end":
            _finish(ws, block)
            block = None
            continue
        if block.kind in ("model", "cdga") and head == "generator":
            if len(words) != 3:
                raise ParseError("expected 'generator <id> <degree>'", lineno, col)
            gname = _ident(words[1], lineno, col + body.index(words[1], 9))
            dcol = col + body.rindex(words[2])
            deg = _int(words[2], lineno, dcol, "degree")
            if deg <= 0:
                raise ParseError(f"degree of {gname} must be positive", lineno, dcol)
            if any(g[0] == gname for g in block.generators):
                raise ParseError(f"duplicate generator {gname!r}", lineno, col)
            block.generators.append((gname, deg, lineno, col))
        elif block.kind in ("model", "cdga") and head == "d":
            m = re.match(r"d\s+(\S+)\s*=\s*(.*)$", body)
            if not m:
                raise ParseError("expected 'd <id> = <poly>'", lineno, col)
            block.diffs.append((m.group(1), m.group(2), lineno, col + m.start(1), col + m.start(2)))
        elif block.kind == "model" and head == "bound":
            if len(words) != 2:
                raise ParseError("expected 'bound <N>'", lineno, col)
            block.bound = _int(words[1], lineno, col + 6, "bound")
            if block.bound < 1:
                raise ParseError("bound must be positive", lineno, col + 6)
        elif block.kind == "cdga" and head == "relation":
            rest = body[len("relation"):]
            block.relations.append((rest.strip(), lineno, col + len("relation") + len(rest) - len(rest.lstrip())))
        elif block.kind == "morphism":
            m = re.match(r"(\S+)\s*\|->\s*(.*)$", body)
            if not m:
                raise ParseError("expected '<id> |-> <poly>'", lineno, col)
            block.assignments.append((m.group(1), m.group(2), lineno, col + m.start(1), col + m.start(2)))
        else:
            raise ParseError(f"unexpected {head!r} in {block.kind} block", lineno, col)
    if block is not None:
        raise ParseError(f"{block.kind} {block.name} is not closed with 'end'", block.line, 1)
    return ws


def _poly(text, lookup, line, col):
    if not text.strip():
        raise ParseError("missing polynomial", line, col)
    return parse_poly(text, lookup, line, col - 1)


def _finish(ws: Workspace, block: _Block):
    if block.kind in ("model", "cdga"):
        gens = [Generator(n, d, i) for i, (n, d, _, _) in enumerate(block.generators)]
        by_name = {g.name: g for g in gens}
        diff = {}
        for gname, text, line, gcol, tcol in block.diffs:
            if gname not in by_name:
                raise ParseError(f"unknown generator {gname!r}", line, gcol)
            g = by_name[gname]
            if g in diff:
                raise ParseError(f"differential of {gname} given twice", line, gcol)
            value = _poly(text, by_name.__getitem__, line, tcol)
            if value and (not value.is_homogeneous() or value.degree() != g.degree + 1):
                raise ParseError(f"d {gname} = {text.strip()} does not have degree {g.degree + 1}", line, tcol)
            diff[g] = value
        if block.kind == "model":
            bound = block.bound if block.bound is not None else ws.bound
            ws.models[block.name] = MinimalModel(block.name, gens, diff, bound)
        else:
            rels = []
            for text, line, col in block.relations:
                r = _poly(text, by_name.__getitem__, line, col)
                if not r or not r.is_homogeneous():
                    raise ParseError("relation must be nonzero and homogeneous", line, col)
                rels.append(r)
            try:
                ws.cdgas[block.name] = PresentedCDGA(block.name, gens, rels, diff)
            except InputError as e:
                raise ParseError(str(e), block.line, 1) from None
        return
    space_src, space_dst = block.extra
    src, dst = ws.models[space_dst], ws.models[space_src]
    values = {}
    for gname, text, line, gcol, tcol in block.assignments:
        if not src.has_gen(gname):
            raise ParseError(f"{gname!r} is not a generator of {src.name}", line, gcol)
        g = src.gen(gname)
        if g in values:
            raise ParseError(f"image of {gname} given twice", line, gcol)
        value = _poly(text, lambda n: dst._by_name[n], line, tcol)
        if value and (not value.is_homogeneous() or value.degree() != g.degree):
            raise ParseError(f"image of {gname} must have degree {g.degree}", line, tcol)
        values[g] = value
    ws.morphisms[block.name] = Morphism(src, dst, values, name=block.name)


def parse_file(path) -> Workspace:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def _fmt(x: Element) -> str:
    return format_element(x) if x else "0"


def serialize_model(m: MinimalModel, default_bound: int | None = DEFAULT_BOUND) -> str:
    lines = [f"model {m.name}"]
    for g in sorted(m.generators, key=lambda g: g.index):
        lines.append(f"  generator {g.name} {g.degree}")
    for g in sorted(m.generators, key=lambda g: g.index):
        if m.d_gen(g):
            lines.append(f"  d {g.name} = {_fmt(m.d_gen(g))}")
    if m.bound != default_bound:
        lines.append(f"  bound {m.bound}")
    lines.append("end")
    return "\n".join(lines)


def serialize_morphism(name: str, f: Morphism) -> str:
    lines = [f"morphism {name} : {f.target.name} -> {f.source.name}"]
    for g in f.source.generators:
        lines.append(f"  {g.name} |-> {_fmt(f.values[g])}")
    lines.append("end")
    return "\n".join(lines)


def serialize_cdga(A: PresentedCDGA) -> str:
    lines = [f"cdga {A.name}"]
    for g in sorted(A.generators, key=lambda g: g.index):
        lines.append(f"  generator {g.name} {g.degree}")
    for g in sorted(A.generators, key=lambda g: g.index):
        if A.free.d_gen(g):
            lines.append(f"  d {g.name} = {_fmt(A.free.d_gen(g))}")
    for r in A.relations:
        lines.append(f"  relation {_fmt(r)}")
    lines.append("end")
    return "\n".join(lines)


def serialize(ws: Workspace) -> str:
    parts = []
    header = []
    if ws.bound != DEFAULT_BOUND:
        header.append(f"bound {ws.bound}")
    if tuple(ws.grid) != tuple(Fraction(c) for c in DEFAULT_GRID):
        header.append("grid " + " ".join(str(c) for c in ws.grid))
    if header:
        parts.append("\n".join(header))
    parts.extend(serialize_model(m, ws.bound) for m in ws.models.values())
    parts.extend(serialize_cdga(a) for a in ws.cdgas.values())
    parts.extend(serialize_morphism(n, f) for n, f in ws.morphisms.items())
    return "\n\n".join(parts) + "\n"
