"""Tokenizer and parser for polynomial expressions.

Grammar::

    poly := term (('+' | '-') term)*
    term := [rational '*'] factor+ | rational
    factor := identifier ['^' int]

Factors are juxtaposed (``x1 x2``) or joined with ``*``.  Rationals may be
written ``3`` or ``3/4``.  Identifiers are ``[A-Za-z_][A-Za-z0-9_']*``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable

from .algebra import Element, Generator
from .errors import ParseError

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<id>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*^()]))"
)
IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


def tokenize(text: str, line: int | None = None, col0: int = 0):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col0 + pos + 1)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), col0 + m.start(kind) + 1))
        pos = m.end()
    return tokens


def parse_poly(
    text: str,
    lookup: Callable[[str], Generator],
    line: int | None = None,
    col0: int = 0,
    check_odd_powers: bool = True,
) -> Element:
    """Parse ``text`` into an :class:`Element`; ``lookup`` maps names to generators."""
    tokens = tokenize(text, line, col0)
    if not tokens:
        raise ParseError("empty expression", line, col0 + 1)
    pos = 0
    result = Element.zero()

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None, col0 + len(text) + 1)

    first = True
    while pos < len(tokens):
        sign = 1
        kind, val, col = peek()
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            pos += 1
        elif not first:
            raise ParseError(f"expected '+' or '-', found {val!r}", line, col)
        first = False
        coeff = Fraction(1)
        term = Element.one()
        saw_any = False
        kind, val, col = peek()
        if kind == "num":
            coeff = Fraction(val)
            pos += 1
            saw_any = True
            kind, val, col = peek()
            if kind == "op" and val == "*":
                pos += 1
                kind, val, col = peek()
                if kind != "id":
                    raise ParseError("expected identifier after '*'", line, col)
        while True:
            kind, val, col = peek()
            if kind == "op" and val == "*" and saw_any:
                pos += 1
                kind, val, col = peek()
                if kind != "id":
                    raise ParseError("expected identifier after '*'", line, col)
            if kind != "id":
                break
            try:
                g = lookup(val)
            except KeyError:
                raise ParseError(f"unknown generator {val!r}", line, col) from None
            pos += 1
            exp = 1
            k2, v2, c2 = peek()
            if k2 == "op" and v2 == "^":
                pos += 1
                k3, v3, c3 = peek()
                if k3 != "num" or "/" in v3:
                    raise ParseError("expected integer exponent", line, c3)
                exp = int(v3)
                pos += 1
                if check_odd_powers and g.odd and exp > 1:
                    raise ParseError(f"exponent {exp} > 1 on odd generator {val!r}", line, c3)
            term = term * Element.gen(g) ** exp
            saw_any = True
        if not saw_any:
            raise ParseError(f"expected a term, found {val!r}", line, col)
        result = result + term.scale(sign * coeff)
    return result
