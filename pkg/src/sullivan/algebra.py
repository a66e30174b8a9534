"""Free graded-commutative algebras over Q.

A :class:`Monomial` is a tuple of ``(generator, exponent)`` pairs sorted in the
generator well-order ``(degree, index)``.  Odd generators always carry
exponent 1, so square-zero is structural.  A monomial stands for the product
of its factors *in that order*; this fixes the Koszul signs.

An :class:`Element` is a sparse map from monomials to nonzero rationals.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping

from .errors import InputError


class Generator:
    """A named free generator of positive degree.

    Generators compare by their full identity ``(name, degree, index)`` and
    are well-ordered by ``(degree, index)``.
    """

    __slots__ = ("name", "degree", "index", "_hash")

    def __init__(self, name: str, degree: int, index: int):
        if not isinstance(degree, int) or degree < 1:
            raise InputError(f"generator {name!r} must have positive integer degree, got {degree!r}")
        self.name = name
        self.degree = degree
        self.index = index
        self._hash = hash((name, degree, index))

    @property
    def key(self):
        return (self.degree, self.index)

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1

    def __eq__(self, other):
        return (
            isinstance(other, Generator)
            and self.name == other.name
            and self.degree == other.degree
            and self.index == other.index
        )

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return f"Generator({self.name!r}, {self.degree}, {self.index})"

    def __str__(self):
        return self.name


class Monomial(tuple):
    """Sorted tuple of ``(Generator, exponent)`` pairs; the empty tuple is 1."""

    __slots__ = ()

    @property
    def degree(self) -> int:
        return sum(g.degree * e for g, e in self)

    @property
    def length(self) -> int:
        """Word length (number of factors counted with multiplicity)."""
        return sum(e for _, e in self)

    def generators(self):
        return [g for g, _ in self]

    def word(self) -> list:
        out = []
        for g, e in self:
            out.extend([g] * e)
        return out

    def __str__(self):
        if not self:
            return "1"
        return " ".join(g.name if e == 1 else f"{g.name}^{e}" for g, e in self)


ONE = Monomial(())


@lru_cache(maxsize=None)
def _mono_mul(m1: Monomial, m2: Monomial):
    """Product of two monomials as ``(sign, monomial)``; sign 0 means zero."""
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    out = []
    i = j = 0
    sign = 1
    # odd factors of m1 not yet emitted; each odd factor of m2 must cross them
    odd_left = sum(1 for g, _ in m1 if g.odd)
    while i < len(m1) and j < len(m2):
        g1, e1 = m1[i]
        g2, e2 = m2[j]
        if g1 == g2:
            if g1.odd:
                return 0, None
            out.append((g1, e1 + e2))
            i += 1
            j += 1
        elif g1.key < g2.key:
            out.append((g1, e1))
            if g1.odd:
                odd_left -= 1
            i += 1
        else:
            out.append((g2, e2))
            if g2.odd and odd_left % 2:
                sign = -sign
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return sign, Monomial(out)


def normalize_word(word: Iterable[Generator]):
    """Sort a word of generators into canonical order.

    Returns ``(sign, monomial)`` where ``sign`` is the Koszul sign of the
    sorting permutation, or ``(0, None)`` if an odd generator repeats.
    """
    word = list(word)
    sign = 1
    for g in word:
        if g.odd and sum(1 for h in word if h == g) > 1:
            return 0, None
    # count inversions among odd generators
    odds = [g for g in word if g.odd]
    for a, b in combinations(range(len(odds)), 2):
        if odds[a].key > odds[b].key:
            sign = -sign
    counts = {}
    for g in word:
        counts[g] = counts.get(g, 0) + 1
    return sign, Monomial(sorted(counts.items(), key=lambda p: p[0].key))


def monomial_of(*gens: Generator) -> Monomial:
    sign, m = normalize_word(gens)
    if sign != 1:
        raise InputError("word does not normalize with sign +1; build it with Element arithmetic")
    return m


class Element:
    """Sparse Q-linear combination of canonical monomials."""

    __slots__ = ("terms", "truncated")

    def __init__(self, terms: Mapping | None = None, truncated: bool = False):
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}
        self.truncated = truncated

    @classmethod
    def _raw(cls, terms: dict, truncated: bool = False) -> "Element":
        e = cls.__new__(cls)
        e.terms = terms
        e.truncated = truncated
        return e

    # constructors
    @classmethod
    def zero(cls) -> "Element":
        return cls._raw({})

    @classmethod
    def one(cls) -> "Element":
        return cls._raw({ONE: Fraction(1)})

    @classmethod
    def scalar(cls, c) -> "Element":
        c = Fraction(c)
        return cls._raw({ONE: c} if c else {})

    @classmethod
    def gen(cls, g: Generator, coeff=1) -> "Element":
        c = Fraction(coeff)
        return cls._raw({Monomial(((g, 1),)): c} if c else {})

    @classmethod
    def monomial(cls, m: Monomial, coeff=1) -> "Element":
        c = Fraction(coeff)
        return cls._raw({m: c} if c else {})

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def constant(self) -> Fraction:
        return self.coefficient(ONE)

    def degree(self):
        """Common degree of all terms, ``None`` for zero.

        Raises :class:`InputError` if the element is not homogeneous.
        """
        degs = {m.degree for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise InputError(f"element {self} is not homogeneous (degrees {sorted(degs)})")
        return degs.pop()

    def is_homogeneous(self) -> bool:
        return len({m.degree for m in self.terms}) <= 1

    def generators(self) -> set:
        return {g for m in self.terms for g, _ in m}

    def items(self):
        return sorted(self.terms.items(), key=lambda t: _mono_sort_key(t[0]))

    # arithmetic
    def _combine(self, other: "Element", factor) -> "Element":
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + factor * c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Element._raw(out, self.truncated or other.truncated)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, -1)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other._combine(self, -1)

    def __neg__(self):
        return Element._raw({m: -c for m, c in self.terms.items()}, self.truncated)

    def scale(self, c) -> "Element":
        c = Fraction(c)
        if not c:
            return Element._raw({}, self.truncated)
        return Element._raw({m: c * v for m, v in self.terms.items()}, self.truncated)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Element):
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise InputError("negative powers are not defined")
        out = Element.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Element.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Element({self})"

    def __str__(self):
        return format_element(self)


def _coerce(x):
    if isinstance(x, Element):
        return x
    if isinstance(x, (int, Fraction)):
        return Element.scalar(x)
    return NotImplemented


def _mono_sort_key(m: Monomial):
    return (m.degree, tuple((g.key, -e) for g, e in m))


def format_element(x: Element) -> str:
    if not x.terms:
        return "0"
    parts = []
    for m, c in x.items():
        neg = c < 0
        a = -c if neg else c
        if not m:
            body = str(a)
        elif a == 1:
            body = str(m)
        else:
            body = f"{a}*{m}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def multiply(x: Element, y: Element, bound: int | None = None) -> Element:
    """Graded-commutative product; terms above ``bound`` are dropped and flagged."""
    out = {}
    truncated = x.truncated or y.truncated
    for m1, c1 in x.terms.items():
        d1 = m1.degree if bound is not None else 0
        for m2, c2 in y.terms.items():
            if bound is not None and d1 + m2.degree > bound:
                truncated = True
                continue
            sign, m = _mono_mul(m1, m2)
            if not sign:
                continue
            v = out.get(m, 0) + sign * c1 * c2
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return Element._raw(out, truncated)


def truncate(x: Element, bound: int) -> Element:
    kept = {m: c for m, c in x.terms.items() if m.degree <= bound}
    return Element._raw(kept, x.truncated or len(kept) < len(x.terms))


def word_length_part(x: Element, k: int, at_least: bool = False) -> Element:
    """Projection onto word length exactly ``k`` (or ``>= k``)."""
    if at_least:
        keep = {m: c for m, c in x.terms.items() if m.length >= k}
    else:
        keep = {m: c for m, c in x.terms.items() if m.length == k}
    return Element._raw(keep, x.truncated)


def linear_part(x: Element) -> dict:
    """Word-length-1 part as ``{generator: coefficient}``."""
    return {m[0][0]: c for m, c in x.terms.items() if len(m) == 1 and m[0][1] == 1}


def count_factors(m: Monomial, gens) -> int:
    return sum(e for g, e in m if g in gens)


def in_ideal(x: Element, gens, min_count: int = 1) -> bool:
    """True iff every monomial of ``x`` has at least ``min_count`` factors from ``gens``.

    For ``min_count=1`` this is membership in the ideal generated by ``gens``;
    ``min_count=2`` gives the ``(AV) (x) A^{>=2}(gens)`` type ideals.
    """
    gens = set(gens)
    return all(count_factors(m, gens) >= min_count for m in x.terms)


def monomials_outside_ideal(x: Element, gens, min_count: int = 1) -> list:
    gens = set(gens)
    return [m for m in x.terms if count_factors(m, gens) < min_count]


@lru_cache(maxsize=None)
def _monomial_basis(gens: tuple, degree: int) -> tuple:
    if degree == 0:
        return (ONE,)
    if degree < 0 or not gens:
        return ()
    out = []

    def rec(start, remaining, acc):
        if remaining == 0:
            out.append(Monomial(acc))
            return
        for i in range(start, len(gens)):
            g = gens[i]
            if g.degree > remaining:
                continue
            max_e = 1 if g.odd else remaining // g.degree
            for e in range(1, max_e + 1):
                if g.degree * e > remaining:
                    break
                rec(i + 1, remaining - g.degree * e, acc + [(g, e)])

    rec(0, degree, [])
    return tuple(sorted(out, key=_mono_sort_key))


def monomial_basis(generators: Iterable[Generator], degree: int) -> tuple:
    """All canonical monomials of the given degree, in canonical order."""
    gens = tuple(sorted(set(generators), key=lambda g: g.key))
    return _monomial_basis(gens, degree)


def to_vector(x: Element, basis: tuple) -> tuple:
    index = {m: i for i, m in enumerate(basis)}
    v = [Fraction(0)] * len(basis)
    for m, c in x.terms.items():
        try:
            v[index[m]] = c
        except KeyError:
            raise InputError(f"monomial {m} is not in the given basis") from None
    return tuple(v)


def from_vector(v, basis: tuple) -> Element:
    return Element._raw({m: Fraction(c) for m, c in zip(basis, v) if c})


def derive(values: Mapping, degree: int, x: Element) -> Element:
    """Apply the derivation of the given degree determined by ``values`` on generators.

    Generators missing from ``values`` are sent to zero.  Uses
    ``D(xy) = D(x) y + (-1)^{|D||x|} x D(y)``.
    """
    out = Element.zero()
    for m, c in x.terms.items():
        for pos, (g, e) in enumerate(m):
            dg = values.get(g)
            if dg is None or not dg.terms:
                continue
            prefix = Monomial(m[:pos])
            suffix = Monomial(m[pos + 1:])
            sign = -1 if (degree % 2 and prefix.degree % 2) else 1
            rest = Monomial(((g, e - 1),)) if e > 1 else ONE
            coeff = c * e * sign
            term = Element.monomial(prefix, coeff) * (Element.monomial(rest) * dg) * Element.monomial(suffix)
            out = out + term
        if x.truncated:
            out.truncated = True
    return out


def substitute(values: Mapping, x: Element, bound: int | None = None) -> Element:
    """Apply the algebra map determined by generator images ``values``."""
    out = Element.zero()
    cache = {}
    for m, c in x.terms.items():
        img = Element.scalar(c)
        for g, e in m:
            try:
                gv = values[g]
            except KeyError:
                raise InputError(f"no image given for generator {g.name}") from None
            key = (g, e)
            if key not in cache:
                cache[key] = gv ** e
            img = multiply(img, cache[key], bound)
            if not img.terms:
                break
        out = out + img
    if x.truncated:
        out.truncated = True
    return out
