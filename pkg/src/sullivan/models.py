"""Minimal models, derivations and morphisms.

A :class:`MinimalModel` is a free CDGA ``(AV, d)`` given by its generators
and the values of ``d`` on them, together with a degree bound ``N`` up to
which results are certified.  Derivations and morphisms are likewise stored
as generator assignments and extended by the Leibniz rule, resp.
multiplicatively.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .algebra import (
    Element,
    Generator,
    derive,
    in_ideal,
    linear_part,
    monomial_basis,
    substitute,
    to_vector,
)
from .errors import InputError, InternalError, PreconditionError
from .syntax import IDENT, parse_poly

DEFAULT_BOUND = 16


class MinimalModel:
    """Free graded-commutative algebra with a differential given on generators."""

    def __init__(self, name: str, generators: Sequence[Generator], differential: Mapping | None = None,
                 bound: int = DEFAULT_BOUND):
        gens = sorted(generators, key=lambda g: g.key)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise InputError(f"duplicate generator names in {name}: {', '.join(dup)}")
        if len({g.key for g in gens}) != len(gens):
            raise InputError(f"generator well-order keys collide in {name}")
        self.name = name
        self.generators = tuple(gens)
        self.bound = bound
        self._by_name = {g.name: g for g in gens}
        self.differential = {}
        for g, v in (differential or {}).items():
            if isinstance(g, str):
                g = self.gen(g)
            if isinstance(v, str):
                v = self.element(v)
            if g not in self._by_name.values():
                raise InputError(f"differential given on unknown generator {g}")
            if v:
                self.differential[g] = v

    @classmethod
    def build(cls, name: str, gens: Iterable, differential: Mapping | None = None,
              bound: int = DEFAULT_BOUND) -> "MinimalModel":
        """Convenience constructor from ``[(name, degree), ...]`` and string differentials."""
        generators = [Generator(n, d, i) for i, (n, d) in enumerate(gens)]
        m = cls(name, generators, None, bound)
        diff = {m.gen(k): m.element(v) if isinstance(v, str) else v for k, v in (differential or {}).items()}
        return cls(name, generators, diff, bound)

    def gen(self, name: str) -> Generator:
        try:
            return self._by_name[name]
        except KeyError:
            raise InputError(f"model {self.name} has no generator {name!r}") from None

    def has_gen(self, name: str) -> bool:
        return name in self._by_name

    def element(self, text: str) -> Element:
        return parse_poly(text, lambda n: self._by_name[n])

    def d(self, x) -> Element:
        return apply_differential(self, x)

    def d_gen(self, g: Generator) -> Element:
        return self.differential.get(g, Element.zero())

    def generators_of_degree(self, n: int) -> list:
        return [g for g in self.generators if g.degree == n]

    def basis(self, n: int) -> tuple:
        return monomial_basis(self.generators, n)

    @property
    def max_generator_degree(self) -> int:
        return max((g.degree for g in self.generators), default=0)

    def has_zero_differential(self) -> bool:
        return not any(self.differential.values())

    def same_algebra(self, other: "MinimalModel") -> bool:
        return (
            self.generators == other.generators
            and {g: v for g, v in self.differential.items() if v} == {g: v for g, v in other.differential.items() if v}
        )

    def renamed(self, name: str) -> "MinimalModel":
        return MinimalModel(name, self.generators, self.differential, self.bound)

    def with_bound(self, bound: int) -> "MinimalModel":
        return MinimalModel(self.name, self.generators, self.differential, bound)

    def __repr__(self):
        gens = ", ".join(f"{g.name}_{g.degree}" for g in self.generators)
        ds = "; ".join(f"d{g.name} = {v}" for g, v in self.differential.items() if v)
        return f"MinimalModel({self.name}: A({gens}{'; ' + ds if ds else ''}), bound={self.bound})"


def apply_differential(m: MinimalModel, x: Element) -> Element:
    _check_in_algebra(m, x)
    return derive(m.differential, 1, x)


def _check_in_algebra(m: MinimalModel, x: Element):
    known = set(m.generators)
    for g in x.generators():
        if g not in known:
            raise InputError(f"generator {g.name} does not belong to model {m.name}")


@dataclass
class Violation:
    kind: str
    generator: str | None
    message: str


@dataclass
class ValidationReport:
    model: str
    violations: list = field(default_factory=list)
    certified_up_to: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set:
        return {v.kind for v in self.violations}


def validate_model(m: MinimalModel) -> ValidationReport:
    """Check the minimal-model invariants; violations are reported, not raised."""
    report = ValidationReport(m.name, certified_up_to=m.bound)
    order = {g: i for i, g in enumerate(m.generators)}
    known = set(m.generators)
    for g in m.generators:
        if g.degree > m.bound:
            report.violations.append(Violation("bound", g.name, f"degree {g.degree} exceeds bound {m.bound}"))
        dg = m.d_gen(g)
        if not dg:
            continue
        foreign = [h for h in dg.generators() if h not in known]
        if foreign:
            report.violations.append(
                Violation("unknown", g.name, f"d({g.name}) uses unknown generators {[h.name for h in foreign]}"))
            continue
        if not dg.is_homogeneous() or dg.degree() != g.degree + 1:
            report.violations.append(
                Violation("degree", g.name, f"d({g.name}) = {dg} does not have degree {g.degree + 1}"))
        short = [mono for mono in dg.terms if mono.length < 2]
        if short:
            report.violations.append(
                Violation("decomposable", g.name, f"d({g.name}) has terms of word length < 2: "
                          + ", ".join(str(s) for s in short)))
        later = [h for h in dg.generators() if order[h] >= order[g]]
        if later:
            report.violations.append(
                Violation("nilpotence", g.name,
                          f"d({g.name}) involves generators not earlier in the well-order: "
                          + ", ".join(h.name for h in later)))
    if not report.violations:
        for g in m.generators:
            dd = m.d(m.d_gen(g))
            if dd:
                report.violations.append(Violation("d_squared", g.name, f"d(d({g.name})) = {dd} != 0"))
    return report


class Derivation:
    """Derivation of a model of the given degree, determined by generator values."""

    def __init__(self, source: MinimalModel, degree: int, values: Mapping):
        self.source = source
        self.degree = degree
        self.values = {}
        for g, v in values.items():
            if isinstance(g, str):
                g = source.gen(g)
            if isinstance(v, (int, Fraction)):
                v = Element.scalar(v)
            elif isinstance(v, str):
                v = source.element(v)
            if v:
                if v.degree() != g.degree + degree:
                    raise InputError(
                        f"derivation value on {g.name} has degree {v.degree()}, expected {g.degree + degree}")
                self.values[g] = v

    def __call__(self, x: Element) -> Element:
        return derive(self.values, self.degree, x)

    def value(self, g: Generator) -> Element:
        return self.values.get(g, Element.zero())

    def functional(self, gens: Sequence[Generator]) -> tuple:
        """Constant parts of the values on ``gens`` (the dual functional)."""
        return tuple(self.value(g).constant() for g in gens)

    def scale(self, c) -> "Derivation":
        return Derivation(self.source, self.degree, {g: v.scale(c) for g, v in self.values.items()})

    def __add__(self, other: "Derivation") -> "Derivation":
        vals = dict(self.values)
        for g, v in other.values.items():
            vals[g] = vals.get(g, Element.zero()) + v
        return Derivation(self.source, self.degree, vals)

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.degree == other.degree and self.values == other.values

    def __repr__(self):
        vals = ", ".join(f"{g.name}->{v}" for g, v in sorted(self.values.items(), key=lambda t: t[0].key))
        return f"Derivation(deg {self.degree}: {vals})"


def apply_derivation(theta: Derivation, x: Element) -> Element:
    _check_in_algebra(theta.source, x)
    return theta(x)


def check_commutes(theta: Derivation, sign: int) -> bool:
    """True iff ``d(theta(v)) == sign * theta(d(v))`` on every generator."""
    m = theta.source
    return all(m.d(theta.value(g)) == theta(m.d_gen(g)).scale(sign) for g in m.generators)


class Morphism:
    """Algebra map ``source -> target`` given by images of source generators."""

    def __init__(self, source: MinimalModel, target: MinimalModel, values: Mapping, name: str | None = None):
        self.source = source
        self.target = target
        self.name = name
        self.values = {}
        for g in source.generators:
            v = values.get(g, values.get(g.name, Element.zero()))
            if isinstance(v, (int, Fraction)):
                v = Element.scalar(v)
            elif isinstance(v, str):
                v = target.element(v)
            self.values[g] = v
        for k in values:
            name_k = k if isinstance(k, str) else k.name
            source.gen(name_k)

    def __call__(self, x: Element) -> Element:
        return substitute(self.values, x)

    def value(self, g) -> Element:
        if isinstance(g, str):
            g = self.source.gen(g)
        return self.values[g]

    def degree_errors(self) -> list:
        bad = []
        for g, v in self.values.items():
            if v and (not v.is_homogeneous() or v.degree() != g.degree):
                bad.append(g.name)
        return bad

    def commutes(self) -> bool:
        return not self.commutation_failures()

    def commutation_failures(self) -> list:
        out = []
        for g in self.source.generators:
            if self(self.source.d_gen(g)) != self.target.d(self.values[g]):
                out.append(g.name)
        return out

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return (self.source.same_algebra(other.source) and self.target.same_algebra(other.target)
                and all(self.values[g] == other.values[g] for g in self.source.generators))

    def __repr__(self):
        vals = ", ".join(f"{g.name}->{v}" for g, v in self.values.items())
        return f"Morphism({self.source.name} -> {self.target.name}: {vals})"


def identity(m: MinimalModel) -> Morphism:
    return Morphism(m, m, {g: Element.gen(g) for g in m.generators}, name=f"id_{m.name}")


def apply_morphism(f: Morphism, x: Element) -> Element:
    _check_in_algebra(f.source, x)
    return f(x)


def validate_morphism(f: Morphism) -> list:
    problems = []
    for g in f.degree_errors():
        problems.append(f"image of {g} has the wrong degree")
    for v in f.values.values():
        try:
            _check_in_algebra(f.target, v)
        except InputError as e:
            problems.append(str(e))
    if not problems:
        for g in f.commutation_failures():
            problems.append(f"does not commute with d on {g}")
    return problems


def compose(g: Morphism, f: Morphism) -> Morphism:
    """``g o f``; requires ``g.source`` to be the algebra ``f.target``."""
    if not g.source.same_algebra(f.target):
        raise InputError(f"cannot compose: {g.source.name} is not the target {f.target.name}")
    h = Morphism(f.source, g.target, {x: g(v) for x, v in f.values.items()})
    if f.commutes() and g.commutes() and not h.commutes():
        raise InternalError("composite of DGA maps does not commute with d")
    return h


@dataclass
class DegreeBlock:
    degree: int
    source_gens: list
    target_gens: list
    matrix: linalg.RationalMatrix
    rank: int
    image_basis: list


@dataclass
class IndecomposablesMap:
    blocks: dict

    def rank(self) -> int:
        return sum(b.rank for b in self.blocks.values())

    def rank_in(self, n: int) -> int:
        b = self.blocks.get(n)
        return b.rank if b else 0


def indecomposables_map(f: Morphism) -> IndecomposablesMap:
    """Linear parts of ``f`` on generators, one matrix per degree.

    Rows are target generators, columns source generators.
    """
    blocks = {}
    degrees = sorted({g.degree for g in f.source.generators} | {g.degree for g in f.target.generators})
    for n in degrees:
        src = f.source.generators_of_degree(n)
        tgt = f.target.generators_of_degree(n)
        cols = []
        for s in src:
            lin = linear_part(f.values[s])
            cols.append([lin.get(t, Fraction(0)) for t in tgt])
        if tgt and src:
            mat = linalg.RationalMatrix.from_columns(cols, len(tgt))
            img = linalg.image_basis(mat)
        else:
            mat = linalg.RationalMatrix.zeros(len(tgt), len(src))
            img = []
        blocks[n] = DegreeBlock(n, src, tgt, mat, len(img), img)
    return IndecomposablesMap(blocks)


def tensor_product(a: MinimalModel, b: MinimalModel, name: str | None = None):
    """``a (x) b``; returns ``(model, inclusion_of_a, inclusion_of_b)``.

    Generators of ``a`` are reused as they are; those of ``b`` are re-indexed
    after them.
    """
    clash = {g.name for g in a.generators} & {g.name for g in b.generators}
    if clash:
        raise InputError(f"generator names clash in tensor product: {sorted(clash)}")
    offset = max((g.index for g in a.generators), default=-1) + 1
    bmap = {g: Generator(g.name, g.degree, offset + i) for i, g in enumerate(b.generators)}
    bvals = {g: Element.gen(h) for g, h in bmap.items()}
    diff = dict(a.differential)
    for g, v in b.differential.items():
        diff[bmap[g]] = substitute(bvals, v)
    gens = list(a.generators) + list(bmap.values())
    model = MinimalModel(name or f"{a.name}x{b.name}", gens, diff, min(a.bound, b.bound))
    ia = Morphism(a, model, {g: Element.gen(g) for g in a.generators})
    ib = Morphism(b, model, bvals)
    return model, ia, ib


@dataclass
class GeneratorChange:
    """Result of a change of generators: the new model and the two isomorphisms."""

    model: MinimalModel
    to_old: Morphism
    from_old: Morphism

    def transport_derivation(self, theta: Derivation) -> Derivation:
        vals = {g: self.from_old(theta(self.to_old.values[g])) for g in self.model.generators}
        return Derivation(self.model, theta.degree, vals)


def change_generators(m: MinimalModel, new_defs: Mapping, name: str | None = None) -> GeneratorChange:
    """Replace generators of ``m`` by new ones defined as elements of ``m``.

    ``new_defs`` maps an old generator to ``(new_name, expression)`` where the
    expression is a homogeneous element of the old algebra of the same
    degree.  Old generators not mentioned are kept.  In each degree the linear
    parts of the new generators must be invertible; new generators inherit the
    well-order slot of the generator they replace.
    """
    defs = {}
    for g in m.generators:
        if g in new_defs:
            nm, expr = new_defs[g]
            if isinstance(expr, str):
                expr = m.element(expr)
            if expr.degree() != g.degree:
                raise InputError(f"new generator {nm} must have degree {g.degree}")
            defs[g] = (nm, expr)
        else:
            defs[g] = (g.name, Element.gen(g))
    new_gens = {g: Generator(nm, g.degree, g.index) for g, (nm, _) in defs.items()}
    to_old_vals = {new_gens[g]: expr for g, (_, expr) in defs.items()}
    from_old_vals = {}
    for n in sorted({g.degree for g in m.generators}):
        olds = m.generators_of_degree(n)
        news = [new_gens[g] for g in olds]
        rows = []
        rhs = []
        for g in olds:
            expr = defs[g][1]
            lin = linear_part(expr)
            rows.append([lin.get(h, Fraction(0)) for h in olds])
            decomp = expr - Element({mm: c for mm, c in expr.terms.items() if mm.length == 1})
            rhs.append(Element.gen(new_gens[g]) - substitute(from_old_vals, decomp))
        mat = linalg.RationalMatrix.from_rows(rows, len(olds))
        if mat.rank() != len(olds):
            raise InputError(f"change of generators is not invertible in degree {n}")
        # rows: new_j = sum_i A[j][i] old_i + decomp_j  =>  old = A^{-1} (new - decomp)
        for i, g in enumerate(olds):
            e_i = [Fraction(int(k == i)) for k in range(len(olds))]
            # coefficient vector c with A^T c = e_i gives old_i = sum_j c_j rhs_j
            sol = linalg.solve(mat.transpose(), e_i)
            val = Element.zero()
            for c, r in zip(sol.particular, rhs):
                if c:
                    val = val + r.scale(c)
            from_old_vals[g] = val
        del news
    new_diff = {}
    for g, (nm, expr) in defs.items():
        new_diff[new_gens[g]] = substitute(from_old_vals, m.d(expr))
    new_model = MinimalModel(name or m.name, list(new_gens.values()), new_diff, m.bound)
    to_old = Morphism(new_model, m, to_old_vals)
    from_old = Morphism(m, new_model, from_old_vals)
    return GeneratorChange(new_model, to_old, from_old)


def check_inverse(f: Morphism, g: Morphism) -> list:
    """Generators on which ``g o f`` or ``f o g`` fails to be the identity."""
    bad = []
    for x in f.source.generators:
        if g(f.values[x]) != Element.gen(x):
            bad.append(x.name)
    for y in g.source.generators:
        if f(g.values[y]) != Element.gen(y):
            bad.append(y.name)
    return bad


@dataclass
class H0NormalForm:
    """Morphism between zero-differential models rewritten in adapted generators."""

    morphism: Morphism
    V: list
    R: list
    S: list
    source_change: GeneratorChange
    target_change: GeneratorChange

    def recovers(self, original: Morphism) -> bool:
        """The rewritten map, conjugated back, equals ``original``."""
        back = compose(self.target_change.to_old, compose(self.morphism, self.source_change.from_old))
        return back == original


def h0_normal_form(f: Morphism) -> H0NormalForm:
    """Normal form of a map between zero-differential models.

    New source generators ``V + R`` and target generators ``V + S`` with
    ``f(v) = v``, ``Q(f)`` injective on ``V`` and ``f(R)`` decomposable and in
    the ideal generated by ``S``.  ``R`` is first taken as the kernel of
    ``Q(f)``; then each ``r`` becomes ``r - a`` where ``a`` is the part of
    ``f(r)`` lying in the subalgebra generated by ``V``.
    """
    if not f.source.has_zero_differential() or not f.target.has_zero_differential():
        raise PreconditionError("h0_normal_form needs models with zero differential")
    q = indecomposables_map(f)
    V, S, R_lin, slots = [], [], {}, []
    for n, block in sorted(q.blocks.items()):
        src, tgt = block.source_gens, block.target_gens
        _, pivots = linalg.rref(block.matrix)
        V.extend(src[p] for p in pivots)
        for vec in linalg.kernel_basis(block.matrix):
            free = next(k for k, c in enumerate(vec) if c and k not in pivots)
            R_lin[src[free]] = sum((Element.gen(g, c) for c, g in zip(vec, src) if c), Element.zero())
        units = [tuple(Fraction(int(k == j)) for k in range(len(tgt))) for j in range(len(tgt))]
        s_vecs = linalg.quotient_basis([block.matrix.column(p) for p in pivots], units)
        s_gens = [tgt[v.index(1)] for v in s_vecs]
        S.extend(s_gens)
        slots.extend(zip([t for t in tgt if t not in s_gens], [src[p] for p in pivots]))
    kept = {s.name for s in S}
    tgt_defs = {t: (v.name if v.name not in kept else v.name + "'", f.values[v]) for t, v in slots}
    target_change = change_generators(f.target, tgt_defs, name=f.target.name)
    new_tgt = target_change.model
    v_image = {v: new_tgt.gen(tgt_defs[t][0]) for t, v in slots}
    v_back = {t: Element.gen(v) for v, t in v_image.items()}
    src_defs = {}
    for g, expr in R_lin.items():
        img = target_change.from_old(f(expr))
        pure_v = Element({mm: c for mm, c in img.terms.items() if all(h in v_back for h, _ in mm)})
        src_defs[g] = (g.name, expr - substitute(v_back, pure_v))
    source_change = change_generators(f.source, src_defs, name=f.source.name)
    new_src = source_change.model
    phi = Morphism(new_src, new_tgt,
                   {g: target_change.from_old(f(source_change.to_old.values[g])) for g in new_src.generators})
    V_new = [new_src.gen(v.name) for v in V]
    R_new = [new_src.gen(g.name) for g in R_lin]
    S_new = [new_tgt.gen(s.name) for s in S]
    for v, v_old in zip(V_new, V):
        if phi.values[v] != Element.gen(v_image[v_old]):
            raise InternalError(f"normal form does not fix {v.name}")
    for r in R_new:
        img = phi.values[r]
        if any(mm.length < 2 for mm in img.terms) or not in_ideal(img, S_new, 1):
            raise InternalError(f"normal form image of {r.name} is not decomposable in the S-ideal")
    return H0NormalForm(phi, V_new, R_new, S_new, source_change, target_change)


def name_ok(name: str) -> bool:
    return bool(IDENT.match(name))


def degreewise_matrix(m: MinimalModel, n: int):
    """Matrix of ``d: (AV)^n -> (AV)^{n+1}`` in monomial bases (rows = target)."""
    src = m.basis(n)
    tgt = m.basis(n + 1)
    cols = [to_vector(m.d(Element.monomial(b)), tgt) for b in src]
    if not tgt:
        return linalg.RationalMatrix.zeros(0, len(src)), src, tgt
    if not src:
        return linalg.RationalMatrix.zeros(len(tgt), 0), src, tgt
    return linalg.RationalMatrix.from_columns(cols, len(tgt)), src, tgt
