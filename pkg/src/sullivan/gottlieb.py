"""Rational Gottlieb groups as spaces of d-commuting derivations.

A functional on the degree-``n`` generators belongs to the (dual) Gottlieb
group in degree ``n`` when it extends to a derivation ``theta`` of degree
``-n`` with ``d theta = (-1)^n theta d``.  Extensions are found by solving
the linear system whose unknowns are the coefficients of ``theta(w)`` on the
monomial basis of degree ``|w| - n``, for every generator ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .algebra import ONE, Element, derive, in_ideal, to_vector, word_length_part
from .errors import InternalError
from .models import Derivation, GeneratorChange, MinimalModel, check_commutes, compose, change_generators


def _unknowns(m: MinimalModel, n: int):
    """Pairs ``(w, monomial)`` parametrizing a degree ``-n`` derivation."""
    out = []
    for w in m.generators:
        if w.degree >= n:
            out.extend((w, b) for b in m.basis(w.degree - n))
    return out


def _system(m: MinimalModel, n: int):
    unknowns = _unknowns(m, n)
    sign = -1 if n % 2 else 1
    row_blocks = []
    offset = 0
    for g in m.generators:
        basis = m.basis(g.degree - n + 1)
        row_blocks.append((g, basis, offset))
        offset += len(basis)
    nrows = offset
    block_of = {g: (basis, off) for g, basis, off in row_blocks}
    users = {}
    for g in m.generators:
        for h in m.d_gen(g).generators():
            users.setdefault(h, []).append(g)
    columns = []
    for w, b in unknowns:
        col = [Fraction(0)] * nrows
        contributions = []
        db = m.d(Element.monomial(b))
        if db:
            contributions.append((w, db))
        for g in users.get(w, ()):
            val = derive({w: Element.monomial(b)}, -n, m.d_gen(g))
            if val:
                contributions.append((g, val.scale(-sign)))
        for g, val in contributions:
            basis, off = block_of[g]
            for i, c in enumerate(to_vector(val, basis)):
                if c:
                    col[off + i] += c
        columns.append(col)
    return unknowns, columns, nrows


def _as_derivation(m: MinimalModel, n: int, unknowns, vec) -> Derivation:
    vals = {}
    for (w, b), c in zip(unknowns, vec):
        if c:
            vals[w] = vals.get(w, Element.zero()) + Element.monomial(b, c)
    return Derivation(m, -n, vals)


def derivation_space(m: MinimalModel, n: int) -> list:
    """Basis of the derivations of degree ``-n`` commuting with ``d`` up to ``(-1)^n``."""
    if n < 1:
        raise ValueError("derivation degree must be at least 1")
    unknowns, columns, nrows = _system(m, n)
    if not unknowns:
        return []
    if nrows == 0:
        kernel = [tuple(Fraction(int(i == j)) for i in range(len(unknowns))) for j in range(len(unknowns))]
    else:
        kernel = linalg.kernel_basis(linalg.RationalMatrix.from_columns(columns, nrows))
    return [_as_derivation(m, n, unknowns, v) for v in kernel]


@dataclass
class GottliebElement:
    degree: int
    generator: object  # the generator v with functional(v) = 1
    functional: dict  # generator -> coefficient, on degree-n generators
    derivation: Derivation


@dataclass
class GottliebGroup:
    degree: int
    elements: list
    certified_up_to: int

    @property
    def dimension(self) -> int:
        return len(self.elements)


def gottlieb_group(m: MinimalModel, n: int) -> GottliebGroup:
    """Dual Gottlieb group in degree ``n`` with one extending derivation per basis element.

    The functionals are in reduced echelon form with respect to the generator
    order, so ``functional_i(v_j) = delta_ij`` on the pivot generators.  Free
    parameters of the extensions are set to zero.
    """
    gens = m.generators_of_degree(n)
    if not gens or n < 1:
        return GottliebGroup(n, [], m.bound)
    unknowns, columns, nrows = _system(m, n)
    fpos = [unknowns.index((g, ONE)) for g in gens]
    if nrows:
        mat = linalg.RationalMatrix.from_columns(columns, nrows)
        kernel = linalg.kernel_basis(mat)
    else:
        mat = None
        kernel = [tuple(Fraction(int(i == j)) for i in range(len(unknowns))) for j in range(len(unknowns))]
    projections = [tuple(v[p] for p in fpos) for v in kernel]
    projections = [p for p in projections if any(p)]
    if not projections:
        return GottliebGroup(n, [], m.bound)
    rows, pivots = linalg.rref(linalg.RationalMatrix.from_rows(projections, len(gens)))
    elements = []
    for row, p in zip(rows, pivots):
        # fix the functional coordinates to ``row`` and solve for the rest
        extra = [[Fraction(int(j == pos)) for j in range(len(unknowns))] for pos in fpos]
        base_rows = mat.entries if mat is not None else ()
        full = linalg.RationalMatrix.from_rows(list(base_rows) + extra, len(unknowns))
        sol = linalg.solve(full, [Fraction(0)] * nrows + list(row))
        if sol is None:
            raise InternalError(f"functional {row} lies in the projection but has no extension")
        theta = _as_derivation(m, n, unknowns, sol.particular)
        functional = {g: c for g, c in zip(gens, row) if c}
        elements.append(GottliebElement(n, gens[p], functional, theta))
    return GottliebGroup(n, elements, m.bound)


@dataclass
class GottliebBasis:
    model: MinimalModel
    elements: list
    certified_up_to: int

    @property
    def dimension(self) -> int:
        return len(self.elements)

    def degrees(self) -> list:
        return [e.degree for e in self.elements]

    def by_degree(self) -> dict:
        out = {}
        for e in self.elements:
            out[e.degree] = out.get(e.degree, 0) + 1
        return out


def gottlieb_basis(m: MinimalModel, degrees=None) -> GottliebBasis:
    """Gottlieb elements in all generator degrees, ordered by (degree, pivot)."""
    if degrees is None:
        degrees = sorted({g.degree for g in m.generators})
    elements = []
    for n in degrees:
        elements.extend(gottlieb_group(m, n).elements)
    return GottliebBasis(m, elements, m.bound)


@dataclass
class EvenVanishingReport:
    checked: list
    violations: dict = field(default_factory=dict)
    certified_up_to: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


def even_vanishing_check(m: MinimalModel, top: int | None = None) -> EvenVanishingReport:
    """Compute every even Gottlieb group up to ``top`` and report nonzero ones."""
    top = m.bound if top is None else min(top, m.bound)
    degrees = sorted({g.degree for g in m.generators if g.degree % 2 == 0 and g.degree <= top})
    report = EvenVanishingReport(degrees, certified_up_to=top)
    for n in degrees:
        dim = gottlieb_group(m, n).dimension
        if dim:
            report.violations[n] = dim
    return report


# normalization


@dataclass
class NormalizedSplitting:
    """Basis ``V + Z`` of generators with derivations ``theta_i`` dual to ``V``.

    ``change`` relates the normalized model to the original one.
    """

    model: MinimalModel
    V: list
    Z: list
    thetas: list
    change: GeneratorChange
    certified_up_to: int

    def violations(self) -> list:
        """Pairs ``(i, generator)`` where ``theta_i`` leaves the ``Z``-ideal."""
        return _stability_violations(self.V, self.Z, self.thetas)


def _stability_violations(V, Z, thetas) -> list:
    bad = []
    for i, theta in enumerate(thetas):
        for g in list(Z) + list(V[i + 1:]):
            if not in_ideal(theta.value(g), Z, 1):
                bad.append((i, g))
    return bad


def _chain(prev: GeneratorChange, step: GeneratorChange) -> GeneratorChange:
    return GeneratorChange(step.model, compose(prev.to_old, step.to_old), compose(step.from_old, prev.from_old))


def _pure_v_part(x: Element, vset, k: int) -> dict:
    """Monomials of ``x`` that are products of exactly ``k`` generators of ``V``."""
    out = {}
    for mono, c in word_length_part(x, k).terms.items():
        if all(g in vset for g, _ in mono):
            out[mono] = c
    return out


def normalize(m: MinimalModel, basis: GottliebBasis | None = None) -> NormalizedSplitting:
    """Choose ``Z`` and rewrite the generators until ``I(Z)`` is stable under every ``theta_i``.

    First ``Z`` is the common kernel of the functionals; then for ``k = 1..r``
    each generator ``z`` is replaced by
    ``z - sum_j sum_{I, max I < j} lambda_j^I v_j v_I`` where ``lambda_j^I`` is
    the coefficient of the length-``k`` product ``v_I`` in ``theta_j(z)``.
    The result is verified and :class:`InternalError` is raised if some
    ``theta_i`` still leaves the ideal.
    """
    if basis is None:
        basis = gottlieb_basis(m)
    elements = basis.elements
    r = len(elements)
    V_old = [e.generator for e in elements]
    vset = set(V_old)
    defs = {}
    for w in m.generators:
        if w in vset:
            continue
        expr = Element.gen(w)
        for e in elements:
            c = e.functional.get(w)
            if c:
                expr = expr - Element.gen(e.generator, c)
        if expr != Element.gen(w):
            defs[w] = (w.name, expr)
    change = change_generators(m, defs, name=m.name)
    thetas = [change.transport_derivation(e.derivation) for e in elements]
    model = change.model
    V = [model.gen(v.name) for v in V_old]
    Z = [g for g in model.generators if g.name not in {v.name for v in V}]

    for _ in range(r + 1):
        if not _stability_violations(V, Z, thetas):
            break
        for k in range(1, r + 1):
            vset = set(V)
            order = {v: i for i, v in enumerate(V)}
            defs = {}
            for z in model.generators:
                correction = Element.zero()
                for j, theta in enumerate(thetas):
                    part = _pure_v_part(theta.value(z), vset, k)
                    for mono, lam in part.items():
                        if max(order[g] for g, _ in mono) < j:
                            correction = correction + Element.gen(V[j]) * Element.monomial(mono, lam)
                if correction:
                    defs[z] = (z.name, Element.gen(z) - correction)
            if not defs:
                continue
            step = change_generators(model, defs, name=m.name)
            thetas = [step.transport_derivation(t) for t in thetas]
            change = _chain(change, step)
            model = step.model
            V = [model.gen(v.name) for v in V]
            Z = [model.gen(z.name) for z in Z]
    bad = _stability_violations(V, Z, thetas)
    if bad:
        raise InternalError("normalization did not stabilize the Z-ideal: "
                            + ", ".join(f"theta_{i + 1}({g.name})" for i, g in bad))
    for e, theta in zip(elements, thetas):
        if not check_commutes(theta, -1 if e.degree % 2 else 1):
            raise InternalError("transported derivation no longer commutes with d")
    return NormalizedSplitting(model, V, Z, thetas, change, basis.certified_up_to)
