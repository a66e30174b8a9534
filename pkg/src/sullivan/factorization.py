"""Total Gottlieb elements, odd-sphere splitting and related checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import linalg
from .algebra import (
    Element,
    Generator,
    count_factors,
    derive,
    in_ideal,
    linear_part,
    monomials_outside_ideal,
    substitute,
)
from .cohomology import betti_numbers, check_degree, cocycle_space
from .errors import InputError, InternalError
from .gottlieb import NormalizedSplitting, gottlieb_group, gottlieb_basis, normalize
from .models import (
    Derivation,
    GeneratorChange,
    MinimalModel,
    Morphism,
    change_generators,
    check_inverse,
    compose,
    identity,
    tensor_product,
)


@dataclass
class DWReport:
    ok: bool
    witnesses: dict = field(default_factory=dict)  # generator name -> offending monomials


def check_dW_condition(ns: NormalizedSplitting) -> DWReport:
    """Every ``d(w)`` has at least two factors from ``Z`` in each monomial."""
    witnesses = {}
    for g in ns.model.generators:
        bad = monomials_outside_ideal(ns.model.d_gen(g), ns.Z, 2)
        if bad:
            witnesses[g.name] = [str(b) for b in bad]
    return DWReport(not witnesses, witnesses)


@dataclass
class TotalGottliebElement:
    sphere_model: MinimalModel
    gamma: Morphism  # normalized model -> sphere model
    phi: Morphism  # normalized model -> sphere model (x) normalized model
    product: MinimalModel
    splitting: NormalizedSplitting

    @property
    def gamma_on_original(self) -> Morphism:
        """``gamma`` precomposed with the change of generators from the input model."""
        return compose(self.gamma, self.splitting.change.from_old)

    @property
    def V(self) -> list:
        return self.splitting.V

    @property
    def Z(self) -> list:
        return self.splitting.Z


def _sphere_model(ns: NormalizedSplitting) -> MinimalModel:
    taken = {g.name for g in ns.model.generators}
    gens = []
    for i, v in enumerate(ns.V):
        name = v.name + "'"
        while name in taken:
            name += "'"
        taken.add(name)
        gens.append(Generator(name, v.degree, i))
    return MinimalModel(f"S_{ns.model.name}", gens, {}, ns.model.bound)


def build_phi(ns: NormalizedSplitting) -> TotalGottliebElement:
    """Build ``phi`` by ``phi_s = phi_{s-1} + v'_s theta_s(phi_{s-1})`` and project to ``gamma``.

    The derivations are extended by zero on the sphere generators.  After
    verifying that ``gamma(v_i) = v'_i`` modulo the ideal of ``v'_1..v'_{i-1}``,
    the sphere generators are rechosen as ``gamma(v_i)`` so that the returned
    ``gamma`` sends each ``v_i`` exactly to a sphere generator.
    """
    report = check_dW_condition(ns)
    if not report.ok:
        raise InputError(f"d(W) is not in the ideal of Z-length >= 2: {report.witnesses}")
    m = ns.model
    sphere = _sphere_model(ns)
    product, _, isph = tensor_product(m, sphere, name=f"{sphere.name}x{m.name}")
    vprime = [isph.values[g].generators().pop() for g in sphere.generators]
    values = {g: Element.gen(g) for g in m.generators}
    for vp, theta in zip(vprime, ns.thetas):
        values = {g: x + Element.gen(vp) * derive(theta.values, theta.degree, x) for g, x in values.items()}
    phi = Morphism(m, product, values)
    if not phi.commutes():
        raise InternalError(f"phi does not commute with d on {phi.commutation_failures()}")

    back = {vp: Element.gen(g) for vp, g in zip(vprime, sphere.generators)}
    kill_x = {g: Element.zero() for g in m.generators}
    gamma = Morphism(m, sphere, {g: substitute({**kill_x, **back}, x) for g, x in values.items()})
    kill_v = {vp: Element.zero() for vp in vprime}
    for g, x in values.items():
        if substitute({**{h: Element.gen(h) for h in m.generators}, **kill_v}, x) != Element.gen(g):
            raise InternalError(f"second projection of phi is not the identity on {g.name}")
    for i, v in enumerate(ns.V):
        rest = gamma.values[v] - Element.gen(sphere.generators[i])
        if not in_ideal(rest, sphere.generators[:i], 1):
            raise InternalError(f"gamma is not triangular on {v.name}")
    for z in ns.Z:
        if gamma.values[z]:
            raise InternalError(f"gamma does not vanish on {z.name}")

    # re-choose sphere generators so that gamma(v_i) is a generator
    defs = {s: (s.name, gamma.values[v]) for s, v in zip(sphere.generators, ns.V)
            if gamma.values[v] != Element.gen(s)}
    if defs:
        ch = change_generators(sphere, defs, name=sphere.name)
        gamma = Morphism(m, sphere, {g: ch.from_old(x) for g, x in gamma.values.items()})
        fix = {h: Element.gen(h) for h in m.generators}
        fix.update({vp: substitute(back, Element.gen(vp)) for vp in vprime})
        to_prod = {s: Element.gen(vp) for s, vp in zip(sphere.generators, vprime)}
        fix.update({vp: substitute(to_prod, ch.from_old(Element.gen(s)))
                    for s, vp in zip(sphere.generators, vprime)})
        phi = Morphism(m, product, {g: substitute(fix, x) for g, x in phi.values.items()})
        if not phi.commutes():
            raise InternalError("phi no longer commutes after re-choosing sphere generators")
    return TotalGottliebElement(sphere, gamma, phi, product, ns)


def total_gottlieb_element(m: MinimalModel) -> TotalGottliebElement:
    return build_phi(normalize(m))


@dataclass
class CycleIdealReport:
    ok: bool
    degree: int | None = None
    counterexample: Element | None = None
    checked_up_to: int = 0


def cycles_in_ideal_check(m: MinimalModel, Vp, Z, top: int | None = None) -> CycleIdealReport:
    """Check that every positive-degree cocycle lies in the ideal generated by ``Vp + Z``."""
    top = m.bound - 1 if top is None else min(top, m.bound - 1)
    gens = set(Vp) | set(Z)
    for n in range(1, top + 1):
        for c in cocycle_space(m, n):
            if not in_ideal(c, gens, 1):
                return CycleIdealReport(False, n, c, top)
    return CycleIdealReport(True, checked_up_to=top)


# sphere splitting


@dataclass
class SphereSplitting:
    factors: list  # odd cocycle generators split off, in the product model
    remainder: MinimalModel
    model: MinimalModel  # the input rewritten as factors (x) remainder
    to_original: Morphism
    from_original: Morphism
    certified_up_to: int

    @property
    def degrees(self) -> list:
        return sorted(g.degree for g in self.factors)

    def round_trip_failures(self) -> list:
        return check_inverse(self.to_original, self.from_original)


def _submodel(m: MinimalModel, gens) -> MinimalModel:
    gens = list(gens)
    return MinimalModel(m.name, gens, {g: m.d_gen(g) for g in gens}, m.bound)


def _find_cocycle_pair(sub: MinimalModel):
    """First odd degree with a Gottlieb functional pairing nonzero with a cocycle's linear part."""
    for n in sorted({g.degree for g in sub.generators if g.odd}):
        if n > sub.bound - 1:
            break
        group = gottlieb_group(sub, n)
        if not group.elements:
            continue
        gens = sub.generators_of_degree(n)
        cocycles = cocycle_space(sub, n)
        for e in group.elements:
            for c in cocycles:
                lin = linear_part(c)
                pairing = sum((e.functional.get(g, 0) * lin.get(g, 0) for g in gens), Fraction(0))
                if pairing:
                    return e, c, pairing
    return None


def _chain(prev: GeneratorChange, step: GeneratorChange) -> GeneratorChange:
    return GeneratorChange(step.model, compose(prev.to_old, step.to_old), compose(step.from_old, prev.from_old))


def _split_one(full: MinimalModel, rest: list, found):
    """Split one sphere factor off the generators ``rest`` of ``full``.

    Returns ``(change, x)`` where ``x`` is the new cocycle generator and all
    other generators of ``rest`` have differentials free of ``x``.
    """
    element, cocycle, pairing = found
    lin = linear_part(cocycle)
    target = next(g for g in rest if g.degree == element.degree and lin.get(g))
    theta = Derivation(full, element.derivation.degree,
                       {full.gen(g.name): v for g, v in element.derivation.values.items()})
    change = change_generators(full, {target: (target.name, cocycle)}, name=full.name)
    theta = change.transport_derivation(theta).scale(1 / pairing)
    full = change.model
    x = full.gen(target.name)
    if theta.value(x) != Element.one():
        raise InternalError("Gottlieb derivation does not take the value 1 on the new cocycle")
    others = [g.name for g in rest if g.name != x.name]
    for n in sorted({full.gen(g).degree for g in others}):
        level = [g for g in others if full.gen(g).degree == n]
        defs = {}
        for name in level:
            g = full.gen(name)
            tv = theta.value(g)
            if tv:
                defs[g] = (name, Element.gen(g) - Element.gen(x) * tv)
        if defs:
            step = change_generators(full, defs, name=full.name)
            theta = step.transport_derivation(theta)
            change = _chain(change, step)
            full = step.model
            x = full.gen(x.name)
        # d(w) = p0 + x q with d(q) = 0; replacing w by w + x c with dc = q removes x
        defs = {}
        wgens = [full.gen(h) for h in others]
        for name in level:
            g = full.gen(name)
            p1 = Element({mm: c for mm, c in full.d_gen(g).terms.items() if count_factors(mm, {x})})
            if not p1:
                continue
            q = derive({x: Element.one()}, -x.degree, p1)
            c = _solve_primitive(full, wgens, q)
            if c is None:
                raise InternalError(f"cannot remove the sphere generator from d({name})")
            defs[g] = (name, Element.gen(g) + Element.gen(x) * c)
        if defs:
            step = change_generators(full, defs, name=full.name)
            theta = step.transport_derivation(theta)
            change = _chain(change, step)
            full = step.model
            x = full.gen(x.name)
    return change, x


def _solve_primitive(m: MinimalModel, gens, target: Element):
    """Some ``c`` in the subalgebra on ``gens`` with ``d c = target``, or None."""
    if not target:
        return Element.zero()
    if not target.generators() <= set(gens):
        return None
    sub = _submodel(m, gens)
    n = target.degree()
    src = sub.basis(n - 1)
    tgt = sub.basis(n)
    if not src:
        return None
    cols = [[sub.d(Element.monomial(b)).coefficient(t) for t in tgt] for b in src]
    sol = linalg.solve(linalg.RationalMatrix.from_columns(cols, len(tgt)), [target.coefficient(t) for t in tgt])
    if sol is None:
        return None
    return Element({b: c for b, c in zip(src, sol.particular) if c})


def sphere_split(m: MinimalModel) -> SphereSplitting:
    """Split off odd spheres greedily, lowest degree first.

    A factor is an odd cocycle generator ``x`` with a Gottlieb derivation
    ``theta``, ``theta(x) = 1``.  The other generators are replaced by
    ``v - x theta(v)`` (with a further correction by ``x`` times a primitive if
    needed) so that their differentials no longer involve ``x``; then the
    search continues on the remaining generators.
    """
    full = m
    change = GeneratorChange(m, identity(m), identity(m))
    factors = []
    rest = list(m.generators)
    while True:
        sub = _submodel(full, rest)
        found = _find_cocycle_pair(sub)
        if found is None:
            break
        step, x = _split_one(full, rest, found)
        change = _chain(change, step)
        full = step.model
        factors = [full.gen(f.name) for f in factors] + [x]
        rest = [full.gen(g.name) for g in rest if g.name != x.name]
    full = change.model
    factors = [full.gen(f.name) for f in factors]
    rest = [full.gen(g.name) for g in rest]
    for f in factors:
        if full.d_gen(f):
            raise InternalError(f"sphere factor {f.name} is not a cocycle")
    fset = set(factors)
    for g in rest:
        if full.d_gen(g).generators() & fset:
            raise InternalError(f"d({g.name}) still involves a sphere factor")
    bad = check_inverse(change.to_old, change.from_old)
    if bad:
        raise InternalError(f"splitting isomorphism fails to invert on {bad}")
    remainder = _submodel(full, rest).renamed(f"{m.name}_rest")
    return SphereSplitting(factors, remainder, full, change.to_old, change.from_old, m.bound)


@dataclass
class HomologyImage:
    r: int
    dimension: int
    reduced_dimension: int
    basis: list  # products of subsets of the sphere factors
    factor_degrees: list
    certified_up_to: int


def evaluation_homology_image(m: MinimalModel, split: SphereSplitting | None = None) -> HomologyImage:
    """Homology image of the evaluation map, computed as ``H`` of the exterior algebra on split factors."""
    split = split or sphere_split(m)
    factors = sorted(split.factors, key=lambda g: g.key)
    r = len(factors)
    basis = []
    for k in range(r + 1):
        for combo in combinations(factors, k):
            basis.append(" ".join(g.name for g in combo) or "1")
    ext = MinimalModel("ext", factors, {}, sum(g.degree for g in factors) + 2)
    dim = sum(betti_numbers(ext, ext.bound - 1))
    if dim != 2 ** r:
        raise InternalError(f"exterior algebra on {r} odd generators has total dimension {dim}")
    return HomologyImage(r, dim, dim - 1, basis, [g.degree for g in factors], split.certified_up_to)


@dataclass
class CyclicClassification:
    per_degree: dict  # Gottlieb degree -> dimension contributed
    total: int
    gottlieb_degrees: list
    certified_up_to: int


def cyclic_classification(A: MinimalModel, X_or_degrees) -> CyclicClassification:
    """Dimension of the space of cyclic maps ``A -> X``: sum of ``dim H^{n_i}(A)``.

    ``X_or_degrees`` is either the model of ``X`` or the multiset of its
    Gottlieb degrees.
    """
    if isinstance(X_or_degrees, MinimalModel):
        degrees = gottlieb_basis(X_or_degrees).degrees()
        x_bound = X_or_degrees.bound
    else:
        degrees = sorted(X_or_degrees)
        x_bound = None
    per = {}
    for n in degrees:
        check_degree(A, n)
        per[n] = per.get(n, 0) + betti_numbers(A, n)[n]
    certified = A.bound - 1 if x_bound is None else min(A.bound - 1, x_bound)
    return CyclicClassification(per, sum(per.values()), degrees, certified)


# Ghorbal form


@dataclass
class GhorbalReport:
    ok: bool
    violations: list = field(default_factory=list)
    V: list = field(default_factory=list)
    W: list = field(default_factory=list)


def infer_split(f: Morphism):
    """Guess ``V`` as the generators with nonzero linear image, ``W`` the rest."""
    V = [g for g in f.source.generators if linear_part(f.values[g])]
    W = [g for g in f.source.generators if g not in V]
    return V, W


def check_ghorbal_form(f: Morphism, V=None, W=None) -> GhorbalReport:
    """Check the four conditions of the homotopy-monomorphism criterion for ``f``.

    With the split ``V + W`` of the source generators: ``f(W) = 0``; ``f``
    maps ``V`` bijectively onto the target generators (and the target has zero
    differential); ``d(W)`` has at least two ``W`` factors per monomial; and
    every monomial of ``d(V)`` has no ``W`` factor or at least two.
    """
    if V is None or W is None:
        raise InputError("a generator split V + W of the source must be declared")
    src = f.source
    V = [src.gen(v) if isinstance(v, str) else v for v in V]
    W = [src.gen(w) if isinstance(w, str) else w for w in W]
    if set(V) & set(W) or set(V) | set(W) != set(src.generators):
        raise InputError("V and W must partition the source generators")
    problems = []
    for w in W:
        if f.values[w]:
            problems.append(f"gamma({w.name}) = {f.values[w]} is not zero")
    if f.target.differential:
        problems.append("target differential is not zero")
    images = []
    for v in V:
        img = f.values[v]
        lin = linear_part(img)
        if len(img.terms) != 1 or len(lin) != 1 or next(iter(lin.values())) != 1:
            problems.append(f"gamma({v.name}) = {img} is not a single target generator")
        else:
            images.append(next(iter(lin)))
    if len(images) == len(V) and sorted(images, key=lambda g: g.key) != list(f.target.generators):
        problems.append("gamma does not map V bijectively onto the target generators")
    wset = set(W)
    for w in W:
        bad = monomials_outside_ideal(src.d_gen(w), wset, 2)
        if bad:
            problems.append(f"d({w.name}) has monomials with fewer than two W factors: "
                            + ", ".join(str(b) for b in bad))
    for v in V:
        bad = [mm for mm in src.d_gen(v).terms if count_factors(mm, wset) == 1]
        if bad:
            problems.append(f"d({v.name}) has monomials with exactly one W factor: "
                            + ", ".join(str(b) for b in bad))
    return GhorbalReport(not problems, problems, V, W)
