"""Minimal models of finitely presented CDGAs, degree by degree.

A presented CDGA is ``A = A(P) / I`` with ``I`` generated by homogeneous
relations and a differential given on the generators ``P`` that preserves
``I``.  Each degree of ``A`` is handled by linear algebra on monomials:
``I^n`` is spanned by the products ``m * r`` of monomials with relations.

The model is built for ``k = 2, 3, ..., N``: cocycle generators of degree
``k`` are added to hit the cokernel of ``H^k``, then generators of degree
``k`` killing the kernel of ``H^{k+1}``.  Without degree-1 generators one
pass per degree suffices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .algebra import Element, Generator, substitute, to_vector
from .cohomology import cohomology
from .errors import InputError, InternalError, UnsupportedInputError
from .models import MinimalModel, validate_model


class PresentedCDGA:
    """Quotient ``A(P) / (relations)`` with a differential on ``P``."""

    def __init__(self, name: str, generators, relations=(), differential=None):
        self.name = name
        self.free = MinimalModel(name, generators, differential or {}, bound=10 ** 6)
        self.generators = self.free.generators
        self.relations = [self.free.element(r) if isinstance(r, str) else r for r in relations]
        for r in self.relations:
            if not r or not r.is_homogeneous():
                raise InputError(f"relation {r} must be nonzero and homogeneous")
        for g, v in self.free.differential.items():
            if v.degree() != g.degree + 1:
                raise InputError(f"d({g.name}) = {v} does not have degree {g.degree + 1}")
        self._deg = {}
        self._coh = {}
        for r in self.relations:
            if not self.is_zero(self.free.d(r)):
                raise InputError(f"differential does not preserve the ideal: d({r}) is not in it")

    @classmethod
    def build(cls, name: str, gens, relations=(), differential=None) -> "PresentedCDGA":
        generators = [Generator(n, d, i) for i, (n, d) in enumerate(gens)]
        free = MinimalModel(name, generators)
        rels = [free.element(r) if isinstance(r, str) else r for r in relations]
        diff = {free.gen(k): free.element(v) if isinstance(v, str) else v for k, v in (differential or {}).items()}
        return cls(name, generators, rels, diff)

    def element(self, text: str) -> Element:
        return self.free.element(text)

    def _degree(self, n: int):
        """``(monomial basis, quotient representatives, ideal vectors, reduction matrix)``."""
        if n in self._deg:
            return self._deg[n]
        basis = self.free.basis(n)
        ideal = []
        for r in self.relations:
            for m in self.free.basis(n - r.degree()):
                prod = Element.monomial(m) * r
                if prod:
                    ideal.append(to_vector(prod, basis))
        units = [tuple(Fraction(int(i == j)) for i in range(len(basis))) for j in range(len(basis))]
        reps = linalg.quotient_basis(ideal, units)
        indep_ideal = [ideal[i] for i in _independent(ideal, len(basis))]
        cols = reps + indep_ideal
        mat = linalg.RationalMatrix.from_columns(cols, len(basis)) if cols else None
        out = (basis, [basis[v.index(1)] for v in reps], indep_ideal, mat)
        self._deg[n] = out
        return out

    def dimension(self, n: int) -> int:
        return len(self._degree(n)[1])

    def coordinates(self, x: Element, n: int | None = None) -> tuple:
        """Coordinates of the class of ``x`` in the monomial basis of ``A^n``."""
        if n is None:
            n = x.degree()
            if n is None:
                return ()
        basis, reps, _, mat = self._degree(n)
        if not reps:
            return ()
        sol = linalg.solve(mat, to_vector(x, basis))
        return tuple(sol.particular[: len(reps)])

    def is_zero(self, x: Element) -> bool:
        if not x:
            return True
        return not any(self.coordinates(x))

    def from_coordinates(self, v, n: int) -> Element:
        reps = self._degree(n)[1]
        return Element({m: c for m, c in zip(reps, v) if c})

    def d_matrix(self, n: int) -> linalg.RationalMatrix:
        reps = self._degree(n)[1]
        rows = self.dimension(n + 1)
        cols = [self.coordinates(self.free.d(Element.monomial(m)), n + 1) or () for m in reps]
        cols = [c if c else tuple(Fraction(0) for _ in range(rows)) for c in cols]
        if not cols:
            return linalg.RationalMatrix.zeros(rows, 0)
        return linalg.RationalMatrix.from_columns(cols, rows)

    def cohomology(self, n: int):
        """``(cocycle vectors, coboundary vectors, class representatives)`` in ``A^n`` coordinates."""
        if n in self._coh:
            return self._coh[n]
        dim = self.dimension(n)
        z = linalg.kernel_basis(self.d_matrix(n)) if dim else []
        b = linalg.image_basis(self.d_matrix(n - 1)) if n >= 1 and dim and self.dimension(n - 1) else []
        reps = linalg.quotient_basis(b, z)
        self._coh[n] = (z, b, reps)
        return self._coh[n]

    def betti(self, n: int) -> int:
        if n == 0:
            return 1 if self.dimension(0) else 0
        return len(self.cohomology(n)[2])

    def class_of(self, x: Element, n: int) -> tuple:
        """Coordinates of the cohomology class of the cocycle ``x`` on the representatives."""
        _, b, reps = self.cohomology(n)
        if not reps:
            return ()
        vec = self.coordinates(x, n)
        sol = linalg.coordinates(reps + b, vec)
        if sol is None:
            raise InternalError(f"{x} is not a cocycle of {self.name}")
        return tuple(sol[: len(reps)])


def _independent(vectors, length) -> list:
    chosen = []
    rows = []
    for i, v in enumerate(vectors):
        trial = rows + [v]
        if linalg.rank_of(trial, length) > len(rows):
            rows = trial
            chosen.append(i)
    return chosen


@dataclass
class ConstructedModel:
    model: MinimalModel
    phi: dict  # model generator -> element of the presentation
    presentation: PresentedCDGA
    certified_up_to: int
    betti_model: list = field(default_factory=list)
    betti_input: list = field(default_factory=list)


def minimal_model_up_to_degree(A: PresentedCDGA, top: int, name: str | None = None) -> ConstructedModel:
    """Minimal model of ``A`` whose cohomology agrees with ``A`` through degree ``top``."""
    low = [g.name for g in A.generators if g.degree == 1]
    if low:
        raise UnsupportedInputError(f"degree-1 generators are not supported: {low}")
    name = name or f"M_{A.name}"
    gens: list = []
    diff: dict = {}
    phi: dict = {}
    used = set()

    def fresh(base):
        n = base
        i = 1
        while n in used:
            i += 1
            n = f"{base}_{i}"
        used.add(n)
        return n

    def current():
        return MinimalModel(name, gens, diff, bound=top + 2)

    def image(m, x):
        return substitute({g: phi[g] for g in m.generators}, x)

    for k in range(2, top + 1):
        # surject onto H^k(A)
        m = current()
        hm = cohomology(m, k)
        imgs = [A.class_of(image(m, r), k) for r in hm.representatives]
        _, _, reps_a = A.cohomology(k)
        units = [tuple(Fraction(int(i == j)) for i in range(len(reps_a))) for j in range(len(reps_a))]
        for vec in linalg.quotient_basis(imgs, units) if reps_a else []:
            rep = A.from_coordinates(_combine(reps_a, vec), k)
            lin = [g for g in A.generators if rep == Element.gen(g)]
            g = Generator(fresh(lin[0].name if lin else f"x{k}"), k, len(gens))
            gens.append(g)
            phi[g] = rep
        # kill the kernel of H^{k+1}
        m = current()
        hm = cohomology(m, k + 1)
        if not hm.representatives:
            continue
        nrep = len(A.cohomology(k + 1)[2])
        imgs = [A.class_of(image(m, r), k + 1) for r in hm.representatives]
        if nrep:
            kernel = linalg.kernel_basis(linalg.RationalMatrix.from_columns(imgs, nrep))
        else:
            kernel = [tuple(Fraction(int(i == j)) for i in range(len(imgs))) for j in range(len(imgs))]
        for vec in kernel:
            z = Element.zero()
            for c, r in zip(vec, hm.representatives):
                if c:
                    z = z + r.scale(c)
            target = A.coordinates(image(m, z), k + 1)
            sol = linalg.solve(A.d_matrix(k), target) if A.dimension(k) else None
            if sol is None and any(target):
                raise InternalError(f"class of {z} maps to a non-exact element")
            a = A.from_coordinates(sol.particular, k) if sol is not None else Element.zero()
            g = Generator(fresh(f"y{k}"), k, len(gens))
            gens.append(g)
            diff[g] = z
            phi[g] = a
    model = MinimalModel(name, gens, diff, bound=top + 1)
    report = validate_model(model)
    if not report.ok:
        raise InternalError(f"constructed model is invalid: {[v.message for v in report.violations]}")
    for g in model.generators:
        if not A.is_zero(image(model, model.d_gen(g)) - A.free.d(phi[g])):
            raise InternalError(f"phi does not commute with d on {g.name}")
    betti_model = [cohomology(model, n).dimension for n in range(top + 1)]
    betti_input = [A.betti(n) for n in range(top + 1)]
    for n in range(1, top + 1):
        hm = cohomology(model, n)
        imgs = [A.class_of(image(model, r), n) for r in hm.representatives]
        na = len(A.cohomology(n)[2])
        rank = linalg.rank_of(imgs, na) if imgs and na else 0
        if not (rank == len(imgs) == betti_input[n]):
            raise InternalError(f"construction is not a cohomology isomorphism in degree {n}")
    return ConstructedModel(model, phi, A, top, betti_model, betti_input)


def _combine(reps, coeffs) -> tuple:
    length = len(reps[0])
    out = [Fraction(0)] * length
    for c, r in zip(coeffs, reps):
        if c:
            for i, x in enumerate(r):
                out[i] += c * x
    return tuple(out)
