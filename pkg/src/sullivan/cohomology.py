"""Degreewise cohomology of minimal models over Q."""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .algebra import Element, from_vector, to_vector
from .errors import BoundError, InputError
from .models import MinimalModel, Morphism, degreewise_matrix

DEFAULT_WINDOW = 3


@dataclass
class CohomologyBasis:
    degree: int
    representatives: list
    basis: tuple  # monomial basis of the degree
    cocycles: list  # vectors spanning the cocycles
    coboundaries: list  # vectors spanning the coboundaries

    @property
    def dimension(self) -> int:
        return len(self.representatives)

    def coordinates(self, x: Element) -> tuple:
        """Coefficients of the class of the cocycle ``x`` on the representatives."""
        vec = to_vector(x, self.basis) if self.basis else ()
        reps = [to_vector(r, self.basis) for r in self.representatives]
        sol = linalg.coordinates(reps + self.coboundaries, vec) if self.basis else ()
        if sol is None:
            raise InputError(f"{x} is not a cocycle of degree {self.degree}")
        return tuple(sol[: len(reps)])

    def is_exact(self, x: Element) -> bool:
        vec = to_vector(x, self.basis) if self.basis else ()
        return linalg.is_in_span(self.coboundaries, vec) if self.basis else True


def _cache(m: MinimalModel) -> dict:
    c = m.__dict__.get("_cohomology_cache")
    if c is None:
        c = m.__dict__["_cohomology_cache"] = {}
    return c


def check_degree(m: MinimalModel, n: int):
    if n > m.bound - 1:
        raise BoundError(f"degree {n} is beyond the certified range of {m.name} (bound {m.bound})")


def cocycle_vectors(m: MinimalModel, n: int):
    mat, src, _ = degreewise_matrix(m, n)
    if not src:
        return [], src
    return linalg.kernel_basis(mat), src


def cohomology(m: MinimalModel, n: int) -> CohomologyBasis:
    """``H^n`` of the model; needs ``n <= bound - 1``."""
    check_degree(m, n)
    cache = _cache(m)
    if n in cache:
        return cache[n]
    if n < 0:
        return CohomologyBasis(n, [], (), [], [])
    z, basis = cocycle_vectors(m, n)
    if n >= 1:
        prev, psrc, _ = degreewise_matrix(m, n - 1)
        b = linalg.image_basis(prev) if psrc and basis else []
    else:
        b = []
    reps = linalg.quotient_basis(b, z)
    out = CohomologyBasis(n, [from_vector(r, basis) for r in reps], basis, z, b)
    cache[n] = out
    return out


def betti_numbers(m: MinimalModel, top: int) -> list:
    return [cohomology(m, n).dimension for n in range(top + 1)]


@dataclass
class InducedMap:
    degree: int
    matrix: linalg.RationalMatrix
    rank: int


def induced_cohomology_map(f: Morphism, n: int) -> InducedMap:
    """Matrix of ``H^n(f)`` in the computed bases (rows: target classes)."""
    hs = cohomology(f.source, n)
    ht = cohomology(f.target, n)
    cols = [ht.coordinates(f(r)) for r in hs.representatives]
    if not cols or not ht.dimension:
        mat = linalg.RationalMatrix.zeros(ht.dimension, hs.dimension)
        return InducedMap(n, mat, 0)
    mat = linalg.RationalMatrix.from_columns(cols, ht.dimension)
    return InducedMap(n, mat, mat.rank())


@dataclass
class EulerCharacteristic:
    chi: int
    betti: list
    top: int
    stable: bool


def euler_characteristic(m: MinimalModel, top: int | None = None, window: int = DEFAULT_WINDOW) -> EulerCharacteristic:
    """Alternating sum of Betti numbers through degree ``top``.

    ``stable`` is an advisory flag: all Betti numbers in ``[top - window, top]``
    vanish.
    """
    if top is None:
        top = m.bound - 1
    betti = betti_numbers(m, top)
    chi = sum((-1) ** i * b for i, b in enumerate(betti))
    stable = all(b == 0 for b in betti[max(0, top - window):])
    return EulerCharacteristic(chi, betti, top, stable)


def cocycle_space(m: MinimalModel, n: int) -> list:
    """Basis of the degree-``n`` cocycles as elements."""
    z, basis = cocycle_vectors(m, n)
    return [from_vector(v, basis) for v in z]
