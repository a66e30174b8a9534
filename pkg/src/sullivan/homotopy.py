"""Sullivan homotopies of CDGA maps via the cylinder ``A(V + Vbar + V')``.

For a model ``(AV, d)`` the cylinder has generators ``v``, ``vbar`` of degree
``|v| - 1`` and ``v'`` of degree ``|v|`` with ``d(vbar) = v'`` and
``d(v') = 0``.  The derivation ``s`` of degree ``-1`` sends ``v`` to ``vbar``
and kills ``vbar`` and ``v'``.  A homotopy between ``phi0`` and ``phi1`` is an
algebra map ``H`` from the cylinder with ``H(v) = phi0(v)`` and
``phi1(v) = H(e^{sd+ds}(v))``.

On a generator ``v`` we have ``e^{sd+ds}(v) = v + v' + sum_r (sd)^r(v)/r!``.
The series is finite: ``d(v)`` only involves generators before ``v`` and each
``sd`` step trades an unbarred factor for a barred or primed one, on which
``s`` vanishes, so ``(sd)^r(v) = 0`` once ``r`` exceeds the word length
reachable from ``v``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from math import factorial

from . import linalg
from .algebra import Element, Generator, substitute, to_vector
from .cohomology import cohomology, induced_cohomology_map
from .errors import InputError, InternalError, UnsupportedInputError
from .models import Derivation, MinimalModel, Morphism, degreewise_matrix

log = logging.getLogger(__name__)

DEFAULT_GRID = (0, -1, 1)
DEFAULT_MAX_BACKTRACK = 1000


class Cylinder:
    """The cylinder ``A(V + Vbar + V')`` on a model with no degree-1 generators."""

    def __init__(self, base: MinimalModel):
        low = [g.name for g in base.generators if g.degree < 2]
        if low:
            raise UnsupportedInputError(f"cylinder needs generators of degree >= 2, got {low}")
        self.base = base
        k = len(base.generators)
        taken = {g.name for g in base.generators}

        def fresh(name):
            while name in taken:
                name += "_"
            taken.add(name)
            return name

        self.bar = {}
        self.prime = {}
        for i, g in enumerate(base.generators):
            self.bar[g] = Generator(fresh(g.name + "_bar"), g.degree - 1, k + i)
            self.prime[g] = Generator(fresh(g.name + "_prime"), g.degree, 2 * k + i)
        diff = dict(base.differential)
        for g in base.generators:
            diff[self.bar[g]] = Element.gen(self.prime[g])
        gens = list(base.generators) + list(self.bar.values()) + list(self.prime.values())
        self.model = MinimalModel(f"cyl_{base.name}", gens, diff, base.bound)
        self.s = Derivation(self.model, -1, {g: Element.gen(self.bar[g]) for g in base.generators})

    def sd(self, x: Element) -> Element:
        return self.s(self.model.d(x))

    def sd_powers(self, v: Generator) -> list:
        """``[(sd)^1 v, (sd)^2 v, ...]`` up to the last nonzero term."""
        out = []
        x = self.sd(Element.gen(v))
        limit = 2 * len(self.model.generators) + v.degree + 2
        while x:
            out.append(x)
            if len(out) > limit:
                raise InternalError(f"(sd)^r({v.name}) did not terminate")
            x = self.sd(x)
        return out


def exp_sd_ds(cyl: Cylinder, v: Generator) -> Element:
    """``e^{sd+ds}`` on a generator of the cylinder."""
    if v in cyl.base.generators:
        out = Element.gen(v) + Element.gen(cyl.prime[v])
        for r, term in enumerate(cyl.sd_powers(v), start=1):
            out = out + term.scale(Fraction(1, factorial(r)))
        return out
    if v in cyl.model.generators:
        return Element.gen(v)
    raise InputError(f"{v.name} is not a generator of {cyl.model.name}")


@dataclass
class HomotopyCertificate:
    phi0: Morphism
    phi1: Morphism
    bar_assignment: dict  # source generator -> element of the target of degree |v| - 1


@dataclass
class VerifyResult:
    ok: bool
    generator: str | None = None
    residual: Element | None = None


def _check_pair(phi0: Morphism, phi1: Morphism):
    if not (phi0.source.same_algebra(phi1.source) and phi0.target.same_algebra(phi1.target)):
        raise InputError("maps must have the same source and target")


def _h_values(cyl: Cylinder, phi0: Morphism, bars: dict) -> dict:
    target = phi0.target
    vals = {}
    for g in cyl.base.generators:
        vals[g] = phi0.values[g]
        if g in bars:
            b = bars[g]
            vals[cyl.bar[g]] = b
            vals[cyl.prime[g]] = target.d(b)
    return vals


def _residual(cyl: Cylinder, phi0: Morphism, phi1: Morphism, bars: dict, v: Generator) -> Element:
    """``phi1(v) - phi0(v) - sum_r H((sd)^r v)/r!``; equals ``d H(vbar)`` for a homotopy."""
    vals = _h_values(cyl, phi0, bars)
    out = phi1.values[v] - phi0.values[v]
    for r, term in enumerate(cyl.sd_powers(v), start=1):
        out = out - substitute(vals, term).scale(Fraction(1, factorial(r)))
    return out


def verify_homotopy(cert: HomotopyCertificate) -> VerifyResult:
    """Check ``phi1(v) = H(e^{sd+ds}(v))`` on every source generator."""
    phi0, phi1 = cert.phi0, cert.phi1
    _check_pair(phi0, phi1)
    cyl = Cylinder(phi0.source)
    bars = {}
    for g in cyl.base.generators:
        b = cert.bar_assignment.get(g, cert.bar_assignment.get(g.name, Element.zero()))
        if isinstance(b, str):
            b = phi0.target.element(b)
        if b and b.degree() != g.degree - 1:
            return VerifyResult(False, g.name, b)
        bars[g] = b
    vals = _h_values(cyl, phi0, bars)
    for g in cyl.base.generators:
        lhs = substitute(vals, exp_sd_ds(cyl, g))
        if lhs != phi1.values[g]:
            return VerifyResult(False, g.name, phi1.values[g] - lhs)
    return VerifyResult(True)


@dataclass
class Obstruction:
    generator: str | None
    degree: int
    residual: Element | None
    class_coordinates: tuple | None
    parameter_free: bool
    reason: str


@dataclass
class HomotopySearchResult:
    status: str  # "homotopic", "not_homotopic" or "unknown"
    certificate: HomotopyCertificate | None = None
    obstruction: Obstruction | None = None
    backtracks: int = 0
    certified_up_to: int = 0
    details: dict = field(default_factory=dict)


def _cohomology_prefilter(phi0: Morphism, phi1: Morphism, top: int):
    for n in range(1, top + 1):
        h0 = induced_cohomology_map(phi0, n)
        h1 = induced_cohomology_map(phi1, n)
        if h0.matrix != h1.matrix:
            hs = cohomology(phi0.source, n)
            for j, rep in enumerate(hs.representatives):
                if h0.matrix.column(j) != h1.matrix.column(j):
                    diff = phi1(rep) - phi0(rep)
                    coords = cohomology(phi0.target, n).coordinates(diff)
                    return Obstruction(str(rep), n, diff, coords, True,
                                       f"induced maps differ on H^{n} at the class of {rep}")
    return None


def _solutions(target: MinimalModel, rhs: Element, degree: int):
    """Particular solution and parameter directions of ``d y = rhs`` with ``|y| = degree``.

    Directions are cohomology representatives in the given degree (cocycles
    when the degree is past the cohomology range).  Returns None when ``rhs``
    is not a coboundary.
    """
    zero = Element.zero()
    mat, src, tgt = degreewise_matrix(target, degree) if degree >= 0 else (None, (), ())
    if not src:
        return None if rhs else (zero, [])
    if tgt:
        sol = linalg.solve(mat, to_vector(rhs, tgt))
        if sol is None:
            return None
        particular = Element({b: c for b, c in zip(src, sol.particular) if c})
    elif rhs:
        return None
    else:
        particular = zero
    if degree <= target.bound - 1:
        directions = list(cohomology(target, degree).representatives)
    else:
        directions = [Element({b: c for b, c in zip(src, k) if c}) for k in linalg.kernel_basis(mat)]
    return particular, directions


def find_homotopy(phi0: Morphism, phi1: Morphism, max_backtrack: int = DEFAULT_MAX_BACKTRACK,
                  grid=DEFAULT_GRID) -> HomotopySearchResult:
    """Search for a homotopy ``phi0 ~ phi1`` generator by generator.

    First induced cohomology maps are compared; a difference is a definitive
    negative answer.  Then, for each generator ``v`` in order, ``H(vbar)`` must
    solve ``d H(vbar) = phi1(v) - phi0(v) - sum_r H((sd)^r v)/r!``.  Each
    solution is a particular one plus a combination of cohomology
    representatives with coefficients from ``grid``; choices are explored
    depth first with at most ``max_backtrack`` backtracks.  A failure is
    definitive only when no earlier generator offered a choice.
    """
    _check_pair(phi0, phi1)
    source, target = phi0.source, phi0.target
    top = min(source.bound, target.bound) - 1
    grid = tuple(Fraction(c) for c in grid)
    if phi0 == phi1:
        cert = HomotopyCertificate(phi0, phi1, {})
        return HomotopySearchResult("homotopic", cert, certified_up_to=top)
    obstruction = _cohomology_prefilter(phi0, phi1, top)
    if obstruction is not None:
        return HomotopySearchResult("not_homotopic", obstruction=obstruction, certified_up_to=top)

    cyl = Cylinder(source)
    gens = list(source.generators)
    bars = {}
    choices = []  # per generator: list of candidate bar values, and current position
    backtracks = 0
    first_failure = None
    i = 0
    while i < len(gens):
        v = gens[i]
        if len(choices) == i:
            rhs = _residual(cyl, phi0, phi1, bars, v)
            sols = _solutions(target, rhs, v.degree - 1)
            if sols is None:
                parameter_free = all(len(c[0]) <= 1 for c in choices)
                if first_failure is None or parameter_free:
                    coords = None
                    if not target.d(rhs) and v.degree <= target.bound - 1:
                        coords = cohomology(target, v.degree).coordinates(rhs)
                    first_failure = Obstruction(v.name, v.degree, rhs, coords, parameter_free,
                                                f"d H({v.name}bar) = {rhs} has no solution")
                if parameter_free:
                    return HomotopySearchResult("not_homotopic", obstruction=first_failure,
                                                backtracks=backtracks, certified_up_to=top)
                # backtrack
                i -= 1
                backtracks += 1
                while i >= 0 and choices[i][1] + 1 >= len(choices[i][0]):
                    choices.pop()
                    bars.pop(gens[i], None)
                    i -= 1
                if i < 0 or backtracks > max_backtrack:
                    reason = "search exhausted" if i < 0 else "backtrack limit reached"
                    log.info("homotopy search stopped: %s", reason)
                    return HomotopySearchResult("unknown", obstruction=first_failure, backtracks=backtracks,
                                                certified_up_to=top, details={"reason": reason})
                options, pos = choices[i]
                choices[i] = (options, pos + 1)
                bars[gens[i]] = options[pos + 1]
                i += 1
                continue
            particular, directions = sols
            options = []
            for coeffs in cartesian(grid, repeat=len(directions)):
                y = particular
                for c, dvec in zip(coeffs, directions):
                    if c:
                        y = y + dvec.scale(c)
                options.append(y)
            choices.append((options, 0))
            bars[v] = options[0]
        i += 1
    cert = HomotopyCertificate(phi0, phi1, {g: b for g, b in bars.items() if b})
    check = verify_homotopy(cert)
    if not check.ok:
        raise InternalError(f"search produced an invalid homotopy (fails on {check.generator})")
    return HomotopySearchResult("homotopic", cert, backtracks=backtracks, certified_up_to=top)

