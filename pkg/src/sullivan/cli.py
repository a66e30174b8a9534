"""Command line interface: ``sullivan <command> <file> ...`` prints JSON.

A workspace path that does not exist is looked up among the bundled example
files, so ``sullivan gottlieb zoo.txt S2`` works from any directory.

Exit codes: 0 success, 1 mathematical validation failure, 2 parse error or
unknown name, 3 degree bound too small, 4 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .algebra import Element, format_element
from .cohomology import betti_numbers, cohomology, euler_characteristic, induced_cohomology_map
from .construction import minimal_model_up_to_degree
from .errors import BoundError, InputError, InternalError, ParseError, PreconditionError
from .factorization import (
    build_phi,
    check_dW_condition,
    check_ghorbal_form,
    cyclic_classification,
    evaluation_homology_image,
    infer_split,
    sphere_split,
)
from .gottlieb import even_vanishing_check, gottlieb_group, normalize
from .homotopy import find_homotopy, verify_homotopy
from .models import MinimalModel, Morphism, validate_model, validate_morphism
from .workspace import parse_file, serialize_model

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_BOUND, EXIT_INTERNAL = 0, 1, 2, 3, 4
VERBOSITY_ENV = "SULLIVAN_VERBOSE"

log = logging.getLogger("sullivan")


def q(x: Fraction):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else str(x)


def el(x: Element) -> str:
    return format_element(x)


def model_json(m: MinimalModel) -> dict:
    return {
        "name": m.name,
        "generators": [{"name": g.name, "degree": g.degree} for g in m.generators],
        "differential": {g.name: el(m.d_gen(g)) for g in m.generators if m.d_gen(g)},
        "bound": m.bound,
    }


def morphism_json(f: Morphism) -> dict:
    return {g.name: el(f.values[g]) for g in f.source.generators}


def trim(betti: list) -> list:
    out = list(betti)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def unstable(m: MinimalModel) -> bool:
    """Nonzero cohomology near the bound: results may change with a larger bound."""
    if m.bound < 2:
        return True
    return not euler_characteristic(m).stable


def _envelope(command: str, certified: int, truncated: bool, **body) -> dict:
    out = {"command": command}
    out.update(body)
    out["certified_up_to"] = certified
    out["truncated"] = bool(truncated)
    return out


# commands


def cmd_validate(ws, args):
    names = args.names or list(ws.models) + list(ws.morphisms)
    models, morphisms = {}, {}
    for n in names:
        if n in ws.models:
            rep = validate_model(ws.models[n])
            models[n] = {"valid": rep.ok, "violations": [
                {"kind": v.kind, "generator": v.generator, "message": v.message} for v in rep.violations]}
        elif n in ws.morphisms:
            problems = validate_morphism(ws.morphisms[n])
            morphisms[n] = {"valid": not problems, "problems": problems}
        else:
            raise InputError(f"no model or morphism named {n!r}")
    ok = all(v["valid"] for v in models.values()) and all(v["valid"] for v in morphisms.values())
    bounds = [ws.models[n].bound for n in models] + [ws.morphisms[n].source.bound for n in morphisms]
    res = _envelope("validate", min(bounds, default=ws.bound), False, valid=ok, models=models, morphisms=morphisms)
    return res, EXIT_OK if ok else EXIT_INVALID


def _top(m: MinimalModel, requested):
    top = m.bound - 1 if requested is None else requested
    if top > m.bound - 1:
        raise BoundError(f"degree {top} needs a bound of at least {top + 1} (model {m.name} has {m.bound})")
    return top


def cmd_cohomology(ws, args):
    m = ws.model(args.model)
    top = _top(m, args.max_degree)
    reps = {}
    for n in range(top + 1):
        h = cohomology(m, n)
        if h.dimension:
            reps[str(n)] = [el(r) for r in h.representatives]
    return _envelope("cohomology", top, unstable(m), model=m.name, betti=betti_numbers(m, top),
                     representatives=reps), EXIT_OK


def cmd_euler(ws, args):
    m = ws.model(args.model)
    top = _top(m, args.max_degree)
    e = euler_characteristic(m, top)
    return _envelope("euler", top, not e.stable, model=m.name, chi=e.chi, betti=e.betti, stable=e.stable), EXIT_OK


def _derivation_json(theta) -> dict:
    return {g.name: el(v) for g, v in sorted(theta.values.items(), key=lambda t: t[0].key)}


def cmd_gottlieb(ws, args):
    m = ws.model(args.model)
    odd = sorted({g.degree for g in m.generators if g.odd})
    groups, basis = {}, []
    for n in odd:
        grp = gottlieb_group(m, n)
        groups[str(n)] = grp.dimension
        for e in grp.elements:
            basis.append({"degree": n, "generator": e.generator.name,
                          "functional": {g.name: q(c) for g, c in e.functional.items()},
                          "derivation": _derivation_json(e.derivation)})
    even = even_vanishing_check(m)
    even_groups = {str(n): even.violations.get(n, 0) for n in even.checked}
    return _envelope("gottlieb", m.bound, unstable(m), model=m.name, groups=groups, even_all_zero=even.ok,
                     even_groups=even_groups, basis=basis), EXIT_OK


def cmd_normalize(ws, args):
    m = ws.model(args.model)
    ns = normalize(m)
    dw = check_dW_condition(ns)
    thetas = [{"degree": -t.degree, "generator": v.name, "values": _derivation_json(t)}
              for v, t in zip(ns.V, ns.thetas)]
    return _envelope("normalize", ns.certified_up_to, unstable(m), model=m.name,
                     V=[v.name for v in ns.V], Z=[z.name for z in ns.Z], thetas=thetas,
                     normalized_model=model_json(ns.model), change=morphism_json(ns.change.to_old),
                     stable=not ns.violations(), dW_condition=dw.ok, dW_witnesses=dw.witnesses), EXIT_OK


def cmd_split(ws, args):
    m = ws.model(args.model)
    sp = sphere_split(m)
    img = evaluation_homology_image(m, sp)
    rb = trim(betti_numbers(sp.remainder, sp.remainder.bound - 1))
    return _envelope("split", sp.certified_up_to, unstable(m), model=m.name, factors=sp.degrees,
                     factor_generators=[f.name for f in sorted(sp.factors, key=lambda g: g.key)],
                     remainder=model_json(sp.remainder), remainder_betti=rb, image_dim=img.dimension,
                     round_trip=not sp.round_trip_failures(),
                     to_original=morphism_json(sp.to_original),
                     from_original=morphism_json(sp.from_original)), EXIT_OK


def cmd_total_gottlieb(ws, args):
    m = ws.model(args.model)
    tge = build_phi(normalize(m))
    gh = check_ghorbal_form(tge.gamma, tge.V, tge.Z)
    top = min(m.bound, tge.sphere_model.bound) - 1
    ranks = {str(n): induced_cohomology_map(tge.gamma, n).rank for n in range(1, top + 1)}
    return _envelope("total-gottlieb", m.bound, unstable(m), model=m.name,
                     V=[v.name for v in tge.V], Z=[z.name for z in tge.Z],
                     sphere=model_json(tge.sphere_model), gamma=morphism_json(tge.gamma),
                     gamma_on_original=morphism_json(tge.gamma_on_original), phi=morphism_json(tge.phi),
                     ghorbal=gh.ok, cohomology_ranks=ranks), EXIT_OK


def cmd_homology_image(ws, args):
    if args.name in ws.models:
        m = ws.models[args.name]
        img = evaluation_homology_image(m)
        return _envelope("homology-image", img.certified_up_to, unstable(m), kind="evaluation", name=m.name,
                         r=img.r, dimension=img.dimension, reduced_dimension=img.reduced_dimension,
                         basis=img.basis, factor_degrees=img.factor_degrees), EXIT_OK
    f = ws.morphism(args.name)
    top = min(f.source.bound, f.target.bound) - 1
    ranks = {str(n): induced_cohomology_map(f, n).rank for n in range(top + 1)}
    return _envelope("homology-image", top, unstable(f.source) or unstable(f.target), kind="morphism",
                     name=args.name, ranks=ranks, total_rank=sum(ranks.values())), EXIT_OK


def cmd_ghorbal(ws, args):
    f = ws.morphism(args.morphism)
    if args.v is None:
        V, W = infer_split(f)
        inferred = True
    else:
        names = [s for s in args.v.split(",") if s]
        V = [f.source.gen(n) for n in names]
        W = [g for g in f.source.generators if g not in V]
        inferred = False
    rep = check_ghorbal_form(f, V, W)
    return _envelope("ghorbal", f.source.bound, unstable(f.source), morphism=args.morphism, ghorbal=rep.ok,
                     V=[v.name for v in rep.V], W=[w.name for w in rep.W], split_inferred=inferred,
                     violations=rep.violations), EXIT_OK


def _grid(text, default):
    if text is None:
        return tuple(default)
    try:
        return tuple(Fraction(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise InputError(f"invalid search grid {text!r}") from None


def cmd_homotopy(ws, args):
    f0, f1 = ws.morphism(args.m0), ws.morphism(args.m1)
    grid = _grid(args.search_grid, ws.grid)
    res = find_homotopy(f0, f1, max_backtrack=args.max_backtrack, grid=grid)
    cert = res.certificate
    obs = res.obstruction
    body = {
        "maps": [args.m0, args.m1],
        "status": res.status,
        "bar_assignment": {g.name: el(v) for g, v in cert.bar_assignment.items()} if cert else None,
        "verified": verify_homotopy(cert).ok if cert else False,
        "obstruction": None if obs is None else {
            "generator": obs.generator, "degree": obs.degree,
            "residual": el(obs.residual) if obs.residual is not None else None,
            "class": [q(c) for c in obs.class_coordinates] if obs.class_coordinates is not None else None,
            "parameter_free": obs.parameter_free, "reason": obs.reason},
        "backtracks": res.backtracks,
        "grid": [q(c) for c in grid],
    }
    return _envelope("homotopy", res.certified_up_to, unstable(f0.source) or unstable(f0.target), **body), EXIT_OK


def cmd_minimal_model(ws, args):
    A = ws.cdga(args.presentation)
    res = minimal_model_up_to_degree(A, args.max_degree)
    nxt = minimal_model_up_to_degree(A, args.max_degree + 1)
    truncated = len(nxt.model.generators) > len(res.model.generators)
    return _envelope("minimal-model", res.certified_up_to, truncated, presentation=A.name,
                     model=model_json(res.model), model_text=serialize_model(res.model, None),
                     phi={g.name: el(v) for g, v in res.phi.items()},
                     betti_model=res.betti_model, betti_input=res.betti_input), EXIT_OK


def cmd_cyclic(ws, args):
    A, X = ws.model(args.A), ws.model(args.X)
    c = cyclic_classification(A, X)
    return _envelope("cyclic", c.certified_up_to, unstable(A) or unstable(X), A=A.name, X=X.name,
                     gottlieb_degrees=c.gottlieb_degrees, per_degree={str(k): v for k, v in c.per_degree.items()},
                     total=c.total), EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "euler": cmd_euler,
    "gottlieb": cmd_gottlieb,
    "normalize": cmd_normalize,
    "split": cmd_split,
    "total-gottlieb": cmd_total_gottlieb,
    "homology-image": cmd_homology_image,
    "ghorbal": cmd_ghorbal,
    "homotopy": cmd_homotopy,
    "minimal-model": cmd_minimal_model,
    "cyclic": cmd_cyclic,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_PARSE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sullivan", description="Sullivan minimal models over Q: Gottlieb groups, splittings, homotopies.")
    p.add_argument("--human", action="store_true", help="aligned text instead of JSON")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("file", help="workspace file")
        sp.add_argument("--human", action="store_true", default=argparse.SUPPRESS, help="aligned text output")
        return sp

    sp = add("validate", "check model and morphism invariants")
    sp.add_argument("names", nargs="*")
    for name, help_text in (("cohomology", "Betti numbers and representatives"), ("euler", "Euler characteristic")):
        sp = add(name, help_text)
        sp.add_argument("model")
        sp.add_argument("--max-degree", type=int)
    for name, help_text in (("gottlieb", "rational Gottlieb groups"), ("normalize", "stable Z-ideal normalization"),
                            ("split", "split off odd spheres"), ("total-gottlieb", "total Gottlieb element")):
        add(name, help_text).add_argument("model")
    add("homology-image", "evaluation image of a model, or homology image of a morphism").add_argument("name")
    sp = add("ghorbal", "homotopy-monomorphism criterion")
    sp.add_argument("morphism")
    sp.add_argument("--v", help="comma separated generators forming V (inferred when omitted)")
    sp = add("homotopy", "decide or search a homotopy between two maps")
    sp.add_argument("m0")
    sp.add_argument("m1")
    sp.add_argument("--search-grid", help="comma separated coefficients, e.g. 0,-1,1")
    sp.add_argument("--max-backtrack", type=int, default=1000)
    sp = add("minimal-model", "minimal model of a presented cdga")
    sp.add_argument("presentation")
    sp.add_argument("--max-degree", type=int, required=True)
    sp = add("cyclic", "dimension of cyclic maps A -> X")
    sp.add_argument("A")
    sp.add_argument("X")
    return p


def render_human(obj, indent: int = 0) -> str:
    pad = " " * indent
    if isinstance(obj, dict):
        if not obj:
            return pad + "(none)"
        width = max(len(str(k)) for k in obj)
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{str(k):<{width}}")
                lines.append(render_human(v, indent + 2))
            else:
                lines.append(f"{pad}{str(k):<{width}}  {_scalar(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        lines = []
        for v in obj:
            if isinstance(v, dict) and all(not isinstance(x, (dict, list)) or _flat(x) for x in v.values()):
                lines.append(pad + "- " + "  ".join(f"{k}={_scalar(x)}" for k, x in v.items()))
            elif isinstance(v, (dict, list)):
                lines.append(pad + "-")
                lines.append(render_human(v, indent + 2))
            else:
                lines.append(pad + _scalar(v))
        return "\n".join(lines)
    return pad + _scalar(obj)


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def _setup_logging():
    level = {"0": logging.WARNING, "1": logging.INFO, "2": logging.DEBUG}.get(os.environ.get(VERBOSITY_ENV, "0"),
                                                                               logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def resolve_workspace(path: str):
    if Path(path).exists():
        return path
    bundled = resources.files("sullivan") / "zoo" / Path(path).name
    return bundled if bundled.is_file() else path


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        ws = parse_file(resolve_workspace(args.file))
        result, code = COMMANDS[args.command](ws, args)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except BoundError as e:
        print(f"bound error: {e}", file=sys.stderr)
        return EXIT_BOUND
    except PreconditionError as e:
        print(f"precondition failed: {e}", file=sys.stderr)
        return EXIT_INVALID
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except InternalError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.human:
        out.write(render_human(result) + "\n")
    else:
        out.write(json.dumps(result, indent=2, ensure_ascii=False) + "\n")
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
