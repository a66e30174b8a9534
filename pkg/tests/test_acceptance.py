"""Acceptance criteria 1-11.

Run with pytest (one test per criterion, summary lines at the end of the
session) or directly with ``python3 tests/test_acceptance.py``.
"""

import itertools
import sys
import time
import traceback
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sullivan.algebra import Element  # noqa: E402
from sullivan.cohomology import betti_numbers, euler_characteristic, induced_cohomology_map  # noqa: E402
from sullivan.construction import PresentedCDGA, minimal_model_up_to_degree  # noqa: E402
from sullivan.factorization import (  # noqa: E402
    check_ghorbal_form,
    cyclic_classification,
    evaluation_homology_image,
    sphere_split,
    total_gottlieb_element,
)
from sullivan.gottlieb import even_vanishing_check, gottlieb_group  # noqa: E402
from sullivan.homotopy import find_homotopy, verify_homotopy  # noqa: E402
from sullivan.models import indecomposables_map  # noqa: E402
from sullivan.workspace import parse  # noqa: E402

from conftest import zoo_text  # noqa: E402
from oracles import oracle_betti, truncated_polynomial_betti  # noqa: E402

RESULTS = {}

TITLES = {
    1: "Gottlieb corpus",
    2: "even-degree vanishing",
    3: "total Gottlieb element of S2",
    4: "2^r law for the evaluation image",
    5: "nonzero Euler characteristic obstructs sphere factors",
    6: "pinch map: zero on homotopy, nonzero on cohomology",
    7: "homotopy machinery on the monomorphism example",
    8: "splitting round trip and choice independence",
    9: "minimal model construction",
    10: "cyclic classification",
    11: "property suites",
}


def _zoo():
    return parse(zoo_text())


def criterion_1():
    ws = _zoo()
    assert gottlieb_group(ws.models["S2"], 3).dimension == 1
    assert gottlieb_group(ws.models["B_abc"], 3).dimension == 0
    assert gottlieb_group(ws.models["CP2"], 5).dimension == 1


def criterion_2():
    ws = _zoo()
    finite = [m for m in ws.models.values() if euler_characteristic(m).stable]
    assert len(finite) >= 12
    for m in finite:
        rep = even_vanishing_check(m)
        assert rep.ok, (m.name, rep.violations)


def criterion_3():
    m = _zoo().models["S2"]
    t = total_gottlieb_element(m)
    a, b = m.gen("a"), m.gen("b")
    vprime = t.sphere_model.generators[0]
    assert t.gamma_on_original.values[a] == Element.zero()
    assert t.gamma_on_original.values[b] == Element.gen(vprime)
    assert check_ghorbal_form(t.gamma, t.V, t.Z).ok
    assert all(induced_cohomology_map(t.gamma, n).rank == 0 for n in range(1, m.bound))


def criterion_4():
    ws = _zoo()
    assert evaluation_homology_image(ws.models["S3xS5"]).dimension == 4
    assert evaluation_homology_image(ws.models["S3xCP2"]).dimension == 2
    img = evaluation_homology_image(ws.models["CP2"])
    assert (img.dimension, img.reduced_dimension) == (1, 0)


def criterion_5():
    ws = _zoo()
    for name, chi in (("CP2", 3), ("CP3", 4)):
        m = ws.models[name]
        assert euler_characteristic(m).chi == chi
        assert sphere_split(m).degrees == []
        assert evaluation_homology_image(m).reduced_dimension == 0


def criterion_6():
    q = _zoo().morphisms["q"]
    assert q.source.name == "S6" and q.values[q.source.gen("u")] == q.target.element("x1 x2")
    assert indecomposables_map(q).rank() == 0
    assert induced_cohomology_map(q, 6).rank == 1


def criterion_7():
    ws = _zoo()
    res = find_homotopy(ws.morphisms["gamma_h"], ws.morphisms["gamma_k"])
    assert res.status == "homotopic"
    assert verify_homotopy(res.certificate).ok
    res = find_homotopy(ws.morphisms["h"], ws.morphisms["k"])
    assert res.status == "not_homotopic" and res.obstruction.parameter_free


def criterion_8():
    from test_factorization import permuted, test_factor_multiset_is_order_independent
    ws = _zoo()
    for m in ws.models.values():
        sp = sphere_split(m)
        assert sp.round_trip_failures() == [], m.name
        base = sorted(sp.degrees)
        for order in itertools.islice(itertools.permutations(range(len(m.generators))), 24):
            assert sorted(sphere_split(permuted(m, order)).degrees) == base, m.name
    test_factor_multiset_is_order_independent()


def criterion_9():
    for height, expected_top in ((2, 3), (3, 5)):
        A = PresentedCDGA.build("Q", [("a", 2)], [f"a^{height}"])
        res = minimal_model_up_to_degree(A, 7)
        gens = [(g.name, g.degree) for g in res.model.generators]
        assert gens == [("a", 2), (f"y{expected_top}", expected_top)]
        y = res.model.generators[1]
        assert res.model.d_gen(y) == res.model.element(f"a^{height}")
        brute = oracle_betti(res.model, 7)
        assert brute == truncated_polynomial_betti(2, height, 7)
        assert brute == [A.betti(n) for n in range(8)]


def criterion_10():
    ws = _zoo()
    even_only = [m for m in ws.models.values()
                 if euler_characteristic(m).stable
                 and not any(b for n, b in enumerate(betti_numbers(m, m.bound - 1)) if n % 2)]
    assert {m.name for m in even_only} >= {"S2", "CP1", "CP2", "CP3", "S2xS2"}
    for A in even_only:
        for X in ws.models.values():
            if X.bound - 1 >= max((g.degree for g in A.generators), default=0):
                assert cyclic_classification(A, X).total == 0, (A.name, X.name)
    assert cyclic_classification(ws.models["S3"], ws.models["S2"]).total == 1


def criterion_11():
    import test_algebra
    import test_linalg
    import test_models
    suites = [
        test_algebra.test_graded_commutativity,
        test_algebra.test_associativity,
        test_algebra.test_d_squared_is_zero,
        test_algebra.test_differential_leibniz,
        test_algebra.test_derivation_leibniz,
        test_linalg.test_rank_nullity,
        test_linalg.test_rank_matches_sympy,
        test_models.test_kunneth_property,
    ]
    for suite in suites:
        suite()


CRITERIA = {i: globals()[f"criterion_{i}"] for i in TITLES}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    try:
        CRITERIA[number]()
    except BaseException:
        RESULTS[number] = False
        raise
    RESULTS[number] = True


def summary_lines(results):
    return [f"criterion {i:2d} {'PASS' if results[i] else 'FAIL'}  {TITLES[i]}"
            for i in sorted(results)]


def main() -> int:
    results = {}
    for i, fn in CRITERIA.items():
        start = time.perf_counter()
        try:
            fn()
            results[i] = True
        except Exception:
            results[i] = False
            traceback.print_exc()
        line = summary_lines({i: results[i]})[0]
        print(f"{line}  ({time.perf_counter() - start:.2f}s)", flush=True)
    return 0 if all(results.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
