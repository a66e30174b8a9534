from fractions import Fraction

import pytest
from hypothesis import given, settings

from sullivan.algebra import Element, in_ideal
from sullivan.gottlieb import (
    derivation_space,
    even_vanishing_check,
    gottlieb_basis,
    gottlieb_group,
    normalize,
)
from sullivan.models import MinimalModel, check_commutes

from oracles import oracle_gottlieb_dimension
from strategies import two_stage_models

CONTRIVED = MinimalModel.build("C", [("x", 3), ("y", 3), ("c", 6), ("e", 11)], {"e": "c^2 - 2 c x y"})


def test_sphere_s2_has_one_dimensional_g3(zoo):
    assert gottlieb_group(zoo.models["S2"], 3).dimension == 1


def test_base_of_fibre_sequence_has_trivial_g3(zoo):
    assert gottlieb_group(zoo.models["B_abc"], 3).dimension == 0
    assert gottlieb_group(zoo.models["B_abc"], 5).dimension == 1


def test_cp2_g5(zoo):
    g = gottlieb_group(zoo.models["CP2"], 5)
    assert g.dimension == 1
    assert g.elements[0].generator.name == "y"


def test_zoo_matches_oracle(zoo):
    for m in zoo.models.values():
        for n in sorted({g.degree for g in m.generators}):
            assert gottlieb_group(m, n).dimension == oracle_gottlieb_dimension(m, n), (m.name, n)


def test_elements_are_dual_and_commute(zoo):
    for name in ("S3xS3", "E", "S3xCP2", "X"):
        m = zoo.models[name]
        for n in sorted({g.degree for g in m.generators if g.odd}):
            grp = gottlieb_group(m, n)
            gens = [e.generator for e in grp.elements]
            for e in grp.elements:
                assert check_commutes(e.derivation, -1)
                assert e.derivation.functional(gens) == tuple(Fraction(int(g == e.generator)) for g in gens)


def test_contrived_model_derivations_are_not_constant():
    g = gottlieb_group(CONTRIVED, 3)
    thetas = {e.generator.name: e.derivation for e in g.elements}
    c = CONTRIVED.gen("c")
    assert thetas["x"].value(c) == CONTRIVED.element("y")
    assert thetas["y"].value(c) == CONTRIVED.element("-x")


def test_derivation_space_rejects_nonpositive_degree(zoo):
    with pytest.raises(ValueError):
        derivation_space(zoo.models["S2"], 0)


def test_derivation_space_on_s2(zoo):
    space = derivation_space(zoo.models["S2"], 3)
    assert len(space) == 1


def test_basis_collects_all_odd_degrees(zoo):
    assert gottlieb_basis(zoo.models["S3xCP2"]).degrees() == [3, 5]
    assert gottlieb_basis(zoo.models["E"]).by_degree() == {3: 3, 5: 1, 7: 1}
    assert gottlieb_basis(CONTRIVED).degrees() == [3, 3, 11]


def test_even_groups_vanish_on_zoo(zoo):
    for m in zoo.models.values():
        rep = even_vanishing_check(m)
        assert rep.ok, (m.name, rep.violations)


def test_normalize_s2(zoo):
    ns = normalize(zoo.models["S2"])
    assert [v.name for v in ns.V] == ["b"]
    assert [z.name for z in ns.Z] == ["a"]
    assert ns.violations() == []


def test_normalize_rewrites_contrived_model():
    ns = normalize(CONTRIVED)
    assert [v.name for v in ns.V] == ["x", "y", "e"]
    assert [z.name for z in ns.Z] == ["c"]
    c = ns.model.gen("c")
    assert ns.change.to_old.values[c] == CONTRIVED.element("c - x y")
    assert ns.model.d_gen(ns.model.gen("e")) == ns.model.element("c^2")
    assert ns.violations() == []


def _check_stable(ns):
    V, Z = ns.V, set(ns.Z)
    for i, theta in enumerate(ns.thetas):
        later = set(V[i + 1:])
        for g in list(Z) + list(later):
            assert in_ideal(theta(Element.gen(g)), Z), (i, g.name)
        assert theta(Element.gen(V[i])) == Element.one()
        for j, v in enumerate(V):
            assert theta(Element.gen(v)).constant() == (1 if i == j else 0)


def test_normalized_splittings_of_zoo_are_stable(zoo):
    for name in ("S2", "CP2", "B_abc", "S3xCP2", "E", "X", "S2xS3"):
        _check_stable(normalize(zoo.models[name]))


@settings(max_examples=25)
@given(two_stage_models(max_closed=3, max_top=2, bound=12))
def test_gottlieb_dimension_property(m):
    for n in sorted({g.degree for g in m.generators if g.odd}):
        assert gottlieb_group(m, n).dimension == oracle_gottlieb_dimension(m, n)


@settings(max_examples=25)
@given(two_stage_models(max_closed=3, max_top=2, bound=12))
def test_normalization_property(m):
    ns = normalize(m)
    _check_stable(ns)
    for theta in ns.thetas:
        assert check_commutes(theta, -1 if theta.degree % 2 else 1)
