from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings

from sullivan import linalg
from sullivan.algebra import Element, to_vector
from sullivan.errors import InputError, UnsupportedInputError
from sullivan.homotopy import (
    Cylinder,
    HomotopyCertificate,
    exp_sd_ds,
    find_homotopy,
    verify_homotopy,
)
from sullivan.models import MinimalModel, Morphism

from strategies import two_stage_models


def exp_oracle(cyl: Cylinder, v):
    """sum_k theta^k(v)/k! with theta = sd + ds, summed until the terms vanish."""
    def theta(x):
        return cyl.s(cyl.model.d(x)) + cyl.model.d(cyl.s(x))

    total = Element.zero()
    term = Element.gen(v)
    k = 0
    while term:
        total = total + term.scale(Fraction(1, factorial(k)))
        k += 1
        term = theta(term)
        assert k < 40
    return total


def test_cylinder_structure(zoo):
    cyl = Cylinder(zoo.models["S2"])
    a = zoo.models["S2"].gen("a")
    assert cyl.bar[a].degree == 1 and cyl.prime[a].degree == 2
    assert cyl.model.d_gen(cyl.bar[a]) == Element.gen(cyl.prime[a])
    for g in cyl.model.generators:
        assert cyl.model.d(cyl.model.d_gen(g)) == Element.zero()


def test_exp_on_s2_by_hand(zoo):
    cyl = Cylinder(zoo.models["S2"])
    b = zoo.models["S2"].gen("b")
    assert str(exp_sd_ds(cyl, b)) == "2*a_bar a + a_bar a_prime + b + b_prime"


def test_exp_matches_series(zoo):
    for name in ("S2", "CP2", "B_abc", "X", "S2xS3", "S3vS9"):
        cyl = Cylinder(zoo.models[name])
        for g in cyl.base.generators:
            assert exp_sd_ds(cyl, g) == exp_oracle(cyl, g), (name, g.name)


@settings(max_examples=30)
@given(two_stage_models(bound=12))
def test_exp_matches_series_property(m):
    cyl = Cylinder(m)
    for g in m.generators:
        assert exp_sd_ds(cyl, g) == exp_oracle(cyl, g)


def exp_map(cyl):
    vals = {g: Element.gen(g) for g in cyl.model.generators}
    for g in cyl.base.generators:
        vals[g] = exp_sd_ds(cyl, g)
    return Morphism(cyl.model, cyl.model, vals)


def test_exp_is_a_dga_map(zoo):
    for name in ("S2", "CP2", "B_abc", "X", "E"):
        assert exp_map(Cylinder(zoo.models[name])).commutes(), name


@settings(max_examples=30)
@given(two_stage_models(bound=12))
def test_exp_is_a_dga_map_property(m):
    assert exp_map(Cylinder(m)).commutes()


def _in_ideal_degreewise(model, x, ideal_gens):
    if not x:
        return True
    n = x.degree()
    basis = model.basis(n)
    span = []
    for r in ideal_gens:
        if r.degree() is None or r.degree() > n:
            continue
        for mono in model.basis(n - r.degree()):
            prod = Element.monomial(mono) * r
            if prod:
                span.append(to_vector(prod, basis))
    return linalg.is_in_span(span, to_vector(x, basis))


@pytest.mark.parametrize("name,w", [("S2", ["a"]), ("CP2", ["x"]), ("S2xS3", ["e"])])
def test_sd_preserves_the_ideal_of_w(zoo, name, w):
    m = zoo.models[name]
    cyl = Cylinder(m)
    W = [m.gen(n) for n in w]
    gens = []
    for i, p in enumerate(W):
        for q in W[i:]:
            sq = Element.gen(p) * Element.gen(q)
            if sq:
                gens.extend([sq, cyl.s(sq)])
    gens.extend(Element.gen(cyl.prime[p]) for p in W)
    for r in gens:
        for mono in cyl.model.basis(3):
            x = Element.monomial(mono) * r
            assert _in_ideal_degreewise(cyl.model, cyl.sd(x), gens)


def test_monomorphism_example_compositions_are_homotopic(zoo):
    res = find_homotopy(zoo.morphisms["gamma_h"], zoo.morphisms["gamma_k"])
    assert res.status == "homotopic"
    assert verify_homotopy(res.certificate).ok
    bars = {g.name: str(v) for g, v in res.certificate.bar_assignment.items()}
    assert bars == {"b": "-e", "u": "-1/2*f g"}


def test_monomorphism_example_maps_are_not_homotopic(zoo):
    res = find_homotopy(zoo.morphisms["h"], zoo.morphisms["k"])
    assert res.status == "not_homotopic"
    assert res.obstruction.parameter_free
    assert res.obstruction.degree == 5


def test_scaling_is_not_homotopic(zoo):
    res = find_homotopy(zoo.morphisms["id_S3"], zoo.morphisms["twice_S3"])
    assert res.status == "not_homotopic"
    assert res.obstruction.parameter_free
    assert res.obstruction.class_coordinates == (1,)


def test_equal_maps_get_the_zero_homotopy(zoo):
    f = zoo.morphisms["gamma"]
    res = find_homotopy(f, f)
    assert res.status == "homotopic" and res.certificate.bar_assignment == {}
    assert verify_homotopy(res.certificate).ok


def test_backtrack_limit_gives_unknown(zoo):
    res = find_homotopy(zoo.morphisms["gamma_h"], zoo.morphisms["gamma_k"], max_backtrack=0)
    assert res.status == "unknown"
    assert res.certificate is None


def test_search_grid_without_needed_direction(zoo):
    res = find_homotopy(zoo.morphisms["gamma_h"], zoo.morphisms["gamma_k"], grid=(0,))
    assert res.status in ("unknown", "not_homotopic")
    if res.status == "not_homotopic":
        assert res.obstruction.parameter_free


def test_verify_rejects_wrong_certificate(zoo):
    f0, f1 = zoo.morphisms["gamma_h"], zoo.morphisms["gamma_k"]
    t = f0.target
    bad = HomotopyCertificate(f0, f1, {f0.source.gen("b"): t.element("e")})
    r = verify_homotopy(bad)
    assert not r.ok and r.generator is not None
    wrong_degree = HomotopyCertificate(f0, f1, {f0.source.gen("b"): t.element("f")})
    assert not verify_homotopy(wrong_degree).ok


def test_mismatched_maps_rejected(zoo):
    with pytest.raises(InputError):
        find_homotopy(zoo.morphisms["h"], zoo.morphisms["gamma_h"])


def test_degree_one_generators_unsupported():
    m = MinimalModel.build("T", [("t", 1)])
    with pytest.raises(UnsupportedInputError):
        Cylinder(m)
