import pytest

from sullivan.algebra import substitute
from sullivan.cohomology import betti_numbers
from sullivan.construction import PresentedCDGA, minimal_model_up_to_degree
from sullivan.errors import InputError, UnsupportedInputError
from sullivan.models import validate_model

from oracles import oracle_betti, truncated_polynomial_betti


def describe(m):
    return ([(g.name, g.degree) for g in m.generators],
            {g.name: str(v) for g, v in m.differential.items()})


def test_sphere_cohomology_recovers_s2_model():
    A = PresentedCDGA.build("Q", [("a", 2)], ["a^2"])
    res = minimal_model_up_to_degree(A, 7)
    assert describe(res.model) == ([("a", 2), ("y3", 3)], {"y3": "a^2"})
    assert oracle_betti(res.model, 7) == truncated_polynomial_betti(2, 2, 7)


def test_truncated_polynomial_recovers_cp2_model():
    A = PresentedCDGA.build("Q", [("a", 2)], ["a^3"])
    res = minimal_model_up_to_degree(A, 7)
    assert describe(res.model) == ([("a", 2), ("y5", 5)], {"y5": "a^3"})
    assert oracle_betti(res.model, 7) == truncated_polynomial_betti(2, 3, 7)
    assert res.betti_model == res.betti_input


def test_wedge_of_three_spheres():
    A = PresentedCDGA.build("W", [("a", 3), ("b", 3)], ["a b"])
    res = minimal_model_up_to_degree(A, 8)
    gens, diff = describe(res.model)
    assert [d for _, d in gens] == [3, 3, 5, 7, 7]
    assert diff == {"y5": "a b", "y7": "a y5", "y7_2": "b y5"}
    assert oracle_betti(res.model, 8) == [1, 0, 0, 2, 0, 0, 0, 0, 0]
    assert validate_model(res.model).ok


def test_phi_commutes_and_betti_agree_on_zoo_presentations(zoo):
    for A in zoo.cdgas.values():
        res = minimal_model_up_to_degree(A, 9)
        assert betti_numbers(res.model, 9) == [A.betti(n) for n in range(10)]
        for g in res.model.generators:
            lhs = A.free.d(res.phi[g])
            img = res.model.d_gen(g)
            assert A.is_zero(substitute(res.phi, img) - lhs)


def test_presented_algebra_dimensions():
    A = PresentedCDGA.build("Q", [("a", 2), ("b", 2)], ["a^2", "a b"])
    assert [A.dimension(n) for n in range(7)] == [1, 0, 2, 0, 1, 0, 1]
    assert A.is_zero(A.element("a^3"))
    assert not A.is_zero(A.element("b^3"))


def test_free_algebra_is_its_own_model():
    A = PresentedCDGA.build("D", [("x", 3), ("c", 4)])
    res = minimal_model_up_to_degree(A, 8)
    assert describe(res.model) == ([("x", 3), ("c", 4)], {})


def test_presentation_with_differential():
    # Q[a, b, x]/(a b) with dx = a^2: cohomology a, b, b^2, ...; classes of a^2 die
    A = PresentedCDGA.build("D", [("a", 2), ("b", 2), ("x", 3)], ["a b"], {"x": "a^2"})
    res = minimal_model_up_to_degree(A, 8)
    assert betti_numbers(res.model, 8) == [A.betti(n) for n in range(9)]


def test_differential_must_preserve_ideal():
    # d(a x) = a b^2 is not a multiple of a x
    with pytest.raises(InputError):
        PresentedCDGA.build("D", [("a", 2), ("b", 2), ("x", 3)], ["a x"], {"x": "b^2"})


def test_degree_one_generators_unsupported():
    A = PresentedCDGA.build("T", [("t", 1)])
    with pytest.raises(UnsupportedInputError):
        minimal_model_up_to_degree(A, 4)
