"""Hypothesis strategies for matrices, elements and small models."""

from fractions import Fraction

from hypothesis import strategies as st

from sullivan.algebra import Element, Generator
from sullivan.linalg import RationalMatrix
from sullivan.models import MinimalModel

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    rows = draw(st.integers(0, max_rows))
    cols = draw(st.integers(1, max_cols))
    # bias toward zeros so that rank deficiency shows up
    entry = st.one_of(st.just(Fraction(0)), st.just(Fraction(0)), small_fractions)
    data = [[draw(entry) for _ in range(cols)] for _ in range(rows)]
    return RationalMatrix.from_rows(data, cols)


def _random_poly(draw, m: MinimalModel, degree: int, gens, min_length=1):
    basis = [b for b in m.basis(degree) if b.length >= min_length and all(g in gens for g, _ in b)]
    if not basis:
        return Element.zero()
    chosen = draw(st.lists(st.sampled_from(basis), max_size=3, unique=True))
    out = Element.zero()
    for b in chosen:
        out = out + Element.monomial(b, draw(small_fractions))
    return out


@st.composite
def two_stage_models(draw, max_closed=4, max_top=3, bound=16):
    """A closed layer of generators and a second layer with d into products of the first."""
    closed_degrees = draw(st.lists(st.integers(2, 5), min_size=1, max_size=max_closed))
    top_degrees = draw(st.lists(st.integers(3, 9), max_size=max_top))
    gens = [Generator(f"x{i}", d, i) for i, d in enumerate(closed_degrees)]
    closed = MinimalModel("closed", gens, {}, bound)
    diff = {}
    k = len(gens)
    for j, d in enumerate(top_degrees):
        y = Generator(f"y{j}", d, k + j)
        value = _random_poly(draw, closed, d + 1, set(closed.generators), min_length=2)
        gens.append(y)
        if value:
            diff[y] = value
    return MinimalModel("random", gens, diff, bound)


@st.composite
def elements(draw, m: MinimalModel, degree=None, max_degree=10):
    if degree is None:
        degree = draw(st.integers(0, max_degree))
    basis = list(m.basis(degree))
    if not basis:
        return Element.zero()
    chosen = draw(st.lists(st.sampled_from(basis), max_size=4, unique=True))
    out = Element.zero()
    for b in chosen:
        out = out + Element.monomial(b, draw(small_fractions))
    return out
