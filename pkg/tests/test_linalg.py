from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from sullivan import linalg
from sullivan.errors import InputError
from sullivan.linalg import RationalMatrix

from strategies import matrices, small_fractions

F = Fraction


def to_sympy(m: RationalMatrix):
    return sympy.Matrix(m.rows, m.cols, lambda i, j: sympy.Rational(m.tolist()[i][j].numerator,
                                                                     m.tolist()[i][j].denominator))


def test_rref_small():
    m = RationalMatrix.from_rows([[2, 4, 2], [1, 2, 3]])
    rows, pivots = linalg.rref(m)
    assert pivots == [0, 2]
    assert rows == [(1, 2, 0), (0, 0, 1)]


def test_kernel_basis_is_one_vector_per_free_column():
    m = RationalMatrix.from_rows([[1, 1, 1]])
    assert linalg.kernel_basis(m) == [(-1, 1, 0), (-1, 0, 1)]


def test_solve_particular_sets_free_variables_to_zero():
    m = RationalMatrix.from_rows([[1, 2], [2, 4]])
    sol = linalg.solve(m, [3, 6])
    assert sol.particular == (3, 0)
    assert sol.kernel == [(-2, 1)]
    assert linalg.solve(m, [1, 0]) is None


def test_solve_rejects_wrong_length():
    with pytest.raises(InputError):
        linalg.solve(RationalMatrix.identity(2), [1])


def test_exact_fractions():
    m = RationalMatrix.from_rows([[3, 1], [1, 3]])
    sol = linalg.solve(m, [1, 0])
    assert sol.particular == (F(3, 8), F(-1, 8))


def test_quotient_basis_and_errors():
    e = [(F(1), F(0), F(0)), (F(0), F(1), F(0)), (F(0), F(0), F(1))]
    sub = [(F(1), F(1), F(0))]
    q = linalg.quotient_basis(sub, e)
    assert q == [e[0], e[2]]
    with pytest.raises(InputError):
        linalg.quotient_basis([(F(0), F(0), F(1))], e[:2])


@given(matrices())
def test_rank_nullity(m):
    assert m.rank() + len(linalg.kernel_basis(m)) == m.cols


@given(matrices())
def test_rank_matches_sympy(m):
    expected = to_sympy(m).rank() if m.rows else 0
    assert m.rank() == expected


@given(matrices())
def test_kernel_vectors_are_killed_and_independent(m):
    ker = linalg.kernel_basis(m)
    for v in ker:
        assert not any(m.apply(v))
    assert linalg.rank_of(ker, m.cols) == len(ker)


@given(matrices())
def test_image_basis_spans_columns(m):
    img = linalg.image_basis(m)
    assert len(img) == m.rank()
    for c in m.columns():
        assert linalg.is_in_span(img, c)


@given(matrices(), st.data())
def test_solve_recovers_consistent_right_hand_side(m, data):
    x = [data.draw(small_fractions) for _ in range(m.cols)]
    b = m.apply(x)
    sol = linalg.solve(m, b)
    assert sol is not None
    assert m.apply(sol.particular) == tuple(b)
