from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from eaesc import DependentInput, Mat, NO_SOLUTION, NotInvertible, ShapeMismatch
from eaesc.exact_linalg import (as_scalar, column_basis, complement_basis, inverse, null_space,
                                rank, rref, solve, solve_multi)

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_as_scalar_accepts_ints_strings_fractions():
    assert as_scalar("3/6") == Fraction(1, 2)
    assert as_scalar(4) == 4
    with pytest.raises(TypeError):
        as_scalar(0.5)
    with pytest.raises(TypeError):
        as_scalar(True)


def test_mat_shape_checks():
    with pytest.raises(ShapeMismatch):
        Mat(2, 2, (Fraction(1),))
    with pytest.raises(ShapeMismatch):
        Mat.from_rows([[1, 2], [3]])
    with pytest.raises(ShapeMismatch):
        Mat.identity(2) @ Mat.identity(3)


def test_rref_small_example():
    red, piv = rref([[1, 2, 3], [2, 4, 7]])
    assert piv == [0, 2]
    assert red[0] == [1, 2, 0] and red[1] == [0, 0, 1]


def test_null_space_of_rank_one():
    basis = null_space([[1, 2, 3]])
    assert basis == [(-2, 1, 0), (-3, 0, 1)]


def test_solve_and_no_solution():
    assert solve([[1, 1], [0, 1]], [3, 1]) == (2, 1)
    assert solve([[1, 1], [1, 1]], [1, 2]) is NO_SOLUTION
    assert not NO_SOLUTION


def test_complement_basis_picks_lowest_indices():
    comp = complement_basis([(1, 1, 0)], 3)
    assert comp == [(1, 0, 0), (0, 0, 1)]
    with pytest.raises(DependentInput):
        complement_basis([(1, 0), (2, 0)], 2)


def test_inverse_singular():
    with pytest.raises(NotInvertible):
        inverse(Mat.from_rows([[1, 2], [2, 4]]))


@given(matrices())
def test_rank_matches_sympy(rows):
    assert rank(rows) == sympy.Matrix(rows).rank()


@given(matrices())
def test_null_space_is_kernel_of_full_dimension(rows):
    basis = null_space(rows)
    ncols = len(rows[0])
    assert len(basis) == ncols - rank(rows)
    m = Mat.from_rows(rows)
    for v in basis:
        assert all(x == 0 for x in m @ v)


@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_returns_a_preimage(rows, x):
    m = Mat.from_rows(rows)
    b = m @ x[:m.cols]
    sol = solve(rows, b)
    assert sol is not NO_SOLUTION
    assert m @ sol == b


@given(matrices(), st.lists(st.lists(small, min_size=5, max_size=5), min_size=1, max_size=3))
def test_solve_multi_agrees_with_solve(rows, rhs):
    nr = len(rows)
    bs = [b[:nr] for b in rhs]
    assert solve_multi(rows, bs) == [solve(rows, b) for b in bs]


@given(matrices(4, 4))
def test_complement_completes_column_space(rows):
    cols = column_basis(rows)
    comp = complement_basis(cols, len(rows))
    assert rank(list(cols) + comp) == len(rows)
    assert len(cols) + len(comp) == len(rows)


@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_inverse_round_trip(rows):
    m = Mat.from_rows(rows)
    if rank(rows) < m.rows:
        with pytest.raises(NotInvertible):
            inverse(m)
        return
    assert inverse(m) @ m == Mat.identity(m.rows)
