from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wonder import _kernel_py
from wonder.exact_linalg import (
    SparseMat,
    format_rat,
    nullspace_basis,
    parse_rat,
    rank,
    solve,
)

F = Fraction


def dense(rows):
    return SparseMat.from_dense(rows)


def test_rank_empty():
    assert rank(SparseMat(0, 0, ())) == 0


def test_rank_identity():
    assert rank(dense([[1, 0], [0, 1]])) == 2


def test_rank_proportional_rows():
    assert rank(dense([[1, 2], [2, 4]])) == 1


def test_nullspace_identity():
    assert nullspace_basis(dense([[1, 0, 0], [0, 1, 0], [0, 0, 1]])) == []


def test_nullspace_zero_matrix():
    basis = nullspace_basis(SparseMat(2, 3, ()))
    assert len(basis) == 3


def test_nullspace_one_relation():
    (v,) = nullspace_basis(dense([[1, 1]]))
    assert v[0] == -v[1] and v[1] != 0


def test_solve_identity():
    assert solve(dense([[1, 0], [0, 1]]), [F(1), F(2)]) == (F(1), F(2))


def test_solve_underdetermined():
    sol = solve(dense([[1, 1]]), [F(3)])
    assert sol is not None and sol[0] + sol[1] == 3


def test_solve_inconsistent():
    assert solve(dense([[0]]), [F(1)]) is None


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve(dense([[1, 0]]), [F(1), F(2)])


def test_sparse_mat_rejects_bad_entries():
    with pytest.raises(ValueError):
        SparseMat(1, 1, ((0, 0, F(0)),))
    with pytest.raises(ValueError):
        SparseMat(1, 1, ((0, 1, F(1)),))
    with pytest.raises(ValueError):
        SparseMat(2, 2, ((0, 0, F(1)), (0, 0, F(2))))


rationals = st.builds(
    F, st.integers(min_value=-30, max_value=30), st.integers(min_value=1, max_value=7)
)
matrices = st.integers(min_value=1, max_value=5).flatmap(
    lambda n: st.integers(min_value=1, max_value=5).flatmap(
        lambda m: st.lists(
            st.lists(rationals, min_size=m, max_size=m), min_size=n, max_size=n
        )
    )
)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_rank_nullity(rows):
    m = SparseMat.from_dense(rows)
    assert rank(m) + len(nullspace_basis(m)) == m.cols


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_nullspace_vectors_annihilate(rows):
    m = SparseMat.from_dense(rows)
    d = m.to_dense()
    for v in nullspace_basis(m):
        assert all(isinstance(x, Fraction) for x in v)
        for row in d:
            assert sum(a * b for a, b in zip(row, v)) == 0


@settings(max_examples=60, deadline=None)
@given(matrices, st.lists(rationals, min_size=1, max_size=5))
def test_solve_solves(rows, rhs):
    m = SparseMat.from_dense(rows)
    rhs = (rhs * m.rows)[: m.rows]
    sol = solve(m, rhs)
    if sol is None:
        return
    d = m.to_dense()
    for row, b in zip(d, rhs):
        assert sum(a * x for a, x in zip(row, sol)) == b


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_kernel_backends_agree(rows):
    compiled = pytest.importorskip("wonder._kernel")
    ints = [[int(x * 210) for x in row] for row in rows]
    ncols = len(ints[0])
    rank_c, piv_c, ech_c = compiled.bareiss_echelon(ints, ncols)
    rank_p, piv_p, ech_p = _kernel_py.bareiss_echelon(ints, ncols)
    assert (rank_c, piv_c, ech_c) == (rank_p, piv_p, ech_p)


def test_rat_round_trip():
    assert parse_rat("3/2") == F(3, 2)
    assert parse_rat("-5") == F(-5)
    assert format_rat(F(3, 2)) == "3/2"
    assert format_rat(F(4, 2)) == "2"
    assert format_rat(F(-1, 3)) == "-1/3"
