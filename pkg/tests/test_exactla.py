from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fcatreal.exactla import (
    Mat,
    Subspace,
    fmt_scalar,
    hstack,
    nullspace_vectors,
    rank,
    rref,
    solve,
    subspace_ops,
    to_fraction,
)

from conftest import matrices


def brute_rank(m: Mat) -> int:
    """Rank by plain Fraction elimination, independent of the sparse routine."""
    rows = [list(r) for r in m.rows]
    r = 0
    for c in range(m.ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def test_scalars_parse_and_print():
    assert to_fraction("3/6") == Fraction(1, 2)
    assert to_fraction(-4) == Fraction(-4)
    assert fmt_scalar(Fraction(-2, 4)) == "-1/2"
    assert fmt_scalar(Fraction(3)) == "3"
    with pytest.raises(TypeError):
        to_fraction(True)


def test_rref_examples():
    m, piv = rref(Mat.identity(2))
    assert m == Mat.identity(2) and piv == [0, 1]
    m, piv = rref(Mat([[1, 2], [2, 4]]))
    assert m == Mat([[1, 2], [0, 0]]) and piv == [0]
    m, piv = rref(Mat.zeros(0, 0))
    assert m.shape == (0, 0) and piv == []


def test_solve_examples():
    b = Mat([[1, "1/2"], [3, -1]])
    x, null = solve(Mat.identity(2), b)
    assert x == b and null.dim == 0
    x, null = solve(Mat([[1, 2], [2, 4]]), Mat([[1], [2]]))
    assert x == Mat([[1], [0]])
    assert null == Subspace.span(Mat([[-2], [1]]))
    assert solve(Mat([[1], [0]]), Mat([[0], [1]])) is None


def test_subspace_examples():
    u = Subspace.span(Mat([[1, 0], [0, 1], [0, 0]]))
    v = Subspace.span(Mat([[0, 0], [1, 0], [0, 1]]))
    s, i = subspace_ops(u, v)
    assert s == Subspace.full(3)
    assert i == Subspace.span(Mat([[0], [1], [0]]))
    s, i = subspace_ops(u, u)
    assert s == u and i == u
    l1 = Subspace.span(Mat([[1], [1]]))
    l2 = Subspace.span(Mat([[1], [-1]]))
    s, i = subspace_ops(l1, l2)
    assert s == Subspace.full(2) and i.dim == 0


def test_ambient_mismatch_rejected():
    with pytest.raises(ValueError):
        subspace_ops(Subspace.full(2), Subspace.full(3))


@given(matrices())
def test_rref_idempotent_and_rank_preserved(m):
    r, piv = rref(m)
    r2, piv2 = rref(r)
    assert r2 == r and piv2 == piv
    assert rank(m) == rank(r) == len(piv) == brute_rank(m)


@given(matrices(), st.data())
def test_solve_is_exact(a, data):
    b = data.draw(matrices(rows=a.nrows, cols=data.draw(st.integers(1, 2))))
    res = solve(a, b)
    if res is None:
        # infeasible exactly when appending b raises the rank
        assert rank(hstack([a, b], nrows=a.nrows)) > rank(a)
        return
    x, null = res
    assert a @ x == b
    for v in nullspace_vectors(a):
        assert null.contains(Mat.column(v))
    assert null.dim == a.ncols - rank(a)


@given(matrices(max_rows=4, max_cols=3), st.data())
def test_dimension_formula(g1, data):
    g2 = data.draw(matrices(rows=g1.nrows, max_cols=3))
    u, v = Subspace.span(g1), Subspace.span(g2)
    s, i = subspace_ops(u, v)
    assert s.dim + i.dim == u.dim + v.dim
    assert u <= s and v <= s and i <= u and i <= v
    assert s.dim == brute_rank(hstack([g1, g2], nrows=g1.nrows))


@given(matrices(max_rows=3, max_cols=4))
def test_canonical_basis_independent_of_generators(g):
    # a column-operation-equivalent generating set gives the identical Subspace
    if g.ncols < 2:
        return
    cols = [list(c) for c in g.T.rows]
    cols = cols[::-1]
    cols[0] = [a + 2 * b for a, b in zip(cols[0], cols[1])]
    h = Mat.from_columns(cols, g.nrows)
    assert Subspace.span(g) == Subspace.span(h)


@given(st.fractions())
def test_printed_scalars_read_back(x):
    assert to_fraction(fmt_scalar(x)) == x
