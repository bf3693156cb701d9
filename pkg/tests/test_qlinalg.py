from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from oracles import symmetric_signature
from stratos.qlinalg import (BilinearForm, ChainHomology, DimensionError, FormError, MatrixParseError, QMatrix,
                             SKEW, SYMMETRIC, Subspace, image, inertia, kernel, parse_matrix, preimage, q,
                             quotient, signature, solve, sparse_kernel, subspace_intersection, subspace_sum)

small = st.integers(-3, 3)


def mats(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@st.composite
def matrix(draw, max_dim=5):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    return QMatrix.from_rows(draw(mats(r, c)), c)


def test_q_normalizes_integral_fractions():
    assert q(Fraction(4, 2)) == 2 and isinstance(q(Fraction(4, 2)), int)
    assert q("3/6") == Fraction(1, 2)


def test_matrix_text_round_trip():
    m = QMatrix.from_rows([[1, Fraction(-1, 3)], [0, 5]])
    assert parse_matrix(m.to_text()) == m
    assert m.to_text() == "2 2\n1 -1/3\n0 5\n"


@pytest.mark.parametrize("text,line", [("2 2\n1 2\n3\n", 3), ("x 2\n", 1), ("1 1\n1/0\n", 2), ("", 1)])
def test_matrix_parse_errors_carry_line(text, line):
    with pytest.raises(MatrixParseError) as e:
        parse_matrix(text)
    assert e.value.line == line


@settings(max_examples=80, deadline=None)
@given(matrix())
def test_rank_nullity_and_rank_against_sympy(m):
    assert kernel(m).dim + m.rank() == m.cols
    ref = sympy.Matrix(m.rows, m.cols, list(m.entries)).rank() if m.rows and m.cols else 0
    assert m.rank() == ref
    for v in kernel(m).vectors():
        assert not any(m.apply(v))


@settings(max_examples=60, deadline=None)
@given(matrix(), st.data())
def test_solve_finds_preimages(m, data):
    x = data.draw(st.lists(small, min_size=m.cols, max_size=m.cols))
    b = m.apply(x)
    y = solve(m, b)
    assert y is not None and m.apply(y) == b


def test_solve_inconsistent_is_none():
    assert solve(QMatrix.from_rows([[1], [1]]), [1, 0]) is None


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.data())
def test_subspace_lattice_dimensions(n, data):
    a = Subspace(n, data.draw(st.lists(st.lists(small, min_size=n, max_size=n), max_size=4)))
    b = Subspace(n, data.draw(st.lists(st.lists(small, min_size=n, max_size=n), max_size=4)))
    s, i = subspace_sum(a, b), subspace_intersection(a, b)
    assert s.dim + i.dim == a.dim + b.dim
    assert s.contains_space(a) and a.contains_space(i) and b.contains_space(i)
    assert Subspace(n, a.vectors() + b.vectors()) == s


def test_subspace_ambient_mismatch():
    with pytest.raises(DimensionError):
        subspace_sum(Subspace.full(2), Subspace.full(3))


def test_quotient_projection_kills_subspace():
    u = Subspace(3, [[1, 1, 0]])
    Q = quotient(3, u)
    assert Q.quotient_dim == 2
    assert not any(Q.projection.apply([1, 1, 0]))
    assert (Q.projection @ Q.section) == QMatrix.identity(2)


def test_image_and_preimage():
    m = QMatrix.from_rows([[1, 0], [0, 0]])
    assert image(m) == Subspace(2, [[1, 0]])
    assert preimage(m, Subspace(2, [[1, 0]])) == Subspace.full(2)


def test_form_symmetry_enforced():
    with pytest.raises(FormError):
        BilinearForm(QMatrix.from_rows([[0, 1], [0, 0]]), SYMMETRIC)
    with pytest.raises(FormError):
        BilinearForm(QMatrix.from_rows([[1, 1], [-1, 0]]), SKEW)
    with pytest.raises(FormError):
        signature(BilinearForm(QMatrix.from_rows([[0, 1], [-1, 0]]), SKEW))


def test_signature_examples():
    assert signature(QMatrix.from_rows([[0, 1], [1, 0]])) == 0
    assert signature(QMatrix.from_rows([[1]])) == 1
    assert signature(QMatrix.zeros(0, 0)) == 0
    assert inertia(QMatrix.from_rows([[1, 0, 0], [0, -1, 0], [0, 0, -1]])) == (-1, 1, 2)


@st.composite
def symmetric(draw):
    n = draw(st.integers(1, 5))
    rows = draw(mats(n, n))
    return QMatrix.from_rows([[rows[min(i, j)][max(i, j)] for j in range(n)] for i in range(n)])


@settings(max_examples=100, deadline=None)
@given(symmetric(), st.data())
def test_signature_congruence_invariant_and_eigen_oracle(s, data):
    n = s.rows
    assert signature(s) == symmetric_signature(sympy.Matrix(n, n, list(s.entries)))
    # random unimodular-ish change of basis
    P = QMatrix.identity(n)
    for _ in range(3):
        i, j = data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, n - 1))
        c = data.draw(small)
        if i != j:
            rows = P.to_rows()
            rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
            P = QMatrix.from_rows(rows)
    assert signature(P @ s @ P.T) == signature(s)


def test_chain_homology_circle():
    # triangle boundary: vertices 0,1,2; edges 01,02,12
    bd = {1: [{0: -1, 1: 1}, {0: -1, 2: 1}, {1: -1, 2: 1}]}
    H = ChainHomology([3, 3], bd)
    assert (H.betti(0), H.betti(1)) == (1, 1)
    z = H.reps(1)[0]
    assert H.classify(1, z) == [1]
    assert H.classify(1, {0: 2, 1: -2, 2: 2}) in ([2], [-2])


def test_sparse_kernel_vectors_are_kernel():
    cols = [{0: 1, 1: 1}, {0: 1}, {1: 1}]
    for _, v in sparse_kernel(cols):
        tot = {}
        for j, c in v.items():
            for r, x in cols[j].items():
                tot[r] = tot.get(r, 0) + c * x
        assert not any(tot.values())
