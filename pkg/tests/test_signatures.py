import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import maslov_by_hand
from stratos.catalog import make
from stratos.complex import decomposition, perversity
from stratos.qlinalg import BilinearForm, QMatrix, SKEW, Subspace
from stratos.signatures import (IsotropyError, MaslovProblem, WallReport, interface_space, maslov_data,
                                maslov_index, perverse_signature, restrict_perversity, verify_wall)


def omega(g):
    n = 2 * g
    rows = [[0] * n for _ in range(n)]
    for i in range(g):
        rows[i][g + i] = 1
        rows[g + i][i] = -1
    return rows


def _w(rows, x, y):
    return sum(x[i] * rows[i][j] * y[j] for i in range(len(x)) for j in range(len(y)) if rows[i][j])


def random_symplectic(rnd, g, steps=6):
    """Product of transvections x ↦ x + c ω(v, x) v, as a list of columns."""
    n = 2 * g
    W = omega(g)
    cols = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    for _ in range(steps):
        v = [rnd.randint(-2, 2) for _ in range(n)]
        c = rnd.choice([-1, 1, 2])
        cols = [[x + c * _w(W, v, col) * vi for x, vi in zip(col, v)] for col in cols]
    return cols


def apply(S, vec):
    n = len(vec)
    return [sum(S[j][i] * vec[j] for j in range(n)) for i in range(n)]


def random_isotropic(rnd, g):
    S = random_symplectic(rnd, g)
    r = g if rnd.random() < 0.8 else rnd.randint(0, g)
    return [S[j] for j in range(r)]


def problem(g, a, b, c):
    n = 2 * g
    return MaslovProblem(n, BilinearForm(QMatrix.from_rows(omega(g)), SKEW), Subspace(n, a), Subspace(n, b),
                         Subspace(n, c))


triples = st.tuples(st.sampled_from([1, 2]), st.integers(0, 2 ** 32))


def draw_triple(g, seed):
    rnd = random.Random(seed)
    return [random_isotropic(rnd, g) for _ in range(3)], rnd


@settings(max_examples=300, deadline=None)
@given(triples)
def test_permutations(gs):
    g, seed = gs
    (a, b, c), _ = draw_triple(g, seed)
    s = maslov_index(problem(g, a, b, c))
    assert maslov_index(problem(g, b, c, a)) == s
    assert maslov_index(problem(g, c, a, b)) == s
    assert maslov_index(problem(g, b, a, c)) == -s
    assert maslov_index(problem(g, a, c, b)) == -s


@settings(max_examples=250, deadline=None)
@given(triples)
def test_symplectic_invariance_and_repeats(gs):
    g, seed = gs
    (a, b, c), rnd = draw_triple(g, seed)
    s = maslov_index(problem(g, a, b, c))
    S = random_symplectic(rnd, g)
    moved = [[apply(S, v) for v in U] for U in (a, b, c)]
    assert maslov_index(problem(g, *moved)) == s
    assert maslov_index(problem(g, a, a, c)) == 0
    assert maslov_index(problem(g, a, b, b)) == 0


@settings(max_examples=60, deadline=None)
@given(triples)
def test_against_triple_space_oracle(gs):
    g, seed = gs
    (a, b, c), _ = draw_triple(g, seed)
    if not (a and b and c):
        return
    assert maslov_index(problem(g, a, b, c)) == maslov_by_hand(omega(g), a, b, c)


@pytest.mark.parametrize("c,expected", [([[1, 1]], 1), ([[1, -1]], -1)])
def test_hand_instances(c, expected):
    P = problem(1, [[1, 0]], [[0, 1]], c)
    res = maslov_data(P)
    assert (res.index, res.W_dim) == (expected, 1)
    assert maslov_by_hand(omega(1), [[1, 0]], [[0, 1]], c) == expected


def test_isotropy_and_skewness_enforced():
    with pytest.raises(IsotropyError):
        problem(1, [[1, 0], [0, 1]], [], [])
    with pytest.raises(ValueError):
        MaslovProblem(2, BilinearForm(QMatrix.from_rows([[1, 0], [0, 1]])), Subspace(2), Subspace(2), Subspace(2))
    with pytest.raises(ValueError):
        MaslovProblem(2, BilinearForm(QMatrix.from_rows(omega(1)), SKEW), Subspace(3), Subspace(2), Subspace(2))


def test_signature_needs_dimension_four_k():
    with pytest.raises(ValueError):
        perverse_signature(make("torus2"), perversity(make("torus2"), "zero"), perversity(make("torus2"), "top"))


def test_interface_space_of_glued_balls():
    X = make("glue cone(s3) cone(s3)")
    D = decomposition(X)
    Z = interface_space(D)
    assert Z.dim == 3 and len(Z.facets) == 5 and Z.euler() == 0
    p = perversity(X, "zero")
    assert len(restrict_perversity(X, Z, p)) == len(Z.strata)


def test_wall_report_keys_and_flags():
    r = WallReport(1, 0, 1, 0, {"V": 0, "A": 0, "B": 0, "C": 0, "W": 0}, 0, 0, "x")
    keys = [line.split(" = ")[0] for line in r.text().splitlines()]
    assert keys == ["space", "sigma_X", "sigma_Y1", "sigma_Y2", "maslov", "dim_V", "dim_A", "dim_B", "dim_C",
                    "dim_W", "dim_S", "dim_S_perp", "residual", "dims_consistent"]
    assert r.ok
    bad = WallReport(1, 0, 0, 0, {"V": 0, "A": 0, "B": 0, "C": 0, "W": 0}, 0, 0)
    assert bad.residual == 1 and not bad.ok


def test_verify_wall_rejects_boundary():
    with pytest.raises(ValueError):
        X = make("cylinder-split disk(3)")
        verify_wall(decomposition(X), perversity(X, "zero"), perversity(X, "top"))
