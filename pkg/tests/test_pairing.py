import pytest

from oracles import cup_square_sign
from stratos.catalog import make
from stratos.complex import Perversity, barycentric_subdivide, perversity
from stratos.ichain import boundary0, build_complex, build_qp_quotient
from stratos.pairing import (DualComplex, GeneralPositionError, PairingContractError, block, dual_block,
                             intersection_number, middle_pairing, phi_pairing, pi_chain)
from stratos.qlinalg import signature

NONE = Perversity(())


def test_dual_blocks_pair_to_one():
    X = make("torus2")
    for t in X.simplices(1)[:10]:
        assert intersection_number(X, {t: 1}, dual_block(X, t)) == 1
        other = next(s for s in X.simplices(1) if s != t)
        assert intersection_number(X, {other: 1}, dual_block(X, t)) == 0


def test_block_sizes():
    X = make("sphere 2")
    v = X.simplices(0)[0]
    # dual 2-cell of a vertex: two flags per incident triangle
    assert len(block(X, v)) == 2 * sum(1 for f in X.facets if v[0] in f)


def test_degree_mismatch_rejected():
    X = make("torus2")
    t = X.simplices(1)[0]
    with pytest.raises(PairingContractError):
        intersection_number(X, {X.simplices(0)[0]: 1}, dual_block(X, t))


def test_non_block_chain_rejected():
    X = make("torus2")
    t = X.simplices(1)[0]
    b = dual_block(X, t)
    fl = next(iter(b))
    b[fl] = 2 * b[fl]
    with pytest.raises(GeneralPositionError):
        intersection_number(X, {t: 1}, b)


def test_cp2_form_matches_cup_oracle():
    X = make("cp2")
    M = middle_pairing(X, NONE, NONE)
    assert M.matrix.to_rows() == [[1]]
    assert signature(M.form) == cup_square_sign(X.facets, X.orientation) == 1


def test_reversed_orientation_flips_form():
    X = make("cp2").reverse_orientation()
    assert signature(middle_pairing(X, NONE, NONE).form) == -1


def test_graded_symmetry_in_odd_middle_degree():
    M = middle_pairing(make("torus2"), NONE, NONE).matrix
    assert M.T == -M and M.rank() == 2


def test_sphere_has_empty_form():
    assert middle_pairing(make("sphere 4"), NONE, NONE).matrix.rows == 0


def test_pairing_rejects_non_complementary_perversities():
    X = make("suspend torus3")
    z = perversity(X, "zero")
    with pytest.raises(PairingContractError):
        middle_pairing(X, z, z)


def test_pairing_rejects_boundary():
    with pytest.raises(PairingContractError):
        middle_pairing(make("disk 4"), NONE, NONE)


@pytest.fixture(scope="module")
def susp_t2():
    return make("suspend torus2")


@pytest.mark.parametrize("depth", [0, 1])
def test_dual_homology_matches_simplicial(susp_t2, depth):
    X = susp_t2 if depth == 0 else barycentric_subdivide(susp_t2)[0]
    p, qv = perversity(X, "zero"), perversity(X, "top")
    for perv, killed in ((qv, []), (p, []), (qv, [p])):
        T = build_qp_quotient(X, killed[0], perv) if killed else build_complex(X, perv)
        D = DualComplex(X, perv, killed)
        assert [D.homology(k).betti(k) for k in range(X.dim + 1)] == T.betti()


def test_last_vertex_map_is_a_chain_map(susp_t2):
    X = susp_t2
    D = DualComplex(X, perversity(X, "top"))
    for k in range(1, X.dim + 1):
        fr = D.frame(k)
        for j in range(0, len(fr), max(1, len(fr) // 25)):
            v = {j: 1}
            lhs = pi_chain(X, D.boundary_flags(k, fr.vector(v)))
            rhs = boundary0(X, D.pi(k, fr.vector(v)))
            assert {a: b for a, b in lhs.items() if b} == {a: b for a, b in rhs.items() if b}


def _shift(X, p, qv, i, z, j):
    """z + ∂₀w + u with w a q-allowable (i+1)-chain and u p-allowable."""
    Cq, Cp = build_complex(X, qv), build_complex(X, p)
    w = Cq.to_chain(i + 1, Cq.frame(i + 1).vectors[j % len(Cq.frame(i + 1))])
    out = dict(z)
    for s, c in boundary0(X, w).items():
        out[s] = out.get(s, 0) + c
    if len(Cp.frame(i)):
        u = Cp.to_chain(i, Cp.frame(i).vectors[j % len(Cp.frame(i))])
        for s, c in u.items():
            out[s] = out.get(s, 0) + 3 * c
    return {s: c for s, c in out.items() if c}


def test_phi_independent_of_representatives(susp_t2):
    X = susp_t2
    p, qv = perversity(X, "zero"), perversity(X, "top")
    base = phi_pairing(X, p, qv, 2).matrix
    assert base.T == -base and base.rank() == base.rows
    reps = build_qp_quotient(X, p, qv).homology(2).reps
    for j in (0, 5, 11):
        left = [_shift(X, p, qv, 2, z, j + k) for k, z in enumerate(reps)]
        right = [_shift(X, p, qv, 2, z, 2 * j + k + 1) for k, z in enumerate(reps)]
        assert phi_pairing(X, p, qv, 2, left_reps=left, right_reps=right).matrix == base


def test_phi_rejects_wrong_degrees(susp_t2):
    X = susp_t2
    with pytest.raises(PairingContractError):
        phi_pairing(X, perversity(X, "zero"), perversity(X, "top"), 1, 1)
