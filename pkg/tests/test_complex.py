import random

import pytest

from stratos import catalog
from stratos.catalog import make
from stratos.complex import (ComplexError, StratifiedPseudomanifold, barycentric_subdivide, complement,
                             cone, decomposition, disjoint_union, glue, oriented, perversity, product_with_manifold,
                             restratify_boundary, suspension, validate)
from stratos.ichain import boundary0

SPECS = ["point", "two-points", "circle 4", "interval", "sphere 2", "sphere 3", "sphere 4", "disk 3", "torus2",
         "torus3", "s1xs2", "cp2", "solid-torus", "cone torus2", "suspend torus2", "suspend torus3",
         "suspend s1xs2", "cone-off-boundary solid-torus", "glue cone(s3) cone(s3)", "double cone(t2)",
         "star-split cp2", "cylinder-split disk(3)", "product circle(3) s2", "circle-split suspend(t2)"]


@pytest.mark.parametrize("spec", SPECS)
def test_constructors_validate(spec):
    rep = validate(make(spec))
    assert rep.ok, rep.text()


def test_named_sizes():
    assert make("sphere 3").complex.f_vector() == [5, 10, 10, 5]
    assert make("torus2").complex.f_vector() == [7, 21, 14]
    assert make("cp2").complex.f_vector() == [9, 36, 84, 90, 36]
    st3 = make("suspend torus3")
    assert [(s.level, s.codim) for s in st3.strata] == [(0, 4), (0, 4)]


@pytest.mark.parametrize("spec", ["torus2", "sphere 2", "s1xs2", "circle 5", "two-points"])
def test_euler_of_cone_and_suspension(spec):
    Z = make(spec)
    assert cone(Z).euler() == 1
    assert suspension(Z).euler() == 2 - Z.euler()


@pytest.mark.parametrize("spec", ["cone(s3)", "cone(t2)", "solid-torus", "disk(3)"])
def test_euler_of_glue(spec):
    Y = make(spec)
    X, D = glue(Y, Y.reverse_orientation())
    Z = StratifiedPseudomanifold(Y.dim - 1, dict(D.Z_orientation))
    assert X.euler() == 2 * Y.euler() - Z.euler()


def test_glue_keeps_piece_orientations():
    Y1 = make("cone(s3)")
    Y2 = make("cone(s3)").reverse_orientation()
    X, _ = glue(Y1, Y2)
    assert not X.meta["reversed_second"]
    for f, o in Y1.orientation.items():
        assert X.orientation[f] == o
    n1 = Y1.complex.n_vertices
    nz = len({v for b in Y1.boundary for v in b})
    m2 = {v: n1 + nz + i for i, v in enumerate(Y2.complex.vertices())}
    for f, o in Y2.orientation.items():
        t, sg = oriented([m2[v] for v in f])
        assert X.orientation[t] == o * sg


def test_glue_orientation_clash_is_strict():
    Y = make("cone(s3)")
    with pytest.raises(ComplexError, match="orientation clash"):
        glue(Y, Y)
    X, _ = glue(Y, Y, allow_reverse=True)
    assert X.meta["reversed_second"]


def test_glue_boundary_mismatch():
    with pytest.raises(ComplexError, match="boundary mismatch"):
        glue(make("cone(s2)"), make("solid-torus"))


def test_product_with_point_and_interval_counts():
    X = make("torus2")
    P = product_with_manifold(X, catalog.point())
    assert P.complex.f_vector() == X.complex.f_vector()
    # staircase: k+1 simplices per (edge, k-simplex) pair
    I = catalog.interval(1)
    B = product_with_manifold(X, I)
    assert len(B.facets) == 3 * len(X.facets)
    assert validate(B).ok
    two = product_with_manifold(X, catalog.two_points())
    assert len(two.facets) == 2 * len(X.facets) and two.euler() == 2 * X.euler()


def test_product_rejects_stratified_factor():
    with pytest.raises(ComplexError):
        product_with_manifold(make("torus2"), make("cone(s1)"))


def test_disjoint_union_counts():
    U = disjoint_union(make("circle 3"), make("circle 4"))
    assert U.complex.f_vector() == [7, 7] and validate(U).ok


@pytest.mark.parametrize("spec", ["cone torus2", "disk 3", "solid-torus", "cone(s2)"])
def test_restratify_then_forget_is_identity(spec):
    X = make(spec)
    R = restratify_boundary(X)
    assert not R.X.has_boundary
    base = X if not R.subdivided else barycentric_subdivide(X)[0]
    assert R.X.forget_strata().complex == base.complex
    for st in R.X.strata:
        if R.is_boundary_stratum(st.id):
            assert all(set(s) <= {v for b in base.boundary for v in b} for s in st.simplices)


def test_restratified_perversity_lift():
    X = make("cone torus2")
    R = restratify_boundary(X)
    p = perversity(X, "zero")
    ph, qh = R.lift(p, "p"), R.lift(complement(X, p), "q")
    for st in R.X.strata:
        assert ph[st.id] + qh[st.id] == st.codim - 2


@pytest.mark.parametrize("spec", ["suspend torus2", "cone-off-boundary solid-torus", "sphere 3"])
def test_subdivision_is_a_chain_map(spec):
    X = make(spec)
    Xs, s = barycentric_subdivide(X)
    rnd = random.Random(7)
    for trial in range(100):
        d = rnd.randint(1, X.dim)
        pool = X.simplices(d)
        chain = {}
        for t in rnd.sample(pool, min(len(pool), rnd.randint(1, 4))):
            chain[t] = rnd.choice([-2, -1, 1, 3])
        lhs = boundary0(Xs, s.apply(chain))
        rhs = s.apply(boundary0(X, chain))
        assert {k: v for k, v in lhs.items() if v} == {k: v for k, v in rhs.items() if v}, trial


def test_subdivision_preserves_parts_and_strata():
    X = make("star-split cp2")
    Xs, _ = barycentric_subdivide(X)
    assert validate(Xs).ok
    assert len(Xs.facets) == 120 * len(X.facets)
    D = decomposition(Xs)
    assert len(D.Y1) == 120 * sum(1 for v in X.parts.values() if v == 1)
    S = make("suspend torus2")
    assert [s.codim for s in barycentric_subdivide(S)[0].strata] == [s.codim for s in S.strata]


def _drop_facet(X):
    f = X.facets[0]
    o = {g: v for g, v in X.orientation.items() if g != f}
    return StratifiedPseudomanifold(X.dim, o), f


def test_validation_names_the_offending_face():
    Y, f = _drop_facet(make("sphere 2"))
    rep = validate(Y)
    c = rep.get("non_branching")
    assert not c.ok and c.simplex is not None and set(c.simplex) < set(f)


def test_validation_orientation_failure():
    X = make("sphere 2")
    o = dict(X.orientation)
    f = next(iter(o))
    o[f] = -o[f]
    bad = StratifiedPseudomanifold(2, o)
    assert not validate(bad).get("orientation").ok


def test_validation_density_failure():
    X = make("sphere 2")
    lv = {f: 1 for f in X.facets}
    rep = validate(X.replace(levels=lv))
    assert not rep.ok


def test_decomposition_needs_parts():
    with pytest.raises(ComplexError):
        decomposition(make("sphere 4"))


def test_suspension_rejects_boundary():
    with pytest.raises(ComplexError):
        suspension(make("disk 2"))
