import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import betti_numbers
from stratos.catalog import make
from stratos.complex import Perversity, complement, perversity
from stratos.ichain import (PerversityOrderError, allowable, boundary0, build_complex, build_qp_quotient,
                            image_group, les_check, ordinary_homology, sequence3, sequence4)

SPACES = {s: make(s) for s in ["suspend torus2", "cone torus2", "cone-off-boundary solid-torus"]}


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(SPACES)), st.integers(0, 10 ** 6))
def test_erasing_boundary_squares_to_zero(name, seed):
    X = SPACES[name]
    rnd = random.Random(seed)
    d = rnd.randint(2, X.dim)
    pool = X.simplices(d)
    chain = {t: rnd.randint(-3, 3) or 1 for t in rnd.sample(pool, min(5, len(pool)))}
    assert not any(boundary0(X, boundary0(X, chain)).values())


@pytest.mark.parametrize("name", sorted(SPACES))
def test_reps_are_allowable_cycles_and_include(name):
    X = SPACES[name]
    p, t = perversity(X, "zero"), perversity(X, "top")
    Cp, Ct = build_complex(X, p), build_complex(X, t)
    for i in range(X.dim + 1):
        H = Cp.homology(i)
        for z in H.reps:
            assert Cp.contains(i, z) and Ct.contains(i, z)
            assert not any(boundary0(X, z).values())
        ident = [H.classify(z) for z in H.reps]
        assert ident == [[1 if a == b else 0 for b in range(H.dim)] for a in range(H.dim)]


def test_allowable_condition_at_cone_point():
    X = make("cone torus2")
    assert X.strata[0].simplices == ((0,),)
    edge = next(s for s in X.simplices(1) if 0 in s)
    tri = next(s for s in X.simplices(2) if 0 in s)
    zero = perversity(X, "zero")
    top = perversity(X, "top")       # t̄ = 1 at codim 3
    assert not allowable(edge, 1, zero, X) and not allowable(edge, 1, top, X)
    assert not allowable(tri, 2, zero, X) and allowable(tri, 2, top, X)


@pytest.mark.parametrize("spec", ["sphere 2", "torus2", "sphere 3", "cp2", "suspend sphere(2)"])
def test_ordinary_homology_matches_dense_oracle(spec):
    X = make(spec)
    assert ordinary_homology(X) == betti_numbers(X.facets)


def test_trivial_stratification_ignores_perversity():
    X = make("torus2")
    assert build_complex(X, Perversity(())).betti() == [1, 2, 1]


def test_quotient_needs_ordered_perversities():
    X = SPACES["cone torus2"]
    with pytest.raises(PerversityOrderError):
        build_qp_quotient(X, perversity(X, "top"), perversity(X, "zero"))


def test_sequence3_exact_on_suspended_torus():
    X = SPACES["suspend torus2"]
    p = perversity(X, "zero")
    maps, names = sequence3(X, p, complement(X, p))
    spots = les_check(maps, names)
    assert spots and all(s.ok for s in spots), [s for s in spots if not s.ok]


def test_sequence4_exact_on_cone_with_base():
    X = SPACES["cone torus2"]
    p = Perversity((0,))
    Y = [b for b in X.boundary]
    maps, names = sequence4(X, p, Perversity((1,)), Y)
    assert all(s.ok for s in les_check(maps, names))


def test_image_group_representatives_are_source_cycles():
    X = SPACES["suspend torus2"]
    p, qv = perversity(X, "zero"), perversity(X, "top")
    G = image_group(X, p, qv, 2)
    assert G.dim == 0 or all(build_complex(X, p).contains(2, z) for z in G.reps)
    Hq = build_complex(X, qv).homology(2)
    for z, c in zip(G.reps, G.coords):
        assert Hq.classify(z) == c
