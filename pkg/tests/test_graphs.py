import numpy as np
import pytest

from ffcircle.ffcore import GF, Poly
from ffcircle.graphs import (
    ConstructionError,
    build_graph,
    default_nu,
    determinant_flip_check,
    diameter,
    distance,
    find_suitable_g,
    generators,
    group_orders,
    is_connected,
    is_symmetric,
    norm_one_pairs,
    norm_witnesses,
    read_edge_list,
    second_eigenvalue,
    spectral_report,
    two_coloring,
    write_edge_list,
)

import oracles


@pytest.fixture(scope="module")
def G():
    return build_graph(3, "t^2+t+2")


@pytest.mark.parametrize("q,g", [(3, "t^2+1"), (5, "t^2+2"), (7, "t^2+1")])
def test_generator_count(q, g):
    gens = generators(q, g)
    assert len(gens) == q + 1
    assert {m.inverse() for m in gens} == set(gens)


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_norm_one_pairs(q):
    F = GF.get(q)
    nu = default_nu(q)
    pairs = norm_one_pairs(F, nu)
    assert len(pairs) == q + 1
    for x3, x4 in pairs:
        assert F.sub(F.mul(x3, x3), F.mul(nu, F.mul(x4, x4))) == F.neg(1)


def test_generators_reject_bad_g():
    with pytest.raises(ConstructionError):
        generators(3, "t^2+t")
    with pytest.raises(ValueError):
        generators(3, "t^2+1", nu=1)


def test_graph_matches_independent_construction(G):
    k, n, ecc = oracles.morgenstern_q3_quadratic([2, 1, 1])
    assert (G.degree, G.n, diameter(G)) == (k, n, ecc) == (4, 720, 9)


def test_non_bipartite_graph_matches_oracle():
    G2 = build_graph(3, "t^2+1")
    k, n, ecc = oracles.morgenstern_q3_quadratic([1, 0, 1])
    assert (G2.n, diameter(G2)) == (n, ecc) == (360, 8)
    assert two_coloring(G2) is None
    assert determinant_flip_check(G2)
    assert group_orders(3, "t^2+1") == {"PGL2": 720, "PSL2": 360}


def test_graph_structure(G):
    assert is_connected(G) and is_symmetric(G)
    colors = two_coloring(G)
    assert colors is not None
    # bipartite: every edge joins the two colour classes
    assert (colors[G.adj] != colors[:, None]).all()


def test_distances(G):
    I = G.identity
    assert distance(G, I, I) == 0
    for s in G.gens:
        assert distance(G, G.matrix((1, 0, 0, 1)), s) == 1
    assert distance(G, I, G.matrix((1, 0, 0, -1))) == 8


def test_ramanujan(G):
    rep = spectral_report(G)
    assert rep.ramanujan and rep.bipartite
    assert rep.bound == pytest.approx(2 * np.sqrt(3))
    assert rep.lambda2 == pytest.approx(3.288245611270741, abs=1e-9)


def test_second_eigenvalue_k5():
    K5 = np.ones((5, 5)) - np.eye(5)
    assert second_eigenvalue(K5) == pytest.approx(-1)


def test_find_suitable_g():
    assert find_suitable_g(3, 2, "bipartite") == Poly.parse(3, "t^2+t+2")
    assert find_suitable_g(3, 2, "non_bipartite") == Poly.parse(3, "t^2+1")
    with pytest.raises(LookupError):
        find_suitable_g(3, 1)


def test_witnesses_absent_below_distance():
    g = Poly.parse(3, "t^2+t+2")
    for h in (2, 4, 6):
        assert norm_witnesses(3, g, h)[0] == 0


def test_edge_list_roundtrip(G, tmp_path):
    path = tmp_path / "g.edges"
    m = write_edge_list(G, path)
    head, E = read_edge_list(path)
    assert m == len(E) == G.n * G.degree // 2
    assert head["n_vertices"] == 720 and head["q"] == 3 and head["g"] == "t^2+t+2"
    deg = np.bincount(E.ravel(), minlength=G.n)
    assert (deg == 4).all()
