import json
from fractions import Fraction

import pytest

from symcone.exact import RatMatrix, det, nullspace, rank, signature
from symcone.lattice import pair, self_int
from symcone.surfaces import (
    Z_A1_CLASSES,
    Z_BASIS,
    Z_CURVES,
    Z_GRAPH_EDGES,
    build_sym2,
    build_x,
    build_xtilde_g1,
    build_xtilde_span,
    build_z,
    dn_class,
    gamma_class,
    graph_consistent,
    orthogonal_complement,
    rn_class,
    z_intersection_graph,
    z_pullback,
    z_pushforward,
)

HALF = Fraction(1, 2)


@pytest.fixture(scope="module")
def xt():
    return build_xtilde_g1()


@pytest.fixture(scope="module")
def z():
    return build_z()


def test_sym2_grams():
    assert build_sym2(1).lattice.gram == RatMatrix([[0, 4], [4, 0]])
    assert build_sym2(2).lattice.gram == RatMatrix([[-4, 6], [6, -1]])
    assert self_int(build_sym2(1)["delta+"]) == 0
    with pytest.raises(ValueError):
        build_sym2(0)


@pytest.mark.parametrize("g", range(1, 11))
def test_x_gram(g):
    X = build_x(g)
    cp, cm = X["C+"], X["C-"]
    assert self_int(cp + cm) == 8
    assert self_int(cp) == self_int(cm) == 2 - 2 * g
    assert pair(cp, cm) == 2 * g + 2
    if g == 1:
        assert X.lattice.gram == RatMatrix([[0, 4], [4, 0]])


def test_xtilde_g1(xt):
    assert xt.lattice.gram == RatMatrix([[HALF, HALF, 0], [HALF, 0, 0], [0, 0, -HALF]])
    assert xt["C"].free == (-xt["K"]).free
    assert pair(xt["C"], xt["delta-"]) == 0
    assert all(xt.check_relations().values())


@pytest.mark.parametrize("g", range(2, 6))
def test_xtilde_span(g):
    m = build_xtilde_span(g)
    G = m.lattice.gram
    assert G.is_symmetric()
    assert G[0, 0] == 2 - 2 * g
    assert self_int(m["E"]) == -HALF
    if g == 3:
        assert G[0, 0] == -4
    with pytest.raises(ValueError):
        build_xtilde_span(1)


def test_z_lattice(z):
    G = z.lattice.gram
    assert abs(det(G)) == 1
    assert signature(G) == (1, 9, 0)
    assert all(z.check_relations().values())
    assert self_int(z["delta-"]) == -2
    assert graph_consistent(z)


def test_z_curves_match_graph(z):
    graph = z_intersection_graph()
    names = list(Z_CURVES)
    for i, a in enumerate(names):
        assert self_int(z[a]) == Z_CURVES[a]
        assert pair(z[a], z["K"]) == -2 - Z_CURVES[a]
        for b in names[i + 1:]:
            assert pair(z[a], z[b]) == int(graph.adjacent(a, b)), (a, b)
    assert all(z[c].is_integral() for c in names)


def test_a1_sublattice_orthogonal_to_c(z):
    classes = [z[c] for c in Z_A1_CLASSES]
    gram = RatMatrix([[pair(a, b) for b in classes] for a in classes])
    assert gram == RatMatrix.identity(8).scale(-2)
    assert all(pair(a, z["C"]) == 0 for a in classes)


def test_c_perp(z):
    C = z["C"]
    assert self_int(C) == 0
    perp = orthogonal_complement(z, C)
    assert len(perp) == 9
    restricted = RatMatrix([[pair(a, b) for b in perp] for a in perp])
    assert rank(restricted) == 8
    # the radical of the restricted form is spanned by C itself
    rad = [sum((c * v for c, v in zip(coeffs, perp)), z.lattice.zero()) for coeffs in nullspace(restricted)]
    assert len(rad) == 1
    r = rad[0]
    k = next(a / b for a, b in zip(r.free, C.free) if b != 0)
    assert r == C * k


def test_dot_output():
    dot = z_intersection_graph().to_dot()
    assert dot.startswith("graph Z {")
    assert dot.count("--") == len(Z_GRAPH_EDGES)
    assert '"delta-" [fillcolor=red' in dot
    assert '"E" [fillcolor=blue' in dot
    assert dot.count("fillcolor=red") == 8
    assert dot.count("fillcolor=blue") == 8


def test_model_json(xt, z):
    for m in (xt, z, build_x(3)):
        data = json.loads(m.to_json())
        assert data["lattice"]["gram"] == m.lattice.gram.to_strings()
        assert all(r["holds"] for r in data["relations"])
    assert "cover" in json.loads(build_x(2).to_json())


def test_dn_examples(xt):
    assert dn_class(xt, 0) == xt["E"]
    d1 = dn_class(xt, 1)
    assert d1.free == (4, -2, -1)
    assert self_int(d1) == -HALF
    for n in range(51):
        d = dn_class(xt, n)
        assert pair(d, xt["K"]) == -1
        assert self_int(d) == -HALF
    with pytest.raises(ValueError):
        dn_class(xt, -1)


def test_gamma_examples(xt):
    assert gamma_class(xt, 2).free == (2, -1, -1)
    assert pair(gamma_class(xt, 6), dn_class(xt, 2)) == HALF
    for m in range(2, 13):
        assert (2 * gamma_class(xt, m) + xt["delta-"] + m * xt["K"]).numerical().is_zero()
    with pytest.raises(ValueError):
        gamma_class(xt, 1)


@pytest.mark.parametrize("n", range(21))
def test_rn(n, xt, z):
    R = rn_class(z, n, xt)
    assert R.is_integral()
    assert self_int(R) == -1
    assert pair(R, z["K"]) == -1
    assert pair(R, z["delta-"]) == 2 * n + 1
    assert pair(R, z["E'"]) == 1
    for e in ("E12", "E13", "E14", "E23", "E24", "E34"):
        assert pair(R, z[e]) == 0
    assert z_pushforward(z, xt, R) == dn_class(xt, n)


def test_pullback_projection_formula(xt, z):
    for name in ("E1", "E(12)(34)", "E", "K"):
        a = xt[name].numerical()
        pa = z_pullback(z, xt, a)
        assert z_pushforward(z, xt, pa) == a
        for other in ("E1", "E(12)(34)", "E"):
            b = xt[other]
            assert pair(pa, z_pullback(z, xt, b)) == pair(a, b)
        for c in ("E12", "E34", "E'"):
            assert pair(pa, z[c]) == 0


def test_k_pulls_back_to_k(xt, z):
    assert z_pullback(z, xt, xt["K"]) == z["K"]


def test_graph_edges_are_distinct_curves():
    assert all(u in Z_CURVES and v in Z_CURVES and u != v for u, v in Z_GRAPH_EDGES)
    assert len(set(map(frozenset, Z_GRAPH_EDGES))) == len(Z_GRAPH_EDGES)
    assert set(Z_BASIS) <= set(Z_CURVES)
