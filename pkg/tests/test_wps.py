import json
import random
from fractions import Fraction

import pytest
import sympy as sp

from symcone.wps import (
    INFINITY,
    NOTATION_PARAMS,
    ST,
    XS,
    CurveOnX,
    LinForm,
    antidiagonal_components,
    build_wps,
    conic_parametrization,
    curves_disjoint,
    curves_meet,
    diagonal_lines,
    hexagon_curves,
    is_hexagon,
    is_tangent_to_conic,
    node_points,
    no_three_concurrent,
    nodes_ok,
    random_params,
    singular_point_count,
    sylvester_resultant,
    tangency_point,
    tangent_line,
    verify_curve_on_x,
)

x1, x2, x3 = sp.symbols("x1 x2 x3")
s, t = sp.symbols("s t")


@pytest.fixture(scope="module")
def S():
    return build_wps(1, NOTATION_PARAMS)


def test_tangent_line_at_zero():
    assert tangent_line(0).coeffs == (0, 1, 0)
    assert tangency_point(0) == (1, 0, 0)


def test_notation_lines():
    lines = [tangent_line(p) for p in NOTATION_PARAMS]
    assert [l.coeffs for l in lines] == [(1, 0, 0), (0, 1, 0), (1, 1, -1), (1, 1, 1)]


@pytest.mark.parametrize("p", [INFINITY, 0, 1, -1, Fraction(2, 3), Fraction(-7, 5), 11])
def test_tangent_lines_touch_the_conic_once(p):
    l = tangent_line(p)
    assert is_tangent_to_conic(l)
    assert l(tangency_point(p)) == 0
    # independent check: x3^2 - 4 x1 x2 restricted to the line is a square binary form
    par = [c.as_expr() for c in l.parametrization()]
    q = sp.Poly(sp.expand(par[2] ** 2 - 4 * par[0] * par[1]), s, t)
    a, b, c = (q.coeff_monomial(m) for m in (s**2, s * t, t**2))
    assert b * b - 4 * a * c == 0


def test_distinct_params_distinct_lines():
    ps = [INFINITY] + [Fraction(k, 3) for k in range(-6, 7)]
    assert len({tangent_line(p).coeffs for p in ps}) == len(ps)


def test_equation(S):
    expected = sp.expand(x1 * x2 * (x1 + x2 - x3) * (x1 + x2 + x3))
    assert sp.expand(S.rhs.as_expr() - expected) == 0
    assert S.weights == (1, 1, 1, 2)


@pytest.mark.parametrize("g", range(1, 6))
def test_nodes(g):
    rng = random.Random(100 + g)
    for _ in range(2):
        S = build_wps(g, random_params(g, rng))
        assert singular_point_count(S) == (2 * g + 2) * (2 * g + 1) // 2
        assert nodes_ok(S)
        assert no_three_concurrent(S)
        assert all(is_tangent_to_conic(l) for l in S.branch_lines)
    assert singular_point_count(build_wps(2, [INFINITY, 0, 1, -1, 2, -2])) == 15


def test_build_validation():
    with pytest.raises(ValueError):
        build_wps(1, [0, 1, 2])
    with pytest.raises(ValueError):
        build_wps(1, [0, 1, 1, 2])
    with pytest.raises(ValueError):
        build_wps(0, [])


def test_notation_curves_lie_on_x(S):
    for name, c in S.curves.items():
        assert verify_curve_on_x(S, c), name
    e = S.curves["E(12)(34)"]
    assert sp.expand(e.section.as_expr() + x2 * x3) == 0
    f = S.curves["E(13)(24)"]
    assert sp.expand(f.base.as_expr() - (x1 - x2 + x3)) == 0
    assert sp.expand(f.section.as_expr() - (-2 * x2**2 + 2 * x2 * x3)) == 0


def test_notation_curve_by_hand(S):
    # on x1 = -x2 the product x1 x2 (x1+x2-x3)(x1+x2+x3) is x2^2 x3^2
    rhs = S.rhs.as_expr().subs(x1, -x2)
    assert sp.expand(rhs - x2**2 * x3**2) == 0


def test_perturbed_section_fails(S):
    e = S.curves["E(12)(34)"]
    bad = CurveOnX("bad", e.base, e.param, e.section + sp.Poly(x3**2, *XS, domain="QQ"), e.line)
    assert not verify_curve_on_x(S, bad)


def test_antidiagonal(S):
    minus, plus = antidiagonal_components(S)
    par = conic_parametrization()
    x4 = sp.expand(minus.section.as_expr().subs({x1: s**2, x2: t**2, x3: 2 * s * t}, simultaneous=True))
    assert sp.expand(x4**2 - (s * t * (s**2 - t**2)) ** 2) == 0
    assert sp.expand(plus.section.as_expr() + minus.section.as_expr()) == 0
    assert sp.expand(minus.section.as_expr() - (-x1 * x3 + x2 * x3) / 2) == 0
    assert verify_curve_on_x(S, minus) and verify_curve_on_x(S, plus)
    for name in ("E(12)(34)", "E(13)(24)", "E(23)(14)"):
        assert curves_disjoint(minus, S.curves[name])
    # the two components meet where x4 vanishes: st(s^2 - t^2) = 0, four points
    assert sp.Poly(x4, s, t).total_degree() == 4
    assert len(sp.roots(sp.Poly(x4.subs(t, 1), s))) + 1 == 4
    assert curves_meet(minus, plus)


def test_disjoint_by_hand(S):
    a, b = S.curves["E(12)(34)"], S.curves["E(13)(24)"]
    p = {x1: 1, x2: -1, x3: -2}
    assert a.base.as_expr().subs(p) == 0 and b.base.as_expr().subs(p) == 0
    assert a.section.as_expr().subs(p) == -2
    assert b.section.as_expr().subs(p) == 2
    assert curves_disjoint(a, b)
    assert not curves_disjoint(a, a)
    assert curves_meet(a, S.curves["E'(13)(24)"])


def test_unprimed_triple_pairwise_disjoint(S):
    names = ["E(12)(34)", "E(13)(24)", "E(23)(14)"]
    for i, u in enumerate(names):
        for v in names[i + 1:]:
            assert curves_disjoint(S.curves[u], S.curves[v])


def test_hexagon(S):
    hexa = hexagon_curves(S)
    assert is_hexagon(hexa, exclude=node_points(S))
    assert not is_hexagon(hexa[:5], exclude=node_points(S))


def test_diagonal_lines(S):
    lines = diagonal_lines(S)
    got = sorted(l.coeffs for l in lines.values())
    assert got == sorted(LinForm(c).coeffs for c in ((1, 1, 0), (1, -1, 1), (1, -1, -1)))


def test_resultant_against_sympy():
    f = sp.Poly(s**2 - 3 * s * t + 2 * t**2, *ST, domain="QQ")
    g = sp.Poly(s - 5 * t, *ST, domain="QQ")
    ours = sylvester_resultant(f, g, 2, 1)
    ref = sp.resultant(f.as_expr().subs(t, 1), g.as_expr().subs(t, 1), s)
    assert ours == Fraction(int(ref.p), int(ref.q))
    h = sp.Poly(s - t, *ST, domain="QQ")
    assert sylvester_resultant(f, h, 2, 1) == 0


def test_json(S):
    data = json.loads(S.to_json())
    assert data["genus"] == 1
    assert data["params"] == ["infinity", "0", "1", "-1"]
    assert len(data["singular_points"]) == 6
    assert set(data["curves"]) >= {"E(12)(34)", "delta-", "delta+"}
    assert "." not in json.dumps(data["lines"])
