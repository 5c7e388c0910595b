"""The double plane X: x4^2 = l_1 ... l_{2g+2} in P(1,1,1,g+1).

The branch lines are tangent to the conic ``x3^2 = 4 x1 x2``.  Curves on X are
described by a plane base curve with a rational parametrization plus a
polynomial section giving x4 along it.  All checks are polynomial identities
over Q, so they hold over the algebraic closure without extracting roots.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Sequence

import sympy as sp

from .exact import RatMatrix, as_rat, cross, det, nullspace, solve_any

x1, x2, x3 = XS = sp.symbols("x1 x2 x3")
s, t = ST = sp.symbols("s t")

INFINITY = "infinity"

# tangency parameters of L1..L4 = V(x1), V(x2), V(x1+x2-x3), V(x1+x2+x3)
NOTATION_PARAMS = (INFINITY, Fraction(0), Fraction(1), Fraction(-1))


def conic_poly() -> sp.Poly:
    return sp.Poly(x3**2 - 4 * x1 * x2, *XS, domain="QQ")


def _normalize(v: Sequence) -> tuple[Fraction, ...]:
    v = tuple(as_rat(a) for a in v)
    lead = next((a for a in v if a != 0), None)
    if lead is None:
        raise ValueError("zero vector is not a projective point")
    return tuple(a / lead for a in v)


@dataclass(frozen=True)
class LinForm:
    """A plane line a1 x1 + a2 x2 + a3 x3, scaled so the first nonzero coefficient is 1."""

    coeffs: tuple[Fraction, Fraction, Fraction]

    def __init__(self, coeffs: Sequence):
        object.__setattr__(self, "coeffs", _normalize(coeffs))

    @property
    def poly(self) -> sp.Poly:
        a = [sp.Rational(c.numerator, c.denominator) for c in self.coeffs]
        return sp.Poly(a[0] * x1 + a[1] * x2 + a[2] * x3, *XS, domain="QQ")

    def parametrization(self) -> tuple[sp.Poly, sp.Poly, sp.Poly]:
        p, q = nullspace(RatMatrix([self.coeffs]))
        return tuple(
            sp.Poly(_q(pi) * s + _q(qi) * t, *ST, domain="QQ") for pi, qi in zip(p, q)
        )

    def __call__(self, point: Sequence) -> Fraction:
        return sum((c * as_rat(x) for c, x in zip(self.coeffs, point)), Fraction(0))

    def __str__(self) -> str:
        return str(self.poly.as_expr())


def _q(x: Fraction) -> sp.Rational:
    return sp.Rational(x.numerator, x.denominator)


def _substitute(f: sp.Poly, param: Sequence[sp.Poly]) -> sp.Poly:
    """f(param) as a binary form in (s, t)."""
    expr = f.as_expr().subs({xi: pi.as_expr() for xi, pi in zip(XS, param)}, simultaneous=True)
    return sp.Poly(sp.expand(expr), *ST, domain="QQ")


def binary_coefficients(f: sp.Poly, degree: int) -> list[Fraction]:
    """Coefficients of s^degree, s^(degree-1) t, ..., t^degree."""
    out = []
    for k in range(degree, -1, -1):
        c = f.coeff_monomial(s**k * t ** (degree - k))
        out.append(Fraction(int(c.p), int(c.q)))
    return out


def sylvester_resultant(f: sp.Poly, g: sp.Poly, df: int, dg: int) -> Fraction:
    """Resultant of two binary forms of formal degrees df, dg.

    It vanishes exactly when the forms share a root in P^1 over the algebraic
    closure (including the point at infinity).
    """
    a, b = binary_coefficients(f, df), binary_coefficients(g, dg)
    n = df + dg
    if n == 0:
        return Fraction(1)
    rows = [[0] * i + a + [0] * (n - df - 1 - i) for i in range(dg)]
    rows += [[0] * i + b + [0] * (n - dg - 1 - i) for i in range(df)]
    return det(RatMatrix(rows, n))


def tangent_line(param) -> LinForm:
    """Tangent to the conic at (1 : t^2 : 2t), or at (0 : 1 : 0) for t = infinity."""
    if param == INFINITY:
        line = LinForm((1, 0, 0))
    else:
        tv = as_rat(param)
        line = LinForm((tv * tv, 1, -tv))
    if not is_tangent_to_conic(line):
        raise AssertionError(f"{line} is not tangent to the conic")
    return line


def tangency_point(param) -> tuple[Fraction, ...]:
    if param == INFINITY:
        return (Fraction(0), Fraction(1), Fraction(0))
    tv = as_rat(param)
    return _normalize((1, tv * tv, 2 * tv))


def tangency_discriminant(line: LinForm) -> Fraction:
    """Discriminant of the conic restricted to the line (a binary quadratic)."""
    q = _substitute(conic_poly(), line.parametrization())
    a, b, c = binary_coefficients(q, 2)
    return b * b - 4 * a * c


def is_tangent_to_conic(line: LinForm) -> bool:
    return tangency_discriminant(line) == 0


@dataclass
class CurveOnX:
    """A curve on X: base plane curve, its parametrization, and x4 along it."""

    name: str
    base: sp.Poly
    param: tuple[sp.Poly, sp.Poly, sp.Poly]
    section: sp.Poly
    line: LinForm | None = None

    @classmethod
    def over_line(cls, name: str, line: LinForm, section) -> CurveOnX:
        return cls(name, line.poly, line.parametrization(), sp.Poly(section, *XS, domain="QQ"), line)

    def negated(self, name: str) -> CurveOnX:
        return CurveOnX(name, self.base, self.param, -self.section, self.line)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "base": str(self.base.as_expr()),
            "x4": str(self.section.as_expr()),
        }


@dataclass
class WpsSurface:
    genus: int
    params: tuple
    branch_lines: tuple[LinForm, ...]
    rhs: sp.Poly
    singular_points: list[tuple[tuple[Fraction, ...], tuple[int, int]]]
    curves: dict[str, CurveOnX] = field(default_factory=dict)

    @property
    def weights(self) -> tuple[int, int, int, int]:
        return (1, 1, 1, self.genus + 1)

    def equation(self) -> str:
        return f"x4**2 - ({self.rhs.as_expr()})"

    def lines_through(self, point: Sequence) -> list[int]:
        return [i for i, l in enumerate(self.branch_lines) if l(point) == 0]

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "weights": list(self.weights),
            "params": [str(p) for p in self.params],
            "lines": [[str(c) for c in l.coeffs] for l in self.branch_lines],
            "equation": self.equation(),
            "singular_points": [
                {"point": [str(c) for c in pt], "lines": [i + 1, j + 1]} for pt, (i, j) in self.singular_points
            ],
            "curves": {k: c.to_dict() for k, c in self.curves.items()},
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def build_wps(g: int, params: Sequence) -> WpsSurface:
    """The surface branched over the 2g+2 conic tangents with the given parameters."""
    if g < 1:
        raise ValueError("genus must be at least 1")
    params = tuple(p if p == INFINITY else as_rat(p) for p in params)
    if len(params) != 2 * g + 2:
        raise ValueError(f"need {2 * g + 2} tangency parameters, got {len(params)}")
    if len(set(params)) != len(params):
        raise ValueError("tangency parameters must be pairwise distinct")
    lines = tuple(tangent_line(p) for p in params)
    rhs = sp.Poly(1, *XS, domain="QQ")
    for l in lines:
        rhs = rhs * l.poly
    sing = []
    for i, j in combinations(range(len(lines)), 2):
        pt = _normalize(cross(lines[i].coeffs, lines[j].coeffs))
        sing.append((pt, (i, j)))
    S = WpsSurface(g, params, lines, rhs, sing)
    if g == 1 and params == NOTATION_PARAMS:
        for c in notation_curves():
            S.curves[c.name] = c
        minus, plus = antidiagonal_components(S)
        S.curves[minus.name] = minus
        S.curves[plus.name] = plus
    return S


def singular_point_count(S: WpsSurface) -> int:
    return len(S.singular_points)


def nodes_ok(S: WpsSurface) -> bool:
    """C(2g+2, 2) distinct points, each on exactly two branch lines."""
    pts = [p for p, _ in S.singular_points]
    return (
        len(pts) == comb(2 * S.genus + 2, 2)
        and len(set(pts)) == len(pts)
        and all(len(S.lines_through(p)) == 2 for p in pts)
    )


def no_three_concurrent(S: WpsSurface) -> bool:
    return all(
        det(RatMatrix([S.branch_lines[i].coeffs, S.branch_lines[j].coeffs, S.branch_lines[k].coeffs])) != 0
        for i, j, k in combinations(range(len(S.branch_lines)), 3)
    )


def verify_curve_on_x(S: WpsSurface, c: CurveOnX) -> bool:
    """The parametrized base lies on its curve and x4^2 = prod(l_i) along it."""
    if not _substitute(c.base, c.param).is_zero:
        return False
    if c.section.total_degree() > S.genus + 1:
        return False
    diff = c.section**2 - S.rhs
    return _substitute(diff, c.param).is_zero


def _meeting_forms(a: CurveOnX, b: CurveOnX) -> tuple[sp.Poly, sp.Poly, int, int]:
    P = _substitute(b.base, a.param)
    Q = _substitute(a.section - b.section, a.param)
    da = max(p.total_degree() for p in a.param)
    return P, Q, b.base.total_degree() * da, max(a.section.total_degree(), b.section.total_degree()) * da


def _point_factor(param: Sequence[sp.Poly], point: Sequence[Fraction]) -> sp.Poly:
    """Binary form vanishing exactly at the parameters mapped to ``point``."""
    pt = [_q(as_rat(c)) for c in point]
    minors = [
        sp.Poly(pt[i] * param[j].as_expr() - pt[j] * param[i].as_expr(), *ST, domain="QQ")
        for i, j in combinations(range(3), 2)
    ]
    g = sp.Poly(0, *ST, domain="QQ")
    for m in minors:
        g = sp.gcd(g, m)
    return g


def curves_meet(a: CurveOnX, b: CurveOnX, exclude: Sequence[Sequence[Fraction]] = ()) -> bool:
    """Whether the two curves share a point of X over the algebraic closure.

    Points whose plane image is in ``exclude`` (e.g. the nodes of X, which
    are separated on the resolution) are not counted.
    """
    P, Q, dp, dq = _meeting_forms(a, b)
    if not exclude:
        if P.is_zero or Q.is_zero:
            # one form vanishes identically; the other (of positive degree) has roots
            return True
        return sylvester_resultant(P, Q, dp, dq) == 0
    G = sp.gcd(P, Q)
    if G.is_zero:
        return True
    for pt in exclude:
        f = _point_factor(a.param, pt)
        if f.is_zero or f.total_degree() == 0:
            continue
        while True:
            h = sp.gcd(G, f)
            if h.total_degree() == 0:
                break
            G = sp.div(G, h)[0]
    return G.total_degree() > 0


def curves_disjoint(a: CurveOnX, b: CurveOnX) -> bool:
    return not curves_meet(a, b)


def notation_curves() -> list[CurveOnX]:
    """The six curves over the diagonal lines of the g = 1 configuration."""
    specs = [
        ("E(12)(34)", (1, 1, 0), -x2 * x3),
        ("E(13)(24)", (1, -1, 1), -2 * x2**2 + 2 * x2 * x3),
        ("E(23)(14)", (1, -1, -1), 2 * x2**2 + 2 * x2 * x3),
    ]
    out = []
    for name, coeffs, sec in specs:
        c = CurveOnX.over_line(name, LinForm(coeffs), sec)
        out.append(c)
        out.append(c.negated(name.replace("E", "E'", 1)))
    return out


def diagonal_lines(S: WpsSurface) -> dict[str, LinForm]:
    """L_(ij)(k4): the line through p_ij and p_k4, for the first four branch lines."""
    l = S.branch_lines
    pt = {}
    for i, j in combinations(range(4), 2):
        pt[(i, j)] = cross(l[i].coeffs, l[j].coeffs)
    out = {}
    for (i, j), k in (((0, 1), 2), ((0, 2), 1), ((1, 2), 0)):
        name = f"L({i + 1}{j + 1})({k + 1}4)"
        out[name] = LinForm(cross(pt[(i, j)], pt[(k, 3)]))
    return out


def binary_form_sqrt(f: sp.Poly) -> sp.Poly:
    """A square root of a binary form that is a perfect square over Q."""
    c, factors = sp.factor_list(f.as_expr(), *ST)
    c = sp.Rational(c)
    root_c = sp.sqrt(c)
    if not root_c.is_Rational or any(e % 2 for _, e in factors):
        raise ValueError("not a perfect square over Q")
    root = root_c
    for fac, e in factors:
        root *= fac ** (e // 2)
    return sp.Poly(sp.expand(root), *ST, domain="QQ")


def _section_from_binary(target: sp.Poly, param: Sequence[sp.Poly], degree: int) -> sp.Poly:
    """Some degree-``degree`` form h in x1, x2, x3 with h(param) = target."""
    monos = [m for m in product(range(degree + 1), repeat=3) if sum(m) == degree]
    images = [_substitute(sp.Poly(x1**a * x2**b * x3**c, *XS, domain="QQ"), param) for a, b, c in monos]
    d = degree * max(p.total_degree() for p in param)
    cols = [binary_coefficients(im, d) for im in images]
    A = RatMatrix(zip(*cols), len(cols))
    sol = solve_any(A, binary_coefficients(target, d))
    if sol is None:
        raise ValueError("target is not the restriction of a form of that degree")
    expr = sum(_q(c) * x1**a * x2**b * x3**e for c, (a, b, e) in zip(sol, monos))
    return sp.Poly(expr, *XS, domain="QQ")


def conic_parametrization() -> tuple[sp.Poly, sp.Poly, sp.Poly]:
    return tuple(sp.Poly(e, *ST, domain="QQ") for e in (s**2, t**2, 2 * s * t))


def antidiagonal_components(S: WpsSurface) -> tuple[CurveOnX, CurveOnX]:
    """The two components of X over the conic, labeled (delta-, delta+).

    x4 is solved from x4^2 = prod(l_i) on the conic; delta- is the component
    disjoint from E(12)(34), E(13)(24) and E(23)(14).
    """
    if S.genus != 1:
        raise ValueError("the antidiagonal components are only modeled for g = 1")
    param = conic_parametrization()
    x4_st = binary_form_sqrt(_substitute(S.rhs, param))
    section = _section_from_binary(x4_st, param, S.genus + 1)
    base = conic_poly()
    cands = [CurveOnX("delta?", base, param, section), CurveOnX("delta?", base, param, -section)]
    unprimed = [c for c in notation_curves() if "'" not in c.name]
    ok = [c for c in cands if all(curves_disjoint(c, e) for e in unprimed)]
    if len(ok) != 1:
        raise ValueError("no component over the conic avoids all three unprimed curves")
    minus = ok[0]
    plus = cands[1] if minus is cands[0] else cands[0]
    minus.name, plus.name = "delta-", "delta+"
    return minus, plus


def meeting_graph(curves: Sequence[CurveOnX], exclude=()) -> set[frozenset[str]]:
    return {frozenset((a.name, b.name)) for a, b in combinations(curves, 2) if curves_meet(a, b, exclude)}


def is_hexagon(curves: Sequence[CurveOnX], exclude=()) -> bool:
    """Six curves whose meeting graph is a single 6-cycle."""
    if len(curves) != 6:
        return False
    edges = meeting_graph(curves, exclude)
    names = [c.name for c in curves]
    degree = {n: sum(n in e for e in edges) for n in names}
    if len(edges) != 6 or any(d != 2 for d in degree.values()):
        return False
    # a connected 2-regular graph on 6 vertices is the 6-cycle
    seen, stack = set(), [names[0]]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        stack.extend(w for e in edges if v in e for w in e if w != v)
    return len(seen) == 6


def hexagon_curves(S: WpsSurface) -> list[CurveOnX]:
    names = ["E(12)(34)", "E'(12)(34)", "E(13)(24)", "E'(13)(24)", "E(23)(14)", "E'(23)(14)"]
    return [S.curves[n] for n in names]


def node_points(S: WpsSurface) -> list[tuple[Fraction, ...]]:
    return [p for p, _ in S.singular_points]


def random_params(g: int, rng, span: int = 20) -> list[Fraction]:
    """2g+2 distinct random rational tangency parameters."""
    out: list[Fraction] = []
    while len(out) < 2 * g + 2:
        p = Fraction(rng.randint(-span, span), rng.randint(1, span))
        if p not in out:
            out.append(p)
    return out
