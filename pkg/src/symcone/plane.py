"""Planar model of Z: eight points and one infinitely near point.

The curves R_n become plane curves of degree 3n^2 + n with prescribed
multiplicities.  :func:`interpolation_matrix` writes down the linear
conditions on the coefficients of a degree-d form; its kernel is the linear
system of such curves.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

from .exact import RatMatrix, as_rat, cross, dot, nullspace, rank

DEFAULT_T = (Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(3))

# x^T CONIC x = x3^2 - 4 x1 x2
CONIC = RatMatrix([[0, -2, 0], [-2, 0, 0], [0, 0, 1]])

POINT_NAMES = ("q1", "q2", "q3", "q4", "q(12)(34)", "q(13)(24)", "q(23)(14)", "q")

Point = tuple[Fraction, Fraction, Fraction]


def _normalize(v: Sequence) -> Point:
    v = tuple(as_rat(a) for a in v)
    lead = next(a for a in v if a != 0)
    return tuple(a / lead for a in v)


def conic_point(tv) -> Point:
    tv = as_rat(tv)
    return (Fraction(1), tv * tv, 2 * tv)


def on_conic(p: Sequence) -> bool:
    return CONIC.bilinear(p, p) == 0


@dataclass(frozen=True)
class PlaneConfig:
    t_values: tuple[Fraction, ...]
    q1: Point
    q2: Point
    q3: Point
    q4: Point
    qd12: Point
    qd13: Point
    qd23: Point
    q: Point
    tangent_dir: tuple[Fraction, Fraction, Fraction]
    conic: RatMatrix = CONIC

    def points(self) -> dict[str, Point]:
        return dict(zip(POINT_NAMES, (self.q1, self.q2, self.q3, self.q4, self.qd12, self.qd13, self.qd23, self.q)))

    def to_dict(self) -> dict:
        return {
            "t_values": [str(v) for v in self.t_values],
            "points": {k: [str(c) for c in p] for k, p in self.points().items()},
            "tangent_line": [str(c) for c in self.tangent_dir],
        }


def _meet(p1, p2, p3, p4) -> Point:
    """line(p1, p2) meet line(p3, p4)."""
    return _normalize(cross(cross(p1, p2), cross(p3, p4)))


def build_config(t_values: Sequence = DEFAULT_T) -> PlaneConfig:
    """Points q1..q4, q on the conic at the given parameters, plus the diagonal points."""
    tv = tuple(as_rat(v) for v in t_values)
    if len(tv) != 5:
        raise ValueError("need five parameters: four for q1..q4 and one for q")
    if len(set(tv)) != 5:
        raise ValueError("parameters must be distinct")
    q1, q2, q3, q4, q = (conic_point(v) for v in tv)
    for a, b, c in ((q1, q2, q3), (q1, q2, q4), (q1, q3, q4), (q2, q3, q4)):
        if dot(cross(a, b), c) == 0:
            raise ValueError("three of q1..q4 are collinear")
    tangent = _normalize(CONIC @ q)
    return PlaneConfig(
        tv, q1, q2, q3, q4,
        _meet(q1, q2, q3, q4), _meet(q1, q3, q2, q4), _meet(q2, q3, q1, q4),
        q, tangent,
    )


@dataclass(frozen=True)
class FatPointSpec:
    degree: int
    ordinary: tuple[tuple[Point, int], ...]
    infinitely_near: tuple[Point, tuple[Fraction, ...], int] | None = None
    labels: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if any(m < 0 for _, m in self.ordinary):
            raise ValueError("multiplicities must be non-negative")
        if self.infinitely_near is not None:
            base, _, k = self.infinitely_near
            mults = [m for p, m in self.ordinary if p == base]
            if k < 0 or not mults or k > mults[0]:
                raise ValueError("infinitely near multiplicity must not exceed the base multiplicity")

    def multiplicities(self) -> list[int]:
        out = [m for _, m in self.ordinary]
        if self.infinitely_near is not None:
            out.append(self.infinitely_near[2])
        return out

    def condition_count(self) -> int:
        return sum(comb(m + 1, 2) for m in self.multiplicities())

    def to_dict(self) -> dict:
        return {"degree": self.degree, "multiplicities": self.multiplicities()}


def dn_plane_data(n: int, config: PlaneConfig | None = None) -> FatPointSpec:
    """Degree 3n^2+n; n^2 at q1..q4 and q; n^2+n at the diagonal points; n^2-1 infinitely near q."""
    if n < 1:
        raise ValueError("n must be positive")
    config = config or build_config()
    pts = config.points()
    a, b = n * n, n * n + n
    ordinary = tuple((pts[name], m) for name, m in zip(POINT_NAMES, (a, a, a, a, b, b, b, a)))
    return FatPointSpec(3 * n * n + n, ordinary, (config.q, config.tangent_dir, n * n - 1),
                        POINT_NAMES + ("q'",))


def arithmetic_genus(spec: FatPointSpec) -> int:
    d = spec.degree
    return (d - 1) * (d - 2) // 2 - sum(m * (m - 1) // 2 for m in spec.multiplicities())


def expected_dimension(spec: FatPointSpec) -> int:
    """Projective dimension expected from naive condition counting."""
    return comb(spec.degree + 2, 2) - 1 - spec.condition_count()


@lru_cache(maxsize=None)
def monomials(d: int) -> tuple[tuple[int, int, int], ...]:
    return tuple((a, b, d - a - b) for a in range(d, -1, -1) for b in range(d - a, -1, -1))


def _chart(p: Point) -> tuple[int, int, int, Point]:
    k = next(i for i in range(3) if p[i] != 0)
    i, j = (c for c in range(3) if c != k)
    return k, i, j, tuple(c / p[k] for c in p)


Poly2 = dict  # (alpha, beta) -> Fraction, truncated bivariate polynomial


def _mul(f: Poly2, g: Poly2, top: int) -> Poly2:
    out: Poly2 = {}
    for (a1, b1), c1 in f.items():
        for (a2, b2), c2 in g.items():
            if a1 + b1 + a2 + b2 < top:
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + c1 * c2
    return out


def _powers(base: Poly2, emax: int, top: int) -> list[Poly2]:
    out = [{(0, 0): Fraction(1)}]
    for _ in range(emax):
        out.append(_mul(out[-1], base, top))
    return out


def _local_expansions(d: int, p: Point, direction: Sequence | None, top: int) -> list[Poly2]:
    """Taylor expansions (to total degree < top) of all degree-d monomials at p.

    Local coordinates are (u, v); if ``direction`` (a line through p) is given,
    it becomes ``v = 0``.
    """
    k, i, j, pn = _chart(p)
    if direction is None:
        yi = {(0, 0): pn[i], (1, 0): Fraction(1)}
        yj = {(0, 0): pn[j], (0, 1): Fraction(1)}
    else:
        # v = Ti (yi - pi) + Tj (yj - pj); u is a complementary coordinate
        Ti, Tj = as_rat(direction[i]), as_rat(direction[j])
        if Tj != 0:
            # yi - pi = u, yj - pj = (v - Ti u) / Tj
            yi = {(0, 0): pn[i], (1, 0): Fraction(1)}
            yj = {(0, 0): pn[j], (1, 0): -Ti / Tj, (0, 1): 1 / Tj}
        else:
            yi = {(0, 0): pn[i], (0, 1): 1 / Ti}
            yj = {(0, 0): pn[j], (1, 0): Fraction(1)}
    yi = {key: c for key, c in yi.items() if c != 0}
    yj = {key: c for key, c in yj.items() if c != 0}
    pi_pow = _powers(yi, d, top)
    pj_pow = _powers(yj, d, top)
    return [_mul(pi_pow[m[i]], pj_pow[m[j]], top) for m in monomials(d)]


def interpolation_matrix(config: PlaneConfig | None, spec: FatPointSpec) -> RatMatrix:
    """Vanishing conditions (rows) on the monomials of degree ``spec.degree`` (columns)."""
    d = spec.degree
    ncols = comb(d + 2, 2)
    rows: list[list[Fraction]] = []
    near = spec.infinitely_near
    for p, m in spec.ordinary:
        if m == 0:
            continue
        if near is not None and p == near[0]:
            continue
        exps = _local_expansions(d, p, None, m)
        for a in range(m):
            for b in range(m - a):
                rows.append([e.get((a, b), Fraction(0)) for e in exps])
    if near is not None:
        base, direction, k = near
        m = next(mm for pp, mm in spec.ordinary if pp == base)
        exps = _local_expansions(d, base, direction, m + k)
        keys = [(a, b) for a in range(m) for b in range(m - a)]
        # strict transform in the chart v = u w: coefficient of u^a w^b is c[a + m - b, b]
        keys += [(a + m - b, b) for a in range(k) for b in range(k - a)]
        for key in keys:
            rows.append([e.get(key, Fraction(0)) for e in exps])
    return RatMatrix(rows, ncols)


def oracle_unique_curve(config: PlaneConfig | None, n: int, with_kernel: bool = False):
    """(exists, unique[, kernel]) for the plane curves of type D_n on ``config``."""
    config = config or build_config()
    spec = dn_plane_data(n, config)
    M = interpolation_matrix(config, spec)
    r = rank(M)
    corank = M.ncols - r
    result = (corank >= 1, corank == 1)
    if with_kernel:
        return result + (nullspace(M),)
    return result


def interpolation_report(n: int, config: PlaneConfig | None = None, with_kernel: bool = False) -> dict:
    config = config or build_config()
    spec = dn_plane_data(n, config)
    M = interpolation_matrix(config, spec)
    r = rank(M)
    out = {
        "n": n,
        "degree": spec.degree,
        "multiplicities": dict(zip(spec.labels, spec.multiplicities())),
        "rows": M.nrows,
        "cols": M.ncols,
        "rank": r,
        "corank": M.ncols - r,
        "arithmetic_genus": arithmetic_genus(spec),
        "config": config.to_dict(),
    }
    if with_kernel:
        ker = nullspace(M)
        out["kernel"] = [[str(c) for c in v] for v in ker]
        out["monomials"] = [f"x1^{a} x2^{b} x3^{c}" for a, b, c in monomials(spec.degree)]
    return out


def plane_data_from_lattice(n: int, zmodel=None, xmodel=None) -> dict:
    """Degree and multiplicities of R_n read off from intersection numbers on Z."""
    from .lattice import pair
    from .surfaces import build_xtilde_g1, build_z, rn_class

    z = zmodel or build_z()
    x = xmodel or build_xtilde_g1()
    R = rn_class(z, n, x)
    half = Fraction(1, 2)

    def cls(expr: dict):
        return z.evaluate(expr)

    out = {"degree": pair(R, cls({"E12": 1, "E1": 1, "E2": 1, "E(12)(34)": 1}))}
    blocks = {
        "q1": {"E1": 1, "E12": half, "E13": half, "E14": half},
        "q2": {"E2": 1, "E12": half, "E23": half, "E24": half},
        "q3": {"E3": 1, "E13": half, "E23": half, "E34": half},
        "q4": {"E4": 1, "E14": half, "E24": half, "E34": half},
        "q(12)(34)": {"E(12)(34)": 1, "E12": half, "E34": half},
        "q(13)(24)": {"E(13)(24)": 1, "E13": half, "E24": half},
        "q(23)(14)": {"E(23)(14)": 1, "E23": half, "E14": half},
        "q": {"E'": 1, "E": 1},
        "q'": {"E": 1},
    }
    for name, expr in blocks.items():
        out[name] = pair(R, cls(expr))
    return out


def report_json(report: dict, **kwargs) -> str:
    return json.dumps(report, **kwargs)
