"""Acceptance checks, shared by ``symcone verify`` and the test-suite.

Each check returns a :class:`CheckResult`; none of them raise on failure.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, comb
from typing import Callable

from .cones import INFINITY, accumulation_deviation, edge_report, effective_cone_xtilde
from .exact import RatMatrix, det, signature
from .lattice import pair, self_int, source_gram_from_target
from .plane import (
    POINT_NAMES,
    arithmetic_genus,
    build_config,
    dn_plane_data,
    interpolation_matrix,
    plane_data_from_lattice,
)
from .exact import rank
from .surfaces import (
    SYM2_TO_X_PULLBACK,
    Z_A1_CLASSES,
    build_sym2,
    build_x,
    build_xtilde_g1,
    build_xtilde_span,
    build_z,
    dn_class,
    gamma_class,
    rn_class,
    z_gram_from_graph,
)
from .wps import (
    NOTATION_PARAMS,
    build_wps,
    curves_disjoint,
    hexagon_curves,
    is_hexagon,
    is_tangent_to_conic,
    node_points,
    nodes_ok,
    random_params,
    verify_curve_on_x,
)

HALF = Fraction(1, 2)
SECOND_CONFIG_T = (Fraction(1, 2), Fraction(-3), Fraction(5, 7), Fraction(4), Fraction(-2, 3))


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str = ""
    elapsed_ns: int = 0
    budget: int | None = None  # seconds

    @property
    def within_budget(self) -> bool:
        return self.budget is None or self.elapsed_ns < self.budget * 10**9

    def line(self) -> str:
        status = "PASS" if self.passed and self.within_budget else "FAIL"
        timing = f" [{self.elapsed_ns // 10**6} ms / {self.budget} s]" if self.budget else ""
        return f"criterion {self.number}: {status} - {self.title}{timing}" + (f" ({self.detail})" if self.detail else "")

    def to_dict(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed and self.within_budget,
                "detail": self.detail}


class _Failures:
    def __init__(self):
        self.items: list[str] = []

    def check(self, ok: bool, what: str) -> None:
        if not ok:
            self.items.append(what)

    def detail(self) -> str:
        return "; ".join(self.items[:5]) + (" ..." if len(self.items) > 5 else "")


def _timed(number: int, title: str, budget: int | None, fn: Callable[[_Failures], None]) -> CheckResult:
    f = _Failures()
    start = time.perf_counter_ns()
    try:
        fn(f)
    except Exception as exc:  # a crash is a failed criterion, not an aborted run
        f.items.append(f"{type(exc).__name__}: {exc}")
    elapsed = time.perf_counter_ns() - start
    return CheckResult(number, title, not f.items, f.detail(), elapsed, budget)


def check_intersection_matrices() -> CheckResult:
    def body(f):
        for g in range(1, 11):
            f.check(build_sym2(g).lattice.gram == RatMatrix([[4 - 4 * g, 2 * g + 2], [2 * g + 2, 1 - g]]), f"Sym2 g={g}")
            f.check(build_x(g).lattice.gram == RatMatrix([[2 - 2 * g, 2 * g + 2], [2 * g + 2, 2 - 2 * g]]), f"X g={g}")
        f.check(build_sym2(2).lattice.gram == RatMatrix([[-4, 6], [6, -1]]), "Sym2 g=2 literal")
        f.check(build_xtilde_g1().lattice.gram == RatMatrix([[HALF, HALF, 0], [HALF, 0, 0], [0, 0, -HALF]]), "X~ gram")
        for g in range(2, 6):
            expected = RatMatrix([
                [2 - 2 * g, 2 + 2 * g, 1, 2, 0],
                [2 + 2 * g, -2 * g, 1, 0, 1],
                [1, 1, HALF, 1, 0],
                [2, 0, 1, 0, 1],
                [0, 1, 0, 1, -HALF],
            ])
            f.check(build_xtilde_span(g).lattice.gram == expected, f"span g={g}")

    return _timed(1, "intersection matrices of C^(2), X, X~ and the genus>1 table", 1, body)


def _z_lattice_failures(f: _Failures, gram: RatMatrix | None) -> None:
    G = gram if gram is not None else z_gram_from_graph()
    f.check(det(G) in (1, -1), f"det = {det(G)}")
    f.check(signature(G) == (1, 9, 0), f"signature = {signature(G)}")
    z = build_z(G)
    f.check(all(z.check_relations().values()), "class relations on Z")
    for i, u in enumerate(Z_A1_CLASSES):
        f.check(pair(z[u], z["C"]) == 0, f"{u}.C != 0")
        for v in Z_A1_CLASSES[i:]:
            f.check(pair(z[u], z[v]) == (-2 if u == v else 0), f"{u}.{v}")


def check_z_lattice(gram: RatMatrix | None = None) -> CheckResult:
    return _timed(2, "Z lattice: unimodular, signature (1,9), relation, A1^8 orthogonal to C", 1,
                  lambda f: _z_lattice_failures(f, gram))


def _dn_failures(f: _Failures, gram: RatMatrix | None, n_max: int = 100) -> None:
    x = build_xtilde_g1()
    z = build_z(gram)
    K = x["K"]
    for n in range(n_max + 1):
        D = dn_class(x, n)
        f.check(self_int(D) == -HALF, f"D_{n}^2")
        f.check(pair(D, K) == -1, f"D_{n}.K")
        R = rn_class(z, n, x)
        f.check(R.is_integral(), f"R_{n} not integral")
        f.check(self_int(R) == -1 and pair(R, z["K"]) == -1, f"R_{n}^2 or R_{n}.K")
        f.check(all(pair(R, z[e]) == 0 for e in ("E12", "E13", "E14", "E23", "E24", "E34")), f"R_{n}.E_ij")
        f.check(pair(R, z["E'"]) == 1, f"R_{n}.E'")
        f.check(pair(R, z["delta-"]) == 2 * n + 1, f"R_{n}.delta-")


def check_dn_family(gram: RatMatrix | None = None) -> CheckResult:
    return _timed(3, "D_n and R_n intersection numbers, n = 0..100", 1, lambda f: _dn_failures(f, gram))


def light_cone_samples(model, h, count: int, rng: random.Random) -> list:
    """Rational classes x with x^2 >= 0 and x.h > 0: half isotropic, half interior."""
    L = model.lattice
    iso = (-model["K"])  # (-K)^2 = 0
    out = []
    while len(out) < count // 2:
        w = L.element([Fraction(rng.randint(-30, 30), rng.randint(1, 12)) for _ in range(3)])
        ww = self_int(w)
        if ww == 0:
            continue
        s_ = -2 * pair(iso, w) / ww
        x = iso + w * s_
        if not any(x.free):
            continue
        if pair(x, h) < 0:
            x = -x
        if pair(x, h) > 0:
            out.append(x)
    while len(out) < count:
        x = L.element([Fraction(rng.randint(-40, 40), rng.randint(1, 9)) for _ in range(3)])
        if self_int(x) >= 0 and pair(x, h) > 0:
            out.append(x)
    return out


def _cone_failures(f: _Failures, samples: int) -> None:
    x = build_xtilde_g1()
    K, delta = x["K"], x["delta-"]
    e1 = edge_report(-K, delta, ("-K", "delta-"))
    e2 = edge_report(delta, dn_class(x, 0), ("delta-", "D0"))
    f.check(e1.gram == RatMatrix([[0, 0], [0, -2]]) and e1.nsd, "edge (-K, delta-)")
    f.check(e2.gram == RatMatrix([[-2, 1], [1, -HALF]]) and e2.nsd, "edge (delta-, D0)")
    for n in range(0, 21):
        e3 = edge_report(dn_class(x, n), dn_class(x, n + 1), (f"D{n}", f"D{n + 1}"))
        f.check(e3.gram == RatMatrix([[-HALF, HALF], [HALF, -HALF]]) and e3.nsd, f"edge (D{n}, D{n + 1})")
    rng = random.Random(20261016)
    for m in range(2, 13):
        spec, cert = effective_cone_xtilde(m, model=x)
        top = ceil(Fraction(m, 2)) - 1
        expected = [-K, delta] + [dn_class(x, n) for n in range(top + 1)] + [gamma_class(x, m)]
        f.check(spec.generators == expected, f"m={m} generators")
        for n in range(0, m + 6):
            v = pair(gamma_class(x, m), dn_class(x, n))
            f.check(v == Fraction(m - 1, 2) - n, f"Gamma_{m}.D_{n} formula")
            f.check((v >= 0) == (n < ceil(Fraction(m, 2))), f"Gamma_{m}.D_{n} sign")
        f.check(cert.verdict == "contains_light_cone" and cert.polyhedral is True, f"m={m} verdict")
        f.check(all(r.nsd for r in cert.facet_reports), f"m={m} facets")
        pts = light_cone_samples(x, spec.reference_positive, samples, rng)
        missing = sum(not spec.contains(p) for p in pts)
        f.check(missing == 0, f"m={m}: {missing} light-cone samples outside the cone")


def check_cone_certificates(samples: int = 1000) -> CheckResult:
    return _timed(4, "edge matrices, generator sets m = 2..12, light-cone containment", 5,
                  lambda f: _cone_failures(f, samples))


def _ladder_failures(f: _Failures, N: int) -> None:
    x = build_xtilde_g1()
    spec, cert = effective_cone_xtilde(INFINITY, N, model=x)
    f.check(cert.polyhedral == f"non-polyhedral (certified ladder to {N})", f"verdict {cert.polyhedral!r}")
    f.check(len(cert.facet_reports) == N + 2, "ladder edge count")
    f.check(all(r.nsd for r in cert.facet_reports), "ladder edge not NSD")
    for n in range(1, N + 1):
        f.check(max(accumulation_deviation(n, x)) <= Fraction(2, n), f"deviation at n={n}")


def check_ladder(N: int = 50) -> CheckResult:
    return _timed(5, f"non-polyhedral ladder for m = infinity, N = {N}", 1, lambda f: _ladder_failures(f, N))


def _cover_failures(f: _Failures) -> None:
    for g in range(1, 11):
        X = build_x(g)
        cov = X.cover
        f.check(cov.pushforward @ cov.pullback == RatMatrix.identity(2).scale(2), f"push.pull g={g}")
        for a in X.lattice.basis_vectors():
            for b in X.lattice.basis_vectors():
                f.check(pair(cov.pull(a), cov.pull(b)) == 2 * pair(a, b), f"doubling g={g}")
        f.check(source_gram_from_target(X.lattice.gram, SYM2_TO_X_PULLBACK) == build_sym2(g).lattice.gram,
                f"Sym2 gram from X gram g={g}")
        f.check(cov.pull(X["C+"]).free == (1, 0) and cov.pull(X["C-"]).free == (0, 2), f"pullbacks g={g}")


def check_double_cover() -> CheckResult:
    return _timed(6, "double-cover calculus C^(2) -> X, g = 1..10", 1, _cover_failures)


def _wps_failures(f: _Failures) -> None:
    rng = random.Random(7)
    for g in range(1, 6):
        for trial in range(2):
            S = build_wps(g, random_params(g, rng))
            f.check(all(is_tangent_to_conic(l) for l in S.branch_lines), f"tangency g={g}")
            f.check(nodes_ok(S), f"nodes g={g}")
    S = build_wps(1, NOTATION_PARAMS)
    f.check(all(verify_curve_on_x(S, c) for c in S.curves.values()), "curve equations")
    unprimed = [S.curves[n] for n in ("E(12)(34)", "E(13)(24)", "E(23)(14)")]
    primed = [S.curves[n] for n in ("E'(12)(34)", "E'(13)(24)", "E'(23)(14)")]
    for group, comp in ((unprimed, "delta-"), (primed, "delta+")):
        for i, a in enumerate(group):
            f.check(curves_disjoint(a, S.curves[comp]), f"{a.name} meets {comp}")
            for b in group[i + 1:]:
                f.check(curves_disjoint(a, b), f"{a.name} meets {b.name}")
    f.check(is_hexagon(hexagon_curves(S), node_points(S)), "hexagon")


def check_wps() -> CheckResult:
    return _timed(7, "weighted projective model: tangency, nodes, curves, hexagon", 5, _wps_failures)


def _plane_failures(f: _Failures) -> None:
    for t_values in (None, SECOND_CONFIG_T):
        config = build_config(t_values) if t_values else build_config()
        for n, (r, c) in ((1, (14, 15)), (2, (119, 120))):
            M = interpolation_matrix(config, dn_plane_data(n, config))
            f.check(M.shape == (r, c), f"n={n} shape {M.shape}")
            f.check(rank(M) == r, f"n={n} rank")
    for n in range(1, 11):
        spec = dn_plane_data(n)
        lat = plane_data_from_lattice(n)
        f.check(lat["degree"] == spec.degree == 3 * n * n + n, f"degree n={n}")
        f.check([lat[k] for k in POINT_NAMES] + [lat["q'"]] == spec.multiplicities(), f"multiplicities n={n}")
        f.check(arithmetic_genus(spec) == 0, f"genus n={n}")
        f.check(spec.condition_count() == comb(spec.degree + 2, 2) - 1, f"condition count n={n}")


def check_plane() -> CheckResult:
    return _timed(8, "plane oracle: kernel dimension 1 for n = 1, 2 on two configurations", 60, _plane_failures)


def check_mutations() -> CheckResult:
    def body(f):
        G = z_gram_from_graph()
        for i in range(10):
            for j in range(i + 1, 10):
                v = 1 - G[i, j]
                M = G.with_entry(i, j, v).with_entry(j, i, v)
                broken = not check_z_lattice(M).passed or not check_dn_family(M).passed
                f.check(broken, f"flip ({i},{j}) goes unnoticed")

    return _timed(9, "every single off-diagonal flip of the Z Gram breaks criterion 2 or 3", None, body)


CHECKS: tuple[Callable[[], CheckResult], ...] = (
    check_intersection_matrices,
    check_z_lattice,
    check_dn_family,
    check_cone_certificates,
    check_ladder,
    check_double_cover,
    check_wps,
    check_plane,
    check_mutations,
)


def verify_all(z_gram: RatMatrix | None = None) -> list[CheckResult]:
    """Run every criterion.  ``z_gram`` replaces the Z Gram in criteria 2 and 3."""
    results = []
    for check in CHECKS:
        if z_gram is not None and check in (check_z_lattice, check_dn_family):
            results.append(check(z_gram))
        else:
            results.append(check())
    return results
