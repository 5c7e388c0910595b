"""Exact polyhedral cones in lattices of rank at most 3.

Membership is decided from an exact H-representation: in the span of the
generators, every facet normal is the kernel of some set of ``d - 1``
independent generators, and a candidate normal is kept when all generators
lie on its non-negative side.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import ceil, gcd, lcm

from .exact import RatMatrix, cross, dot, integer_vector, is_negative_semidefinite, nullspace, rank, solve_any
from .lattice import DivClass, NSLattice, pair, self_int
from .surfaces import SurfaceModel, build_xtilde_g1, dn_class, gamma_class

INFINITY = "infinity"
MAX_RANK = 3


class UnsupportedRankError(ValueError):
    pass


class DegenerateConeError(ValueError):
    pass


def _primitive_direction(v: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    """Positive rescaling so that the first nonzero entry has absolute value 1."""
    lead = next(x for x in v if x != 0)
    s = abs(lead)
    return tuple(x / s for x in v)


@dataclass(frozen=True)
class _HRep:
    dim: int
    ambient: int
    basis: list[tuple[Fraction, ...]]
    normals: list[tuple[Fraction, ...]]

    def coordinates(self, x: tuple[Fraction, ...]) -> tuple[Fraction, ...] | None:
        if self.dim == self.ambient:
            return x
        if not self.basis:
            return () if not any(x) else None
        return solve_any(RatMatrix(zip(*self.basis), len(self.basis)), x)

    def contains(self, x: tuple[Fraction, ...]) -> bool:
        y = self.coordinates(x)
        if y is None:
            return False
        # positive rescaling does not change the signs
        yi, _ = integer_vector(y)
        return all(sum(a * b for a, b in zip(n, yi)) >= 0 for n in self.normals)

    def is_pointed(self) -> bool:
        return bool(self.normals) and rank(RatMatrix(self.normals)) == self.dim

    def tight_rank(self, x: tuple[Fraction, ...]) -> int:
        y = self.coordinates(x)
        tight = [n for n in self.normals if dot(n, y) == 0]
        return rank(RatMatrix(tight)) if tight else 0


def _integer_direction(v) -> tuple[int, ...]:
    """Primitive integer vector on the same ray as ``v``."""
    den = lcm(1, *(Fraction(x).denominator for x in v))
    ints = [int(Fraction(x) * den) for x in v]
    g = gcd(*ints)
    return tuple(x // g for x in ints) if g else tuple(ints)


def _candidate_normal(rows: list[tuple[Fraction, ...]], d: int) -> tuple[Fraction, ...] | None:
    if d == 1:
        return (Fraction(1),)
    if d == 3:
        n = cross(rows[0], rows[1])
        return n if any(n) else None
    ker = nullspace(RatMatrix(rows, d))
    return ker[0] if len(ker) == 1 else None


def _h_representation(vectors: list[tuple[Fraction, ...]]) -> _HRep:
    vecs = [v for v in vectors if any(v)]
    ambient = len(vectors[0]) if vectors else 0
    if not vecs:
        return _HRep(0, ambient, [], [])
    d = rank(RatMatrix(vecs))
    basis: list[tuple[Fraction, ...]] = []
    if d == ambient:
        coords = vecs
    else:
        for v in vecs:
            if rank(RatMatrix(basis + [v])) > len(basis):
                basis.append(v)
            if len(basis) == d:
                break
        B = RatMatrix(zip(*basis), d)
        coords = [solve_any(B, v) for v in vecs]
    icoords = [_integer_direction(c) for c in coords]
    normals: set[tuple[int, ...]] = set()
    for subset in combinations(range(len(icoords)), d - 1):
        n = _candidate_normal([icoords[i] for i in subset], d)
        if n is None:
            continue
        n = _integer_direction(n)
        for cand in (n, tuple(-a for a in n)):
            if cand not in normals and all(sum(a * b for a, b in zip(cand, c)) >= 0 for c in icoords):
                normals.add(cand)
    return _HRep(d, ambient, basis, sorted(normals))


@dataclass
class ConeSpec:
    lattice: NSLattice
    generators: list[DivClass]
    reference_positive: DivClass
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.lattice.rank > MAX_RANK:
            raise UnsupportedRankError(f"cones are supported in rank <= {MAX_RANK}, got {self.lattice.rank}")
        for g in self.generators:
            if g.lattice is not self.lattice:
                raise ValueError("generator from a different lattice")
            if not any(g.free):
                raise DegenerateConeError("zero generator")
        if self.reference_positive.lattice is not self.lattice:
            raise ValueError("reference class from a different lattice")
        if self_int(self.reference_positive) <= 0:
            raise ValueError("reference class must have positive self-intersection")
        if not self.labels:
            self.labels = [str(g) for g in self.generators]
        if len(self.labels) != len(self.generators):
            raise ValueError("one label per generator")

    @cached_property
    def _hrep(self) -> _HRep:
        return _h_representation([g.free for g in self.generators])

    def contains(self, x: DivClass) -> bool:
        if x.lattice is not self.lattice:
            raise ValueError("class from a different lattice")
        return self._hrep.contains(x.free)

    def to_dict(self) -> dict:
        return {
            "lattice": self.lattice.name,
            "basis": list(self.lattice.basis_labels),
            "generators": [
                {"label": lab, "coordinates": [str(a) for a in g.free]}
                for lab, g in zip(self.labels, self.generators)
            ],
            "reference_positive": [str(a) for a in self.reference_positive.free],
        }


def cone_contains(spec: ConeSpec, x: DivClass) -> bool:
    return spec.contains(x)


@dataclass
class FacetReport:
    labels: tuple[str, str]
    gram: RatMatrix
    nsd: bool

    def to_dict(self) -> dict:
        return {"pair": list(self.labels), "gram": self.gram.to_strings(), "nsd": self.nsd}


@dataclass
class ConeCert:
    verdict: str
    facet_reports: list[FacetReport]
    polyhedral: bool | str
    reference_in_cone: bool = True
    open_gap: tuple[str, str] | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "verdict": self.verdict,
            "polyhedral": self.polyhedral,
            "reference_in_cone": self.reference_in_cone,
            "facets": [f.to_dict() for f in self.facet_reports],
        }
        if self.open_gap is not None:
            out["open_gap"] = list(self.open_gap)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _edge_gram(a: DivClass, b: DivClass) -> RatMatrix:
    return RatMatrix.symmetric([[pair(a, a), pair(a, b)], [pair(b, a), pair(b, b)]])


def edge_report(a: DivClass, b: DivClass, labels: tuple[str, str]) -> FacetReport:
    G = _edge_gram(a, b)
    return FacetReport(labels, G, is_negative_semidefinite(G))


def _half(p: tuple[Fraction, Fraction]) -> int:
    # 0 for angles in [0, pi), 1 for [pi, 2 pi)
    return 0 if p[1] > 0 or (p[1] == 0 and p[0] > 0) else 1


def _angle_key(p: tuple[Fraction, Fraction]) -> Fraction:
    """Rational pseudo-angle in [0, 4), monotone in the polar angle of ``p``."""
    x, y = p
    t = x / (abs(x) + abs(y))
    return 1 - t if _half(p) == 0 else 3 + t


def angular_order(spec: ConeSpec) -> list[int]:
    """Generator indices sorted by angle in the slice ``x . h = 1`` around h."""
    h = spec.reference_positive
    L = spec.lattice
    if L.rank == 2:
        return list(range(len(spec.generators)))
    if L.rank != 3:
        raise UnsupportedRankError("angular ordering needs rank 3")
    hv = L.gram @ h.free  # x . h = <hv, x>
    ker = nullspace(RatMatrix([hv]))
    u, v = ker[0], ker[1]
    # coordinates of x in the basis (h, u, v); the slice point is (a_u, a_v) / a_h
    B = RatMatrix(zip(h.free, u, v), 3)
    pts = []
    for g in spec.generators:
        if pair(g, h) <= 0:
            raise DegenerateConeError(f"generator {g} is not on the positive side of the reference class")
        c = solve_any(B, g.free)
        pts.append((c[1] / c[0], c[2] / c[0]))
    if any(p == (0, 0) for p in pts):
        raise DegenerateConeError("a generator is proportional to the reference class")
    return sorted(range(len(pts)), key=lambda i: _angle_key(pts[i]))


def facet_certificates(spec: ConeSpec) -> ConeCert:
    """Edge Grams around the cone and the light-cone containment verdict.

    The cone contains the positive light cone when every boundary edge has a
    negative semidefinite Gram matrix and the reference class is inside.
    Generators may be non-extremal as long as they sit on the boundary; two
    consecutive rays on one facet then split that facet into two edges that
    span the same plane.
    """
    if spec.lattice.rank not in (2, 3):
        raise UnsupportedRankError("facet certificates need rank 2 or 3")
    hrep = spec._hrep
    if len({_primitive_direction(g.free) for g in spec.generators}) != len(spec.generators):
        raise DegenerateConeError("repeated rays in the generator list")
    if any(hrep.tight_rank(g.free) == 0 for g in spec.generators):
        raise DegenerateConeError("a generator lies in the interior of the cone")
    order = angular_order(spec)
    start = order.index(0)
    order = order[start:] + order[:start]
    gens = [spec.generators[i] for i in order]
    labels = [spec.labels[i] for i in order]
    reports = []
    if spec.lattice.rank == 2:
        if len(gens) != 2:
            raise DegenerateConeError("a salient rank-2 cone has exactly two rays")
        reports.append(edge_report(gens[0], gens[1], (labels[0], labels[1])))
    else:
        k = len(gens)
        if k < 3:
            raise DegenerateConeError("a full-dimensional rank-3 cone needs at least three rays")
        for i in range(k):
            j = (i + 1) % k
            reports.append(edge_report(gens[i], gens[j], (labels[i], labels[j])))
    inside = spec.contains(spec.reference_positive)
    ok = inside and all(r.nsd for r in reports)
    return ConeCert("contains_light_cone" if ok else "not_certified", reports, True, inside)


def extremal_rays(spec: ConeSpec) -> list[DivClass]:
    """Minimal sublist of generators spanning the same cone (first occurrence wins)."""
    kept: list[DivClass] = []
    seen: set[tuple[Fraction, ...]] = set()
    for g in spec.generators:
        key = _primitive_direction(g.free)
        if key not in seen:
            seen.add(key)
            kept.append(g)
    hrep = _h_representation([g.free for g in kept])
    if hrep.is_pointed():
        # in a pointed cone a ray is extremal iff it lies on dim - 1 independent facets
        return [g for g in kept if hrep.tight_rank(g.free) >= hrep.dim - 1]
    changed = True
    while changed:
        changed = False
        for i, g in enumerate(kept):
            others = kept[:i] + kept[i + 1:]
            if others and _h_representation([o.free for o in others]).contains(g.free):
                del kept[i]
                changed = True
                break
    return kept


def gamma_dn_pairing(m: int, n: int, model: SurfaceModel | None = None) -> Fraction:
    """Gamma_m . D_n, checked against the closed form (m - 1)/2 - n."""
    model = model or build_xtilde_g1()
    value = pair(gamma_class(model, m), dn_class(model, n))
    expected = Fraction(m - 1, 2) - n
    if value != expected:
        raise AssertionError(f"Gamma_{m}.D_{n} = {value}, expected {expected}")
    return value


def xtilde_reference(model: SurfaceModel) -> DivClass:
    """4E1 - E = 2(-K) + 3D_0: positive square, positive on every generator."""
    return model.lattice.combination({"E1": 4, "E": -1})


def effective_cone_xtilde(m, ladder_N: int = 20, model: SurfaceModel | None = None) -> tuple[ConeSpec, ConeCert]:
    """Generators and certificate for Eff(X~) when q - p has order ``m``.

    ``m`` is an integer >= 2 or :data:`INFINITY`.  For infinite order the cone
    is truncated after D_N and the certificate covers that truncation only.
    """
    model = model or build_xtilde_g1()
    K, delta = model["K"], model["delta-"]
    gens = [-K, delta]
    labels = ["-K", "delta-"]
    infinite = m == INFINITY
    if infinite:
        if ladder_N < 1:
            raise ValueError("ladder_N must be at least 1")
        top = ladder_N
    else:
        if not isinstance(m, int) or m < 2:
            raise ValueError("m must be an integer >= 2 or infinity")
        top = ceil(Fraction(m, 2)) - 1
    for n in range(top + 1):
        gens.append(dn_class(model, n))
        labels.append(f"D{n}")
    if not infinite:
        gens.append(gamma_class(model, m))
        labels.append(f"Gamma{m}")
    spec = ConeSpec(model.lattice, gens, xtilde_reference(model), labels)
    cert = facet_certificates(spec)
    if infinite:
        gap = (f"D{ladder_N}", "-K")
        ladder = [r for r in cert.facet_reports if set(r.labels) != set(gap)]
        cert = ConeCert(
            "not_certified",
            ladder,
            f"non-polyhedral (certified ladder to {ladder_N})",
            cert.reference_in_cone,
            open_gap=gap,
        )
        cert.notes.append(
            f"all ladder edges NSD: {all(r.nsd for r in ladder)}; "
            f"accumulation on -K verified to n={ladder_N}: {accumulation_check(ladder_N, model)}"
        )
    return spec, cert


def accumulation_deviation(n: int, model: SurfaceModel | None = None) -> tuple[Fraction, ...]:
    model = model or build_xtilde_g1()
    d = dn_class(model, n).free
    mk = (-model["K"]).free
    return tuple(abs(a / (n * n) - b) for a, b in zip(d, mk))


def accumulation_check(N: int, model: SurfaceModel | None = None) -> bool:
    """Each coordinate of D_n / n^2 is within 2/n of -K, for n = 1..N."""
    if N < 1:
        raise ValueError("N must be at least 1")
    model = model or build_xtilde_g1()
    return all(max(accumulation_deviation(n, model)) <= Fraction(2, n) for n in range(1, N + 1))


def certificate_json(spec: ConeSpec, cert: ConeCert, **kwargs) -> str:
    return json.dumps({"cone": spec.to_dict(), "certificate": cert.to_dict()}, **kwargs)
