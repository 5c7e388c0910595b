"""Builders for the surfaces C^(2), X, X~ and its resolution Z.

Every lattice and named divisor class used elsewhere in the package is
created here.  The Z lattice is assembled from its dual intersection graph
(:data:`Z_GRAPH_EDGES`): basis Gram entries are read off the graph and every
other named curve is located by solving for its intersection profile.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .exact import RatMatrix, as_rat
from .lattice import (
    DivClass,
    DoubleCoverMap,
    NSLattice,
    class_from_intersections,
    pair,
    self_int,
)

SYM2_BASIS = ("delta+", "delta-")
X_BASIS = ("C+", "C-")
XTILDE_BASIS = ("E1", "E(12)(34)", "E")
XTILDE_TORSION = ("[E1-E2]", "[E1-E3]")
XTILDE_SPAN_LABELS = ("delta+", "delta-", "E1", "C", "E")

Z_BASIS = ("E12", "E13", "E14", "E1", "E2", "E3", "E4", "E(12)(34)", "E'", "E")

# self-intersections of the curves drawn in the intersection graph of Z
Z_CURVES = {
    "E12": -2, "E13": -2, "E14": -2, "E23": -2, "E24": -2, "E34": -2,
    "delta-": -2, "E'": -2,
    "E1": -1, "E2": -1, "E3": -1, "E4": -1,
    "E(12)(34)": -1, "E(13)(24)": -1, "E(23)(14)": -1, "E": -1,
}

# Edges mean intersection number 1; every other pair of distinct curves is
# disjoint.  Hexagon sides run through their blue midpoints.
Z_GRAPH_EDGES = (
    ("E12", "E1"), ("E1", "E13"),
    ("E13", "E(13)(24)"), ("E(13)(24)", "E24"),
    ("E24", "E2"), ("E2", "E23"),
    ("E23", "E(23)(14)"), ("E(23)(14)", "E14"),
    ("E14", "E4"), ("E4", "E34"),
    ("E34", "E(12)(34)"), ("E(12)(34)", "E12"),
    ("E3", "E13"), ("E3", "E23"), ("E3", "E34"),
    ("E12", "E2"), ("E24", "E4"), ("E14", "E1"),
    ("E1", "delta-"), ("E2", "delta-"), ("E3", "delta-"), ("E4", "delta-"),
    ("delta-", "E"), ("E", "E'"),
)

# the eight disjoint (-2)-curves
Z_A1_CLASSES = ("E12", "E13", "E14", "E23", "E24", "E34", "delta-", "E'")
Z_CONTRACTED = ("E12", "E13", "E14", "E23", "E24", "E34", "E'")


@dataclass(frozen=True)
class Relation:
    """``sum lhs = sum rhs`` over named classes of a model."""

    name: str
    lhs: Mapping[str, object]
    rhs: Mapping[str, object]
    numerical_only: bool = False

    def text(self) -> str:
        def side(d):
            parts = []
            for k, c in d.items():
                c = as_rat(c)
                parts.append(k if c == 1 else f"-{k}" if c == -1 else f"{c}*{k}")
            return " + ".join(parts).replace("+ -", "- ") or "0"

        return f"{side(self.lhs)} = {side(self.rhs)}"


@dataclass
class IntersectionGraph:
    nodes: dict[str, int]
    edges: tuple[tuple[str, str], ...]

    def adjacent(self, u: str, v: str) -> bool:
        return (u, v) in self.edges or (v, u) in self.edges

    def to_dot(self) -> str:
        lines = ["graph Z {", "  node [shape=circle, style=filled, label=\"\", width=0.15];"]
        for name, s in self.nodes.items():
            color = "red" if s == -2 else "blue"
            lines.append(f'  "{name}" [fillcolor={color}, xlabel="{name}"];')
        for u, v in self.edges:
            lines.append(f'  "{u}" -- "{v}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass
class SurfaceModel:
    name: str
    lattice: NSLattice
    named_classes: dict[str, DivClass] = field(default_factory=dict)
    relations: list[Relation] = field(default_factory=list)
    genus: int | None = None
    cover: DoubleCoverMap | None = None
    notes: list[str] = field(default_factory=list)

    def __getitem__(self, name: str) -> DivClass:
        return self.named_classes[name]

    def add(self, name: str, cls: DivClass) -> DivClass:
        if cls.lattice is not self.lattice:
            raise ValueError(f"{name} does not live on {self.lattice.name}")
        self.named_classes[name] = cls
        return cls

    def evaluate(self, expr: Mapping[str, object]) -> DivClass:
        total = self.lattice.zero()
        for label, c in expr.items():
            total = total + self.named_classes[label] * as_rat(c)
        return total

    def relation_holds(self, rel: Relation) -> bool:
        lhs, rhs = self.evaluate(rel.lhs), self.evaluate(rel.rhs)
        if rel.numerical_only:
            return lhs.free == rhs.free
        return lhs == rhs

    def check_relations(self) -> dict[str, bool]:
        return {rel.name: self.relation_holds(rel) for rel in self.relations}

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "lattice": self.lattice.to_dict(),
            "named_classes": {k: v.to_dict() for k, v in self.named_classes.items()},
            "relations": [
                {"name": r.name, "relation": r.text(), "holds": self.relation_holds(r)} for r in self.relations
            ],
        }
        if self.genus is not None:
            out["genus"] = self.genus
        if self.cover is not None:
            out["cover"] = {
                "source": self.cover.source.name,
                "target": self.cover.target.name,
                "pullback": self.cover.pullback.to_strings(),
                "pushforward": self.cover.pushforward.to_strings(),
            }
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _check_genus(g: int, minimum: int) -> None:
    if not isinstance(g, int) or g < minimum:
        raise ValueError(f"genus must be an integer >= {minimum}, got {g!r}")


def sym2_gram(g: int) -> RatMatrix:
    return RatMatrix.symmetric([[4 - 4 * g, 2 * g + 2], [2 * g + 2, 1 - g]])


def x_gram(g: int) -> RatMatrix:
    return RatMatrix.symmetric([[2 - 2 * g, 2 * g + 2], [2 * g + 2, 2 - 2 * g]])


def build_sym2(g: int) -> SurfaceModel:
    """Second symmetric product of a genus-g hyperelliptic curve."""
    _check_genus(g, 1)
    L = NSLattice(f"Sym2(g={g})", SYM2_BASIS, sym2_gram(g))
    model = SurfaceModel(L.name, L, genus=g)
    model.add("delta+", L.basis("delta+"))
    model.add("delta-", L.basis("delta-"))
    return model


# f*(C+) = delta+, f*(C-) = 2 delta-: the cover branches along the antidiagonal
SYM2_TO_X_PULLBACK = RatMatrix([[1, 0], [0, 2]])


def build_x(g: int) -> SurfaceModel:
    """The quotient X = C^(2)/sigma, with its double cover from C^(2)."""
    _check_genus(g, 1)
    L = NSLattice(f"X(g={g})", X_BASIS, x_gram(g))
    model = SurfaceModel(L.name, L, genus=g)
    model.add("C+", L.basis("C+"))
    model.add("C-", L.basis("C-"))
    sym2 = build_sym2(g)
    model.cover = DoubleCoverMap(sym2.lattice, L, SYM2_TO_X_PULLBACK)
    return model


def build_xtilde_g1() -> SurfaceModel:
    """X~ for an elliptic curve: class group Z^3 + (Z/2)^2.

    E2, E3, E4 share the free part of E1 and differ from it by the torsion
    classes [E1-E2], [E1-E3] and their sum [E1-E4].
    """
    gram = RatMatrix.symmetric([
        [Fraction(1, 2), Fraction(1, 2), 0],
        [Fraction(1, 2), 0, 0],
        [0, 0, Fraction(-1, 2)],
    ])
    L = NSLattice("XtildeG1", XTILDE_BASIS, gram, XTILDE_TORSION)
    m = SurfaceModel(L.name, L, genus=1)
    E1 = m.add("E1", L.basis("E1"))
    m.add("E2", L.element(E1.free, (1, 0)))
    m.add("E3", L.element(E1.free, (0, 1)))
    m.add("E4", L.element(E1.free, (1, 1)))
    E12 = m.add("E(12)(34)", L.basis("E(12)(34)"))
    E = m.add("E", L.basis("E"))
    m.add("C", 2 * E1 - 2 * E)
    m.add("K", -2 * E1 + 2 * E)
    m.add("delta-", 2 * E12 - 2 * E)
    m.relations += [
        Relation("C ~ -K", {"C": 1}, {"K": -1}),
        Relation("-K ~ 2E1 - 2E", {"K": -1}, {"E1": 2, "E": -2}),
        Relation("delta- ~ 2E(12)(34) - 2E", {"delta-": 1}, {"E(12)(34)": 2, "E": -2}),
        Relation("2E2 ~ 2E1", {"E2": 2}, {"E1": 2}),
        Relation("[E1-E2] + [E1-E3] = [E1-E4]", {"E1": 2, "E2": -1, "E3": -1}, {"E1": 1, "E4": -1}),
        Relation("(E2-E1) + (E2-E3) + (E2-E4) = 0", {"E2": 3, "E1": -1, "E3": -1, "E4": -1}, {}),
    ]
    m.notes.append("delta+ is not included: its pairings on X~ are not available for g = 1")
    m.notes.append("the class C = -K is the accumulation ray of the D_n")
    return m


def xtilde_span_gram(g: int) -> RatMatrix:
    h = Fraction(1, 2)
    return RatMatrix.symmetric([
        [2 - 2 * g, 2 + 2 * g, 1, 2, 0],
        [2 + 2 * g, -2 * g, 1, 0, 1],
        [1, 1, h, 1, 0],
        [2, 0, 1, 0, 1],
        [0, 1, 0, 1, -h],
    ])


def build_xtilde_span(g: int) -> SurfaceModel:
    """Pairing table of delta+, delta-, E1, C, E on X~ for genus g >= 2.

    Only the table is meaningful; the five classes are not a basis.
    """
    _check_genus(g, 2)
    L = NSLattice(f"XtildeSpan(g={g})", XTILDE_SPAN_LABELS, xtilde_span_gram(g))
    m = SurfaceModel(L.name, L, genus=g)
    for label in XTILDE_SPAN_LABELS:
        m.add(label, L.basis(label))
    m.notes.append("pairing table of five classes; not claimed to be linearly independent")
    return m


def z_intersection_graph() -> IntersectionGraph:
    return IntersectionGraph(dict(Z_CURVES), Z_GRAPH_EDGES)


def z_gram_from_graph(graph: IntersectionGraph | None = None) -> RatMatrix:
    graph = graph or z_intersection_graph()
    return RatMatrix.symmetric([
        [graph.nodes[u] if u == v else int(graph.adjacent(u, v)) for v in Z_BASIS] for u in Z_BASIS
    ])


def build_z(gram: RatMatrix | None = None) -> SurfaceModel:
    """The minimal resolution Z of X~ (elliptic case), Picard rank 10.

    ``gram`` overrides the basis Gram matrix; it exists to probe how sensitive
    the downstream checks are to the graph reconstruction.
    """
    graph = z_intersection_graph()
    L = NSLattice("Z", Z_BASIS, gram if gram is not None else z_gram_from_graph(graph))
    m = SurfaceModel("Z", L, genus=1)
    for label in Z_BASIS:
        m.add(label, L.basis(label))
    for curve in Z_CURVES:
        if curve in Z_BASIS:
            continue
        profile = [int(graph.adjacent(curve, b)) for b in Z_BASIS]
        m.add(curve, class_from_intersections(L, profile))
    # smooth rational curves: K.B = -2 - B^2
    K = class_from_intersections(L, [-2 - Z_CURVES[b] for b in Z_BASIS])
    m.add("K", K)
    m.add("C", -K)
    m.relations += [
        Relation("C ~ -K_Z", {"C": 1}, {"K": -1}),
        Relation(
            "2E(12)(34) + E34 + E12 = delta- + 2E + E'",
            {"E(12)(34)": 2, "E34": 1, "E12": 1},
            {"delta-": 1, "E": 2, "E'": 1},
        ),
    ]
    return m


def dn_class(model: SurfaceModel, n: int) -> DivClass:
    """D_n = 2n(n+1) E1 - 2n E(12)(34) + (1 - 2n^2) E on X~."""
    if n < 0:
        raise ValueError("n must be non-negative")
    L = model.lattice
    return L.combination({"E1": 2 * n * (n + 1), "E(12)(34)": -2 * n, "E": 1 - 2 * n * n})


def gamma_class(model: SurfaceModel, m: int) -> DivClass:
    """Gamma_m = m E1 - E(12)(34) + (1 - m) E, the extra ray when q - p has order m."""
    if m < 2:
        raise ValueError("the torsion order m must be at least 2")
    return model.lattice.combination({"E1": m, "E(12)(34)": -1, "E": 1 - m})


# free-part images of the Z basis under pi_*: Z -> X~
_Z_TO_XTILDE = {
    "E1": "E1", "E2": "E1", "E3": "E1", "E4": "E1",
    "E(12)(34)": "E(12)(34)", "E": "E",
}


def z_pushforward(zmodel: SurfaceModel, xmodel: SurfaceModel, cls: DivClass) -> DivClass:
    """Free part of pi_* of a class on Z; contracted curves go to 0."""
    if cls.lattice is not zmodel.lattice:
        raise ValueError("expected a class on Z")
    out = xmodel.lattice.zero()
    for c, label in zip(cls.free, Z_BASIS):
        if label in _Z_TO_XTILDE and c:
            out = out + xmodel[_Z_TO_XTILDE[label]].numerical() * c
    return out


def z_pullback(zmodel: SurfaceModel, xmodel: SurfaceModel, cls: DivClass) -> DivClass:
    """pi^* by the projection formula: orthogonal to the contracted curves."""
    pairings = []
    for label in Z_BASIS:
        if label in Z_CONTRACTED:
            pairings.append(0)
        else:
            pairings.append(pair(cls.numerical(), xmodel[_Z_TO_XTILDE[label]].numerical()))
    return class_from_intersections(zmodel.lattice, pairings)


def rn_class(zmodel: SurfaceModel, n: int, xmodel: SurfaceModel | None = None) -> DivClass:
    """R_n = pi^* D_n - (1/2) E' on Z, the integral round-down of pi^* D_n."""
    xmodel = xmodel or build_xtilde_g1()
    return z_pullback(zmodel, xmodel, dn_class(xmodel, n)) - zmodel["E'"] * Fraction(1, 2)


def orthogonal_complement(model: SurfaceModel, cls: DivClass) -> list[DivClass]:
    """Basis of ``cls^perp`` inside the lattice (over Q)."""
    from .exact import nullspace

    row = RatMatrix([model.lattice.gram @ cls.free])
    return [model.lattice.element(v) for v in nullspace(row)]


def graph_consistent(model: SurfaceModel, graph: IntersectionGraph | None = None) -> bool:
    """Every pair of drawn curves pairs as the graph says."""
    graph = graph or z_intersection_graph()
    names = list(graph.nodes)
    for i, u in enumerate(names):
        if self_int(model[u]) != graph.nodes[u]:
            return False
        for v in names[i + 1:]:
            if pair(model[u], model[v]) != int(graph.adjacent(u, v)):
                return False
    return True
