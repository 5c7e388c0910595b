"""Numerical divisor-class lattices with a rational intersection pairing.

A :class:`NSLattice` is a labeled free lattice with a symmetric rational Gram
matrix, optionally carrying a ``(Z/2)^s`` torsion companion.  Divisor classes
(:class:`DivClass`) keep a reference to their lattice and refuse to mix with
classes of another lattice.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exact import RatMatrix, as_rat, det, inverse, solve, vector


class LatticeMismatchError(ValueError):
    """Raised when classes from two different lattices are combined."""


@dataclass(frozen=True, eq=False)
class NSLattice:
    name: str
    basis_labels: tuple[str, ...]
    gram: RatMatrix
    torsion_labels: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))
        object.__setattr__(self, "torsion_labels", tuple(self.torsion_labels))
        n = len(self.basis_labels)
        if len(set(self.basis_labels)) != n:
            raise ValueError("basis labels must be unique")
        if self.gram.shape != (n, n):
            raise ValueError(f"gram is {self.gram.shape}, expected {n}x{n}")
        if not self.gram.is_symmetric():
            raise ValueError("gram matrix must be symmetric")

    @property
    def rank(self) -> int:
        return len(self.basis_labels)

    @property
    def torsion_rank(self) -> int:
        return len(self.torsion_labels)

    def basis(self, label: str | int) -> DivClass:
        i = label if isinstance(label, int) else self.basis_labels.index(label)
        return self.element([int(j == i) for j in range(self.rank)])

    def basis_vectors(self) -> list[DivClass]:
        return [self.basis(i) for i in range(self.rank)]

    def element(self, free: Sequence, torsion: Sequence[int] | None = None) -> DivClass:
        return DivClass(self, vector(free), tuple(torsion or (0,) * self.torsion_rank))

    def zero(self) -> DivClass:
        return self.element([0] * self.rank)

    def combination(self, coeffs: Mapping[str, object]) -> DivClass:
        """Class from ``{basis label: coefficient}``."""
        v = [Fraction(0)] * self.rank
        for label, c in coeffs.items():
            v[self.basis_labels.index(label)] += as_rat(c)
        return self.element(v)

    def discriminant(self) -> Fraction:
        return det(self.gram)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "basis": list(self.basis_labels),
            "gram": self.gram.to_strings(),
            "torsion": list(self.torsion_labels),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> NSLattice:
        return cls(data["name"], tuple(data["basis"]), RatMatrix(data["gram"], len(data["basis"])),
                   tuple(data.get("torsion", ())))

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


@dataclass(frozen=True)
class DivClass:
    """A divisor class: rational free coordinates plus torsion bits over Z/2."""

    lattice: NSLattice = field(repr=False, compare=False)
    free: tuple[Fraction, ...]
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.free) != self.lattice.rank:
            raise ValueError("free part has the wrong length")
        t = tuple(int(b) % 2 for b in self.torsion)
        if len(t) != self.lattice.torsion_rank:
            raise ValueError("torsion part has the wrong length")
        object.__setattr__(self, "torsion", t)

    def __eq__(self, other):
        if not isinstance(other, DivClass):
            return NotImplemented
        return self.lattice is other.lattice and self.free == other.free and self.torsion == other.torsion

    def __hash__(self):
        return hash((id(self.lattice), self.free, self.torsion))

    def _check(self, other: DivClass) -> None:
        if not isinstance(other, DivClass):
            raise TypeError(f"expected a DivClass, got {type(other).__name__}")
        if other.lattice is not self.lattice:
            raise LatticeMismatchError(
                f"classes live on different lattices ({self.lattice.name} vs {other.lattice.name})"
            )

    def __add__(self, other: DivClass) -> DivClass:
        self._check(other)
        return DivClass(
            self.lattice,
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a ^ b for a, b in zip(self.torsion, other.torsion)),
        )

    def __neg__(self) -> DivClass:
        # -t = t in a 2-torsion group
        return DivClass(self.lattice, tuple(-a for a in self.free), self.torsion)

    def __sub__(self, other: DivClass) -> DivClass:
        return self + (-other)

    def __mul__(self, c) -> DivClass:
        c = as_rat(c)
        if c.denominator != 1 and any(self.torsion):
            raise ValueError("non-integral multiple of a class with torsion")
        parity = c.numerator % 2 if c.denominator == 1 else 0
        return DivClass(self.lattice, tuple(c * a for a in self.free),
                        tuple(b * parity for b in self.torsion))

    __rmul__ = __mul__

    def numerical(self) -> DivClass:
        """Drop the torsion part."""
        return DivClass(self.lattice, self.free, (0,) * self.lattice.torsion_rank)

    def is_zero(self) -> bool:
        return not any(self.free) and not any(self.torsion)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.free)

    def to_dict(self) -> dict:
        return {
            "lattice": self.lattice.name,
            "free": [str(a) for a in self.free],
            "torsion": list(self.torsion),
        }

    def __str__(self) -> str:
        terms = []
        for c, label in zip(self.free, self.lattice.basis_labels):
            if c == 0:
                continue
            coef = "" if c == 1 else "-" if c == -1 else f"{c}*"
            terms.append(f"{coef}{label}")
        s = " + ".join(terms).replace("+ -", "- ") or "0"
        if any(self.torsion):
            tors = [lab for b, lab in zip(self.torsion, self.lattice.torsion_labels) if b]
            s += " (+ torsion " + " + ".join(tors) + ")"
        return s


def divclass_from_dict(lattice: NSLattice, data: Mapping) -> DivClass:
    if data.get("lattice", lattice.name) != lattice.name:
        raise LatticeMismatchError(f"class belongs to {data['lattice']}, not {lattice.name}")
    return lattice.element(data["free"], data.get("torsion"))


def pair(a: DivClass, b: DivClass) -> Fraction:
    """Numerical intersection number; torsion is ignored."""
    a._check(b)
    return a.lattice.gram.bilinear(a.free, b.free)


def self_int(a: DivClass) -> Fraction:
    return pair(a, a)


def torsion_add(a: DivClass, b: DivClass) -> DivClass:
    return a + b


def intersection_vector(a: DivClass) -> tuple[Fraction, ...]:
    """``(a . e_i)_i`` over the lattice basis."""
    return a.lattice.gram @ a.free


def class_from_intersections(L: NSLattice, pairings: Sequence) -> DivClass:
    """The unique class whose pairings with the basis are ``pairings``."""
    pairings = vector(pairings)
    if len(pairings) != L.rank:
        raise ValueError(f"expected {L.rank} pairings, got {len(pairings)}")
    return L.element(solve(L.gram, pairings))


@dataclass(frozen=True, eq=False)
class DoubleCoverMap:
    """A degree-2 finite map ``f: source -> target`` acting on classes.

    ``pullback`` has one column per target basis vector, holding the source
    coordinates of its pullback.  The pushforward is always derived from it.
    """

    source: NSLattice
    target: NSLattice
    pullback: RatMatrix
    degree: int = 2

    def __post_init__(self):
        if self.degree != 2:
            raise ValueError("only double covers are supported")
        if self.pullback.shape != (self.source.rank, self.target.rank):
            raise ValueError("pullback matrix has the wrong shape")
        if self.source.rank != self.target.rank:
            raise ValueError("covers are only instantiated between lattices of equal rank")
        if not self.pairing_doubles():
            raise ValueError("pullback does not double the intersection pairing")

    @property
    def pushforward(self) -> RatMatrix:
        return inverse(self.pullback).scale(self.degree)

    def pairing_doubles(self) -> bool:
        P = self.pullback
        return P.T @ self.source.gram @ P == self.target.gram.scale(self.degree)

    def pull(self, x: DivClass) -> DivClass:
        if x.lattice is not self.target:
            raise LatticeMismatchError("pullback expects a class on the target")
        return self.source.element(self.pullback @ x.free)

    def push(self, x: DivClass) -> DivClass:
        if x.lattice is not self.source:
            raise LatticeMismatchError("pushforward expects a class on the source")
        return self.target.element(self.pushforward @ x.free)


def cover_pullback(f: DoubleCoverMap, x: DivClass) -> DivClass:
    return f.pull(x)


def cover_pushforward(f: DoubleCoverMap, x: DivClass) -> DivClass:
    return f.push(x)


def source_gram_from_target(target_gram: RatMatrix, pullback: RatMatrix, degree: int = 2) -> RatMatrix:
    """Recover the source Gram matrix from ``<f*x, f*y> = deg * <x, y>``."""
    Pinv = inverse(pullback)
    return Pinv.T @ target_gram.scale(degree) @ Pinv
