"""Exact intersection theory and effective cones for symmetric squares of
hyperelliptic curves and their elliptic-pair models."""

from .cones import INFINITY, ConeCert, ConeSpec, cone_contains, effective_cone_xtilde, extremal_rays, facet_certificates
from .exact import RatMatrix, det, is_negative_semidefinite, rank, signature, solve
from .lattice import DivClass, DoubleCoverMap, NSLattice, pair, self_int
from .surfaces import build_sym2, build_x, build_xtilde_g1, build_xtilde_span, build_z, dn_class, gamma_class, rn_class

__version__ = "0.1.0"

__all__ = [
    "INFINITY", "ConeCert", "ConeSpec", "DivClass", "DoubleCoverMap", "NSLattice", "RatMatrix",
    "build_sym2", "build_x", "build_xtilde_g1", "build_xtilde_span", "build_z",
    "cone_contains", "det", "dn_class", "effective_cone_xtilde", "extremal_rays", "facet_certificates",
    "gamma_class", "is_negative_semidefinite", "pair", "rank", "rn_class", "self_int", "signature", "solve",
]
