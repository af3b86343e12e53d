"""Finite models of the meager quotient of a topological space and its modal logics.

Worlds are indexed 0..n-1 and subsets are int bitmasks throughout.
"""

from .algebra import ClosureAlgebra, kur_algebra_from_frame, verify_axioms
from .decision import (
    Verdict,
    classify_scroggs,
    entails_global,
    eval_formula,
    s5_decide,
    s5n_decide,
    s5u_decide,
    valid_in_algebra,
)
from .formula import axiom_library, bounded_width, parse, render
from .frame import Frame, build_frame, cluster_frame, n_cluster, qmax
from .maps import (
    PartialMap,
    build_s5n_subalgebra,
    check_baire_map,
    embed_s5_frame,
    find_baire_resolution,
    map_from_resolution,
    resolution_from_map,
)
from .quotient import BaireAlgebra, build_quotient, is_meager

__all__ = [
    "BaireAlgebra",
    "ClosureAlgebra",
    "Frame",
    "PartialMap",
    "Verdict",
    "axiom_library",
    "bounded_width",
    "build_frame",
    "build_quotient",
    "build_s5n_subalgebra",
    "check_baire_map",
    "classify_scroggs",
    "cluster_frame",
    "embed_s5_frame",
    "entails_global",
    "eval_formula",
    "find_baire_resolution",
    "is_meager",
    "kur_algebra_from_frame",
    "map_from_resolution",
    "n_cluster",
    "parse",
    "qmax",
    "render",
    "resolution_from_map",
    "s5_decide",
    "s5n_decide",
    "s5u_decide",
    "valid_in_algebra",
    "verify_axioms",
]
