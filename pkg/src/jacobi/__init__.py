"""Unitrivalent diagrams modulo AS and IHX, with grope and Whitney tower calculi."""

from .diagram import (
    CanonicalDiagram,
    CapacityError,
    Diagram,
    GeometricForest,
    StructuralError,
    canonicalize,
    first_betti,
    grope_degree,
    strut,
    tree_from_bracket,
    vassiliev_degree,
)
from .grope import (
    GropeEncoding,
    GropeTree,
    LinkTable,
    bracket_expand,
    builtin_witness,
    grope_class,
    matching_bracket,
    psi_capped,
    psi_uncapped,
    push_in,
    symplectic_transform,
)
from .notation import ParseError, parse_bracket
from .skeleton import AttachedTree, Skeleton, pull_off
from .spaces import (
    Element,
    SpaceReport,
    generate_graphs,
    generate_trees,
    ihx_relations,
    rank_and_torsion,
    reduce_mod,
    reduce_mod_ihx,
)
from .tower import TowerEncoding, UnpairedPoint, intersection_forest, tau_hat, theorem1_witness

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
