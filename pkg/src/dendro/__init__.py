"""Broad posets, dendroidally ordered sets, and operadic tree combinatorics."""

from .core import (
    BroadPoset,
    BroadWord,
    FinitePoset,
    Flavour,
    MonotoneMap,
    ValidationReport,
    abelianize,
    check_isomorphism,
    compose,
    corolla,
    embed_poset,
    enumerate_monotone,
    find_isomorphism,
    forget_symmetry,
    generate_broad_poset,
    identity,
    internal_hom,
    is_monotone,
    product,
    pushout,
    star,
    tensor,
    underlying_poset,
    validate,
    word,
    word_leq,
)
from .structure import (
    DendroReport,
    EdgeClassification,
    EdgeKind,
    classify_edge,
    degree,
    descendant_order,
    inner_edges,
    is_dendroidal,
    join,
    leaves,
    links,
    outer_clusters,
    parent,
    root,
    root_corolla,
    stumps,
    subtree_at,
    vertices,
)
from .terms import (
    TreeTerm,
    are_isomorphic,
    canonical_code,
    enumerate_trees,
    full_graft,
    graft,
    parse_term,
    print_term,
    to_broad,
    to_term,
    tree_isomorphisms,
)
from .category import (
    Face,
    FaceKind,
    FaceType,
    Factorization,
    MapKind,
    all_faces,
    classify_map,
    classify_maximal,
    degeneracies,
    degeneracy,
    enumerate_subtrees,
    factorize,
    graft_map,
    inner_face,
    maximal_subtrees,
    outer_face,
    root_face,
)
from . import errors

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
