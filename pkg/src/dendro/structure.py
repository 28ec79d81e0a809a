"""Tree structure carried by a broad poset.

An element b is a descendant of a when b occurs in some word below a.
Under this reading the root of a tree is the maximum of the descendant
order: every edge descends from the root, and leaves are minimal.

A broad poset is dendroidally ordered (a tree) when it is a valid finite
broad poset that is simple (no word relates a repeated letter), has a
root, and in which every non-leaf has children, meaning the words
strictly below it admit a maximum.  Such a maximum of length zero is a
stump, the shape of a constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .core import (
    BroadPoset,
    BroadWord,
    Flavour,
    MonotoneMap,
    Pair,
    _chunk_candidates,
    _descendant_pairs,
    _word_leq,
    pair_str,
    sources_map,
    validate,
)
from .errors import NoParent, NotDendroidal


class EdgeKind(str, Enum):
    LEAF = "leaf"
    STUMP = "stump"
    HAS_CHILDREN = "has_children"


@dataclass(frozen=True, slots=True)
class EdgeClassification:
    """Leaf, stump, or a vertex together with its word of children."""

    kind: EdgeKind
    children: BroadWord | None

    @property
    def is_leaf(self) -> bool:
        return self.kind is EdgeKind.LEAF


@dataclass(frozen=True, slots=True)
class DendroReport:
    is_dendroidal: bool
    simple: bool
    has_root: bool
    children_axiom: bool
    root: str | None
    violations: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "is_dendroidal": self.is_dendroidal,
            "simple": self.simple,
            "has_root": self.has_root,
            "children_axiom": self.children_axiom,
            "root": self.root,
            "violations": list(self.violations),
        }


def descendant_order(poset: BroadPoset) -> frozenset[tuple[str, str]]:
    """The descendant relation as reflexive pairs ``(below, above)``.

    On a transitively closed relation a single scan already yields a
    preorder, so no further closure is taken.
    """
    return _descendant_pairs(poset)


def descendant_leq(poset: BroadPoset, below: str, above: str) -> bool:
    if below == above:
        return True
    return any(
        target == above and below in w.letters for w, target in poset.relation
    )


def _maximum_word(
    candidates: dict[str, tuple[tuple[str, ...], ...]],
    flavour: Flavour,
    words: list[BroadWord],
    guess: BroadWord | None = None,
) -> BroadWord | None:
    """The maximum of a set of words in the induced order, if it exists."""
    if guess is not None and all(
        w == guess or _word_leq(candidates, flavour, w.letters, guess.letters)
        for w in words
    ):
        return guess
    best = words[0]
    for w in words[1:]:
        if _word_leq(candidates, flavour, best.letters, w.letters):
            best = w
    for w in words:
        if w != best and not _word_leq(candidates, flavour, w.letters, best.letters):
            return None
    return best


@lru_cache(maxsize=16384)
def _maxima_map(poset: BroadPoset) -> dict[str, BroadWord | None]:
    """For each non-leaf element, the maximum word below it, or None.

    In a tree the maximum is the word of the descendant-maximal strict
    descendants; that candidate is tried first and verified, with a full
    search as fallback for arbitrary broad posets.
    """
    srcs = sources_map(poset)
    candidates = _chunk_candidates(poset)
    descend = _descendant_pairs(poset)
    flavour = poset.flavour
    out: dict[str, BroadWord | None] = {}
    for target, below_set in srcs.items():
        if not below_set:
            continue
        below = sorted(below_set, key=lambda w: (len(w), w.letters))
        if len(below) == 1:
            out[target] = below[0]
            continue
        guess = None
        if all(len(set(w.letters)) == len(w.letters) for w in below):
            letters = set().union(*(set(w.letters) for w in below))
            top_letters = {
                x
                for x in letters
                if not any(y != x and (x, y) in descend for y in letters)
            }
            matches = [
                w
                for w in below
                if len(w) == len(top_letters) and set(w.letters) == top_letters
            ]
            if len(matches) == 1:
                guess = matches[0]
        out[target] = _maximum_word(candidates, flavour, below, guess)
    return out


@lru_cache(maxsize=16384)
def classify_all(poset: BroadPoset) -> dict[str, EdgeClassification]:
    """Classification of every element in one pass; do not mutate the result."""
    srcs = sources_map(poset)
    maxima = _maxima_map(poset)
    out: dict[str, EdgeClassification] = {}
    for element in poset.carrier:
        if not srcs[element]:
            out[element] = EdgeClassification(EdgeKind.LEAF, None)
            continue
        top = maxima[element]
        if top is None:
            out[element] = EdgeClassification(EdgeKind.HAS_CHILDREN, None)  # no maximum
        elif top.is_empty:
            out[element] = EdgeClassification(EdgeKind.STUMP, top)
        else:
            out[element] = EdgeClassification(EdgeKind.HAS_CHILDREN, top)
    return out


def classify_edge(poset: BroadPoset, element: str) -> EdgeClassification:
    """Classify one element; raises when a non-empty set of words below it
    has no maximum."""
    result = classify_all(poset)[element]
    if result.kind is EdgeKind.HAS_CHILDREN and result.children is None:
        raise NotDendroidal(f"words below {element!r} have no maximum")
    return result


def leaves(poset: BroadPoset) -> frozenset[str]:
    srcs = sources_map(poset)
    return frozenset(x for x in poset.carrier if not srcs[x])


def stumps(poset: BroadPoset) -> frozenset[str]:
    return frozenset(
        x
        for x, cls in classify_all(poset).items()
        if cls.kind is EdgeKind.STUMP
    )


def root(poset: BroadPoset) -> str:
    """The maximum of the descendant order."""
    descend = _descendant_pairs(poset)
    tops = [
        x
        for x in poset.carrier
        if all((y, x) in descend for y in poset.carrier)
    ]
    if len(tops) != 1:
        raise NotDendroidal(f"expected a unique root, found {sorted(tops)}")
    return tops[0]


def parent(poset: BroadPoset, element: str) -> str:
    """The unique edge having ``element`` among its children."""
    if element == root(poset):
        raise NoParent(f"{element!r} is the root")
    classified = classify_all(poset)
    owners = [
        x
        for x, cls in classified.items()
        if cls.children is not None and element in cls.children.letters
    ]
    if len(owners) != 1:
        raise NotDendroidal(f"{element!r} has {len(owners)} parents")
    return owners[0]


def join(poset: BroadPoset, left: str, right: str) -> str:
    """Least common ancestor, found by climbing parents in lockstep."""
    if descendant_leq(poset, left, right):
        return right
    if descendant_leq(poset, right, left):
        return left
    return join(poset, parent(poset, left), parent(poset, right))


@lru_cache(maxsize=16384)
def is_dendroidal(poset: BroadPoset) -> DendroReport:
    """Check the three tree axioms on top of broad poset validity."""
    violations: list[str] = []
    report = validate(poset)
    if not report.ok:
        violations.extend(report.violations)

    simple = True
    for w, target in sorted(poset.relation, key=lambda p: (p[1], p[0].letters)):
        if len(set(w.letters)) != len(w.letters):
            simple = False
            violations.append(f"repeated letter in {pair_str((w, target))}")

    descend = _descendant_pairs(poset)
    tops = sorted(
        x for x in poset.carrier if all((y, x) in descend for y in poset.carrier)
    )
    has_root = len(tops) == 1
    the_root = tops[0] if has_root else None
    if not has_root:
        violations.append(f"no unique root: maximal elements {tops}")

    children_axiom = True
    for element, cls in sorted(classify_all(poset).items()):
        if cls.kind is EdgeKind.HAS_CHILDREN and cls.children is None:
            children_axiom = False
            violations.append(f"words below {element!r} have no maximum")

    ok = report.ok and simple and has_root and children_axiom
    return DendroReport(ok, simple, has_root, children_axiom, the_root, tuple(violations))


def require_dendroidal(poset: BroadPoset) -> None:
    report = is_dendroidal(poset)
    if not report.is_dendroidal:
        raise NotDendroidal("; ".join(report.violations) or "not dendroidal")


@lru_cache(maxsize=16384)
def links(poset: BroadPoset) -> frozenset[Pair]:
    """Covering pairs: words strictly below a target with nothing between.

    In a tree every link is a vertex, one per non-leaf edge.
    """
    srcs = sources_map(poset)
    candidates = _chunk_candidates(poset)
    maxima = _maxima_map(poset)
    flavour = poset.flavour
    out: set[Pair] = set()
    for target in poset.carrier:
        below = srcs[target]
        if not below:
            continue
        top = maxima[target]
        if top is not None:
            out.add((top, target))
            continue
        for w in below:
            if not any(
                v != w and _word_leq(candidates, flavour, w.letters, v.letters)
                for v in below
            ):
                out.add((w, target))
    return frozenset(out)


def degree(poset: BroadPoset) -> int:
    """The number of links."""
    return len(links(poset))


def vertices(poset: BroadPoset) -> frozenset[Pair]:
    """Links of a dendroidally ordered set."""
    require_dendroidal(poset)
    return links(poset)


def inner_edges(poset: BroadPoset) -> frozenset[str]:
    """Edges with a vertex at each end: neither the root nor a leaf."""
    the_root = root(poset)
    return frozenset(
        x
        for x, cls in classify_all(poset).items()
        if x != the_root and cls.kind is not EdgeKind.LEAF
    )


def outer_clusters(poset: BroadPoset) -> frozenset[Pair]:
    """Vertices all of whose children are leaves, including stumps."""
    classified = classify_all(poset)
    out = set()
    for element, cls in classified.items():
        if cls.children is None:
            continue
        if all(classified[c].kind is EdgeKind.LEAF for c in cls.children.letters):
            out.add((cls.children, element))
    return frozenset(out)


def subtree_at(poset: BroadPoset, element: str) -> BroadPoset:
    """The induced broad poset on the descendants of ``element``."""
    require_dendroidal(poset)
    descend = _descendant_pairs(poset)
    keep = frozenset(x for x in poset.carrier if (x, element) in descend)
    relation = frozenset(p for p in poset.relation if p[1] in keep)
    return BroadPoset(poset.flavour, keep, relation)


def root_corolla(poset: BroadPoset) -> BroadPoset:
    """The root together with its children, as a corolla."""
    require_dendroidal(poset)
    the_root = root(poset)
    cls = classify_all(poset)[the_root]
    if cls.kind is EdgeKind.LEAF:
        return BroadPoset.build(poset.flavour, [the_root])
    children = cls.children
    carrier = frozenset({the_root, *children.letters})
    return BroadPoset.build(poset.flavour, carrier, [(children, the_root)])


def inclusion(sub: BroadPoset, ambient: BroadPoset) -> MonotoneMap:
    """The identity-assignment map of a sub broad poset into its ambient."""
    return MonotoneMap.from_dict(sub, ambient, {x: x for x in sub.carrier})
