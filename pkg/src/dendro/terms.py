"""The tree term language and its codecs.

Terms follow the grammar

    tree   := IDENT vertex? ;
    vertex := "(" [tree {"," tree}] ")" ;
    IDENT  := letter {letter | digit | "_"} .

An identifier with no parentheses is a leaf edge, ``x()`` is an edge
closed off by a stump, and ``x(t1,...,tn)`` is an edge whose vertex has
the given subterms above it.  Whitespace is insignificant.  Child order
matters in the planar flavour only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping

from .core import (
    BroadPoset,
    Flavour,
    MonotoneMap,
    check_isomorphism,
)
from .errors import (
    BudgetExceeded,
    DuplicateEdge,
    GraftUndefined,
    NotALeaf,
    NotDendroidal,
    ParseError,
)
from . import structure
from .structure import EdgeKind, classify_all, leaves, require_dendroidal, root, subtree_at


@dataclass(frozen=True, slots=True)
class TreeTerm:
    """An edge with an optional vertex of subterms above it.

    ``children is None`` marks a bare leaf edge, an empty tuple a stump.
    """

    edge: str
    children: tuple["TreeTerm", ...] | None = None

    @property
    def is_leaf(self) -> bool:
        return self.children is None

    @property
    def is_stump(self) -> bool:
        return self.children == ()

    def edges(self) -> Iterator[str]:
        yield self.edge
        for child in self.children or ():
            yield from child.edges()

    def edge_count(self) -> int:
        return 1 + sum(child.edge_count() for child in self.children or ())

    def __str__(self) -> str:
        return print_term(self)


# ---------------------------------------------------------------------------
# Parsing and printing


_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")
_IDENT_CONT = _IDENT_START | set("0123456789_")


def parse_term(text: str) -> TreeTerm:
    """Parse a tree term; positions in errors are zero-based offsets."""
    pos = 0
    n = len(text)

    def skip_ws() -> None:
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def ident() -> str:
        nonlocal pos
        skip_ws()
        if pos >= n or text[pos] not in _IDENT_START:
            raise ParseError("expected an identifier", pos)
        start = pos
        while pos < n and text[pos] in _IDENT_CONT:
            pos += 1
        return text[start:pos]

    def tree() -> TreeTerm:
        nonlocal pos
        name = ident()
        skip_ws()
        if pos < n and text[pos] == "(":
            pos += 1
            skip_ws()
            children: list[TreeTerm] = []
            if pos < n and text[pos] == ")":
                pos += 1
                return TreeTerm(name, ())
            while True:
                children.append(tree())
                skip_ws()
                if pos < n and text[pos] == ",":
                    pos += 1
                    continue
                if pos < n and text[pos] == ")":
                    pos += 1
                    return TreeTerm(name, tuple(children))
                raise ParseError("expected ',' or ')'", pos)
        return TreeTerm(name, None)

    term = tree()
    skip_ws()
    if pos != n:
        raise ParseError("trailing input after term", pos)
    seen: set[str] = set()
    for edge in term.edges():
        if edge in seen:
            raise DuplicateEdge(f"edge {edge!r} appears twice")
        seen.add(edge)
    return term


def print_term(term: TreeTerm) -> str:
    if term.children is None:
        return term.edge
    inner = ",".join(print_term(child) for child in term.children)
    return f"{term.edge}({inner})"


# ---------------------------------------------------------------------------
# Grafting


def _freshen(name: str, used: set[str]) -> str:
    while name in used:
        name += "'"
    return name


def graft(host: BroadPoset, leaf: str, scion: BroadPoset) -> BroadPoset:
    """Glue the root of ``scion`` onto a leaf of ``host``.

    The scion's root is renamed to the leaf; any of its other identifiers
    colliding with the host are renamed by priming.  The renaming applied
    is recorded in the result's ``meta['renamed']``.  The relation is the
    host's and scion's pairs together with every substitution of a word
    below the scion's root into a host word through the glued edge.
    """
    if host.flavour is not scion.flavour:
        raise GraftUndefined("flavours differ")
    if leaf not in leaves(host):
        raise NotALeaf(f"{leaf!r} is not a leaf of the host")
    require_dendroidal(host)
    require_dendroidal(scion)

    scion_root = root(scion)
    renaming: dict[str, str] = {scion_root: leaf}
    used = set(host.carrier)
    for name in sorted(scion.carrier):
        if name == scion_root:
            continue
        fresh = _freshen(name, used)
        renaming[name] = fresh
        used.add(fresh)
    renamed = scion.rename(renaming)

    relation = set(host.relation) | set(renamed.relation)
    below_glue = [w for w, target in renamed.relation if target == leaf]
    for w, target in host.relation:
        if leaf not in w.letters:
            continue
        position = w.letters.index(leaf)  # simplicity: the leaf occurs once
        for b in below_glue:
            relation.add((w.substitute(position, b), target))

    carrier = host.carrier | renamed.carrier
    meta = {"renamed": {k: v for k, v in renaming.items() if k != v}}
    return BroadPoset(host.flavour, carrier, frozenset(relation), meta)


def full_graft(host: BroadPoset, assignment: Mapping[str, BroadPoset]) -> BroadPoset:
    """Graft a tree onto each of several leaves, one pushout at a time."""
    result = host
    for leaf in sorted(assignment):
        result = graft(result, leaf, assignment[leaf])
    return result


# ---------------------------------------------------------------------------
# Codecs between terms and dendroidally ordered sets


def to_broad(term: TreeTerm, flavour: Flavour) -> BroadPoset:
    """Interpret a term: a bare edge is a point, a corolla relates its
    leaves to the root, and deeper terms graft child images onto the root
    corolla."""
    if term.children is None:
        return BroadPoset.build(flavour, [term.edge])
    child_edges = tuple(child.edge for child in term.children)
    result = BroadPoset.build(
        flavour, [term.edge, *child_edges], [(child_edges, term.edge)]
    )
    for child in term.children:
        if child.children is not None:
            result = graft(result, child.edge, to_broad(child, flavour))
    return result


def to_term(poset: BroadPoset) -> TreeTerm:
    """Recover a term from a dendroidally ordered set; inverse of
    :func:`to_broad` up to isomorphism."""
    require_dendroidal(poset)
    return _to_term(poset)


def _to_term(poset: BroadPoset) -> TreeTerm:
    the_root = root(poset)
    cls = classify_all(poset)[the_root]
    if cls.kind is EdgeKind.LEAF:
        return TreeTerm(the_root, None)
    children = cls.children
    return TreeTerm(
        the_root,
        tuple(_to_term(subtree_at(poset, child)) for child in children.letters),
    )


# ---------------------------------------------------------------------------
# Canonical codes and isomorphism


def term_code(term: TreeTerm, flavour: Flavour) -> str:
    """Rooted-shape code: equal codes mean isomorphic trees.

    Commutative codes sort child codes, planar codes keep them in order.
    """
    if term.children is None:
        return "*"
    codes = [term_code(child, flavour) for child in term.children]
    if flavour is Flavour.COMMUTATIVE:
        codes.sort()
    return "(" + "".join(codes) + ")"


def canonical_code(tree: TreeTerm | BroadPoset, flavour: Flavour | None = None) -> str:
    if isinstance(tree, BroadPoset):
        return term_code(to_term(tree), tree.flavour)
    if flavour is None:
        raise ValueError("a flavour is required to encode a bare term")
    return term_code(tree, flavour)


def _term_isomorphisms(
    left: TreeTerm, right: TreeTerm, flavour: Flavour
) -> Iterator[dict[str, str]]:
    """All edge bijections matching the rooted shapes."""
    if term_code(left, flavour) != term_code(right, flavour):
        return
    if left.children is None:
        yield {left.edge: right.edge}
        return
    left_children = list(left.children)
    right_children = list(right.children)
    if flavour is Flavour.PLANAR:
        orderings: Iterator[tuple[TreeTerm, ...]] = iter([tuple(right_children)])
    else:
        seen: set[tuple[str, ...]] = set()

        def commutative_orderings() -> Iterator[tuple[TreeTerm, ...]]:
            codes = [term_code(c, flavour) for c in left_children]
            for perm in itertools.permutations(right_children):
                if [term_code(c, flavour) for c in perm] != codes:
                    continue
                key = tuple(c.edge for c in perm)
                if key in seen:
                    continue
                seen.add(key)
                yield perm

        orderings = commutative_orderings()
    for ordering in orderings:
        for combo in itertools.product(
            *[
                list(_term_isomorphisms(lc, rc, flavour))
                for lc, rc in zip(left_children, ordering)
            ]
        ):
            assignment = {left.edge: right.edge}
            for part in combo:
                assignment.update(part)
            yield assignment


def tree_isomorphisms(left: BroadPoset, right: BroadPoset) -> list[dict[str, str]]:
    """Every isomorphism between two trees, as assignments."""
    if left.flavour is not right.flavour:
        return []
    lt, rt = to_term(left), to_term(right)
    found = []
    for assignment in _term_isomorphisms(lt, rt, left.flavour):
        if check_isomorphism(left, right, assignment):
            found.append(assignment)
    return found


def are_isomorphic(
    left: BroadPoset, right: BroadPoset
) -> tuple[bool, dict[str, str] | None]:
    """Decide tree isomorphism via codes; the witness returned is the
    assignment least in lexicographic order."""
    if left.flavour is not right.flavour:
        return False, None
    if len(left.carrier) != len(right.carrier):
        return False, None
    if canonical_code(left) != canonical_code(right):
        return False, None
    witnesses = tree_isomorphisms(left, right)
    if not witnesses:
        return False, None
    best = min(witnesses, key=lambda a: tuple(v for _, v in sorted(a.items())))
    return True, best


def isomorphism_map(left: BroadPoset, right: BroadPoset) -> MonotoneMap:
    ok, witness = are_isomorphic(left, right)
    if not ok:
        raise NotDendroidal("the trees are not isomorphic")
    return MonotoneMap.from_dict(left, right, witness)


# ---------------------------------------------------------------------------
# Exhaustive enumeration up to isomorphism


_Shape = tuple  # ("L",) or ("V", (child shapes...))

MAX_ENUMERATION_EDGES = 7


def _shapes(edges: int, flavour: Flavour, cache: dict) -> list[_Shape]:
    key = (edges, flavour)
    if key in cache:
        return cache[key]
    out: list[_Shape] = []
    if edges == 1:
        out = [("L",), ("V", ())]
    else:
        budget = edges - 1

        def child_lists(remaining: int, minimum: int) -> Iterator[tuple[_Shape, ...]]:
            # nondecreasing sizes; commutative also fixes the order within a size
            if remaining == 0:
                yield ()
                return
            for size in range(minimum, remaining + 1):
                for first in _shapes(size, flavour, cache):
                    for rest in child_lists(remaining - size, size):
                        yield (first, *rest)

        if flavour is Flavour.COMMUTATIVE:
            seen: set[tuple[_Shape, ...]] = set()
            for children in child_lists(budget, 1):
                canon = tuple(sorted(children, key=_shape_key))
                if canon not in seen:
                    seen.add(canon)
                    out.append(("V", canon))
        else:
            def ordered_lists(remaining: int) -> Iterator[tuple[_Shape, ...]]:
                if remaining == 0:
                    yield ()
                    return
                for size in range(1, remaining + 1):
                    for first in _shapes(size, flavour, cache):
                        for rest in ordered_lists(remaining - size):
                            yield (first, *rest)

            out = [("V", children) for children in ordered_lists(budget)]
    cache[key] = out
    return out


def _shape_key(shape: _Shape) -> tuple:
    if shape[0] == "L":
        return (0,)
    return (1, tuple(_shape_key(c) for c in shape[1]))


def _shape_edges(shape: _Shape) -> int:
    if shape[0] == "L":
        return 1
    return 1 + sum(_shape_edges(c) for c in shape[1])


def _name_shape(shape: _Shape, counter: itertools.count) -> TreeTerm:
    name = f"e{next(counter)}"
    if shape[0] == "L":
        return TreeTerm(name, None)
    return TreeTerm(name, tuple(_name_shape(c, counter) for c in shape[1]))


def enumerate_trees(max_edges: int, flavour: Flavour) -> list[TreeTerm]:
    """One named representative per isomorphism class, ordered by edge
    count and then canonical code."""
    if max_edges > MAX_ENUMERATION_EDGES:
        raise BudgetExceeded(
            f"enumeration capped at {MAX_ENUMERATION_EDGES} edges, requested {max_edges}"
        )
    cache: dict = {}
    out: list[TreeTerm] = []
    for edges in range(1, max_edges + 1):
        terms = [
            _name_shape(shape, itertools.count(1))
            for shape in _shapes(edges, flavour, cache)
        ]
        terms.sort(key=lambda t: term_code(t, flavour))
        out.extend(terms)
    return out
