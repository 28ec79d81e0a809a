"""Arrows between trees: faces, degeneracies, and their factorization.

A maximal subtree has degree one less than its ambient tree.  Each one
arises in exactly one of three ways: contracting an inner edge, pruning
an outer cluster (a vertex all of whose children are leaves, including
the empty stump case), or removing the root vertex towards the one
branch that carries the remaining structure.  The corresponding
inclusions are the face maps.  Degeneracy maps collapse a unary vertex
onto its child.  Every monotone map between trees factors as degeneracy
maps, then an isomorphism, then face maps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

from .core import (
    BroadPoset,
    BroadWord,
    MonotoneMap,
    Pair,
    check_isomorphism,
    compose,
    generate_broad_poset,
    identity,
    is_monotone,
    pair_str,
)
from .errors import (
    BudgetExceeded,
    FactorizationError,
    GraftUndefined,
    NoRootFace,
    NotInnerEdge,
    NotMaximal,
    NotMonotone,
    NotOuterCluster,
    NotUnaryVertex,
)
from .structure import (
    classify_all,
    degree,
    inclusion,
    inner_edges,
    leaves,
    links,
    outer_clusters,
    require_dendroidal,
    root,
    sources_map,
    subtree_at,
)
from .terms import graft


class FaceType(str, Enum):
    INNER = "inner"
    OUTER = "outer"
    ROOT = "root"


@dataclass(frozen=True, slots=True)
class FaceKind:
    """Which face a maximal subtree is, with its identifying datum."""

    type: FaceType
    edge: str | None = None
    cluster: Pair | None = None
    branch: str | None = None

    def describe(self) -> str:
        if self.type is FaceType.INNER:
            return f"inner face at edge {self.edge}"
        if self.type is FaceType.OUTER:
            return f"outer face pruning {pair_str(self.cluster)}"
        return f"root face towards branch {self.branch}"

    def sort_key(self) -> tuple:
        ident = self.edge or self.branch or (self.cluster and self.cluster[1]) or ""
        return (ident, self.type.value)

    def to_json(self) -> dict:
        data: dict = {"type": self.type.value}
        if self.edge is not None:
            data["edge"] = self.edge
        if self.cluster is not None:
            data["cluster"] = {
                "children": list(self.cluster[0].letters),
                "vertex": self.cluster[1],
            }
        if self.branch is not None:
            data["branch"] = self.branch
        return data


@dataclass(frozen=True, slots=True)
class Face:
    kind: FaceKind
    domain: BroadPoset
    map: MonotoneMap


class MapKind(str, Enum):
    ISOMORPHISM = "isomorphism"
    INNER_FACE = "inner_face"
    OUTER_FACE = "outer_face"
    ROOT_FACE = "root_face"
    DEGENERACY = "degeneracy"
    OTHER = "other"


_FACE_TO_MAP_KIND = {
    FaceType.INNER: MapKind.INNER_FACE,
    FaceType.OUTER: MapKind.OUTER_FACE,
    FaceType.ROOT: MapKind.ROOT_FACE,
}


# ---------------------------------------------------------------------------
# Face constructors


def inner_face(poset: BroadPoset, edge: str) -> MonotoneMap:
    """Inclusion of the subtree obtained by contracting an inner edge."""
    require_dendroidal(poset)
    if edge not in inner_edges(poset):
        raise NotInnerEdge(f"{edge!r} is not an inner edge")
    keep = poset.carrier - {edge}
    relation = frozenset(
        p for p in poset.relation if p[1] != edge and edge not in p[0].letters
    )
    domain = BroadPoset(poset.flavour, keep, relation)
    return inclusion(domain, poset)


def outer_face(poset: BroadPoset, cluster: Pair) -> MonotoneMap:
    """Inclusion of the subtree obtained by pruning an outer cluster.

    Pruning a stump keeps the carrier and rebuilds the relation from the
    remaining vertices; pruning a leaf cluster drops the children.
    """
    require_dendroidal(poset)
    if cluster not in outer_clusters(poset):
        raise NotOuterCluster(f"{pair_str(cluster)} is not an outer cluster")
    children, vertex = cluster
    if children.is_empty:
        generators = [(w.letters, t) for w, t in links(poset) if (w, t) != cluster]
        domain = generate_broad_poset(poset.carrier, generators, poset.flavour)
    else:
        keep = poset.carrier - set(children.letters)
        dropped = set(children.letters)
        relation = frozenset(
            p
            for p in poset.relation
            if p[1] in keep and not dropped.intersection(p[0].letters)
        )
        domain = BroadPoset(poset.flavour, keep, relation)
    return inclusion(domain, poset)


def root_face(poset: BroadPoset, branch: str) -> MonotoneMap:
    """Inclusion of the branch left after removing the root vertex."""
    require_dendroidal(poset)
    the_root = root(poset)
    cls = classify_all(poset)[the_root]
    if cls.children is None or branch not in cls.children.letters:
        raise NoRootFace(f"{branch!r} is not a child of the root")
    others = [x for x in cls.children.letters if x != branch]
    lv = leaves(poset)
    if any(x not in lv for x in others):
        raise NoRootFace("all root children other than the branch must be leaves")
    return inclusion(subtree_at(poset, branch), poset)


def all_faces(poset: BroadPoset) -> list[Face]:
    """Every face of a tree, in a deterministic order."""
    require_dendroidal(poset)
    out: list[Face] = []
    for edge in sorted(inner_edges(poset)):
        m = inner_face(poset, edge)
        out.append(Face(FaceKind(FaceType.INNER, edge=edge), m.domain, m))
    for cluster in sorted(outer_clusters(poset), key=lambda c: (c[1], c[0].letters)):
        m = outer_face(poset, cluster)
        out.append(Face(FaceKind(FaceType.OUTER, cluster=cluster), m.domain, m))
    the_root = root(poset)
    cls = classify_all(poset)[the_root]
    if cls.children is not None:
        lv = leaves(poset)
        for branch in sorted(set(cls.children.letters)):
            if all(x in lv for x in cls.children.letters if x != branch):
                try:
                    m = root_face(poset, branch)
                except NoRootFace:
                    continue
                out.append(Face(FaceKind(FaceType.ROOT, branch=branch), m.domain, m))
    return out


# ---------------------------------------------------------------------------
# Subtree enumeration


MAX_SUBTREE_CARRIER = 16


def enumerate_subtrees(poset: BroadPoset, cap: int = MAX_SUBTREE_CARRIER) -> list[BroadPoset]:
    """All trees contained in the given one.

    A subtree is a dendroidally ordered broad poset whose carrier is a
    subset of the ambient carrier and whose relation pairs all hold in the
    ambient tree.  Each one is the closure of a choice of root vertex word
    together with subtrees below its letters; note that a subtree may keep
    an edge while dropping the vertex above it, so subtrees are not always
    induced on their carrier.
    """
    require_dendroidal(poset)
    if len(poset.carrier) > cap:
        raise BudgetExceeded(f"carrier larger than {cap}")
    srcs = sources_map(poset)
    flavour = poset.flavour
    memo: dict[str, list[tuple[frozenset[str], frozenset[Pair]]]] = {}

    def rooted(element: str) -> list[tuple[frozenset[str], frozenset[Pair]]]:
        if element in memo:
            return memo[element]
        out = [(frozenset([element]), frozenset())]
        for w in sorted(srcs[element], key=lambda w: (len(w), w.letters)):
            branch_choices = [rooted(x) for x in w.letters]
            for combo in itertools.product(*branch_choices):
                carrier = frozenset([element]).union(*(c for c, _ in combo))
                verts = frozenset([(w, element)]).union(*(v for _, v in combo))
                out.append((carrier, verts))
        memo[element] = out
        return out

    results = []
    for r in sorted(poset.carrier):
        for carrier, verts in rooted(r):
            sub = generate_broad_poset(
                carrier, [(w.letters, t) for w, t in verts], flavour
            )
            results.append(sub)
    results.sort(key=lambda s: (len(s.carrier), sorted(s.carrier), sorted(map(pair_str, s.relation))))
    return results


def is_subtree(candidate: BroadPoset, ambient: BroadPoset) -> bool:
    """Carrier and relation containment plus the tree axioms."""
    from .structure import is_dendroidal

    return (
        candidate.flavour is ambient.flavour
        and candidate.carrier <= ambient.carrier
        and candidate.relation <= ambient.relation
        and is_dendroidal(candidate).is_dendroidal
    )


def maximal_subtrees(poset: BroadPoset) -> list[BroadPoset]:
    """Subtrees of degree one less than the ambient tree."""
    target = degree(poset) - 1
    return [sub for sub in enumerate_subtrees(poset) if degree(sub) == target]


def classify_maximal(poset: BroadPoset, sub: BroadPoset) -> FaceKind:
    """The unique face kind realising a maximal subtree."""
    matches = [face.kind for face in all_faces(poset) if face.domain == sub]
    if not matches:
        raise NotMaximal("the subtree is not the domain of any face")
    if len(matches) > 1:
        raise NotMaximal(f"ambiguous classification: {[k.describe() for k in matches]}")
    return matches[0]


# ---------------------------------------------------------------------------
# Degeneracies


def degeneracy(poset: BroadPoset, vertex: tuple[str, str]) -> MonotoneMap:
    """Collapse the unary vertex ``(child, edge)`` onto its child.

    The codomain is the induced tree without the collapsed edge; the map
    is the identity elsewhere and surjective.
    """
    require_dendroidal(poset)
    child, edge = vertex
    cls = classify_all(poset)[edge]
    if cls.children is None or cls.children.letters != (child,):
        raise NotUnaryVertex(f"({child}, {edge}) is not a unary vertex")
    keep = poset.carrier - {edge}
    relation = frozenset(
        p for p in poset.relation if p[1] != edge and edge not in p[0].letters
    )
    codomain = BroadPoset(poset.flavour, keep, relation)
    assignment = {x: (child if x == edge else x) for x in poset.carrier}
    return MonotoneMap.from_dict(poset, codomain, assignment)


def degeneracies(poset: BroadPoset) -> list[MonotoneMap]:
    """All degeneracy maps out of a tree, ordered by collapsed edge."""
    out = []
    for edge, cls in sorted(classify_all(poset).items()):
        if cls.children is not None and len(cls.children.letters) == 1:
            out.append(degeneracy(poset, (cls.children.letters[0], edge)))
    return out


# ---------------------------------------------------------------------------
# Classification of arbitrary maps


def classify_map(mapping: MonotoneMap) -> MapKind:
    """Isomorphism, face, degeneracy, or other, by structural tests."""
    domain, codomain = mapping.domain, mapping.codomain
    assignment = mapping.mapping
    if len(domain.carrier) == len(codomain.carrier) and check_isomorphism(
        domain, codomain, assignment
    ):
        return MapKind.ISOMORPHISM
    cls = classify_all(domain)
    for edge, c in sorted(cls.items()):
        if c.children is not None and len(c.children.letters) == 1:
            child = c.children.letters[0]
            if assignment[edge] == child and degeneracy(domain, (child, edge)) == mapping:
                return MapKind.DEGENERACY
    if all(k == v for k, v in mapping.pairs) and domain.carrier <= codomain.carrier:
        for face in all_faces(codomain):
            if face.domain == domain:
                return _FACE_TO_MAP_KIND[face.kind.type]
    return MapKind.OTHER


# ---------------------------------------------------------------------------
# Factorization of arrows


@dataclass(frozen=True, slots=True)
class Factorization:
    """Degeneracies, then an isomorphism, then faces; composite equals the
    original map.  Lists are ordered as applied."""

    degeneracies: tuple[MonotoneMap, ...]
    iso: MonotoneMap
    faces: tuple[MonotoneMap, ...]
    kinds: tuple[FaceKind, ...]

    def composite(self) -> MonotoneMap:
        result = identity(self.iso.domain) if not self.degeneracies else self.degeneracies[0]
        for step in self.degeneracies[1:]:
            result = compose(step, result)
        result = compose(self.iso, result) if self.degeneracies else self.iso
        for step in self.faces:
            result = compose(step, result)
        return result

    def to_json(self) -> dict:
        return {
            "degeneracies": [m.to_json() for m in self.degeneracies],
            "iso": self.iso.to_json(),
            "faces": [m.to_json() for m in self.faces],
            "kinds": [k.to_json() for k in self.kinds],
        }


def _face_chain(ambient: BroadPoset, target: BroadPoset) -> tuple[list[MonotoneMap], list[FaceKind]]:
    """A chain of face inclusions from ``target`` up to ``ambient``.

    Greedy: at each step take the face whose domain still contains the
    target, preferring the least identifying edge.
    """
    steps: list[Face] = []
    current = ambient
    while current != target:
        candidates = [
            face
            for face in all_faces(current)
            if target.carrier <= face.domain.carrier
            and target.relation <= face.domain.relation
        ]
        if not candidates:
            raise FactorizationError(
                f"no face of {current!r} contains the image {target!r}"
            )
        face = min(candidates, key=lambda f: f.kind.sort_key())
        steps.append(face)
        current = face.domain
    steps.reverse()
    return [face.map for face in steps], [face.kind for face in steps]


def factorize(mapping: MonotoneMap) -> Factorization:
    """Decompose a monotone map between trees.

    Unary vertices whose edge and child share an image are collapsed
    first, least edge first; what remains is injective and lands on a
    subtree of the codomain, giving the isomorphism; the inclusion of that
    subtree is expanded into a chain of face maps.
    """
    require_dendroidal(mapping.domain)
    require_dendroidal(mapping.codomain)
    if not is_monotone(mapping.mapping, mapping.domain, mapping.codomain):
        raise NotMonotone("the assignment is not monotone")

    degs: list[MonotoneMap] = []
    current = mapping.domain
    values = mapping.mapping
    while True:
        collapsible = sorted(
            (edge, cls.children.letters[0])
            for edge, cls in classify_all(current).items()
            if cls.children is not None
            and len(cls.children.letters) == 1
            and values[edge] == values[cls.children.letters[0]]
        )
        if not collapsible:
            break
        edge, child = collapsible[0]
        sigma = degeneracy(current, (child, edge))
        degs.append(sigma)
        current = sigma.codomain
        values.pop(edge)

    flavour = mapping.codomain.flavour
    image_relation = frozenset(
        (BroadWord(flavour, tuple(values[x] for x in w.letters)), values[t])
        for w, t in current.relation
    )
    image = BroadPoset(flavour, frozenset(values.values()), image_relation)
    iso = MonotoneMap.from_dict(current, image, values)
    faces, kinds = _face_chain(mapping.codomain, image)
    return Factorization(tuple(degs), iso, tuple(faces), tuple(kinds))


# ---------------------------------------------------------------------------
# Grafting a map under a tree


def graft_map(host: BroadPoset, alpha: MonotoneMap) -> MonotoneMap:
    """The map grafted under a fixed tree, acting as the identity there.

    The domain root must be a leaf of the host and map to the codomain
    root; when a degeneracy collapses that root, the codomain is grafted
    under the surviving child's name and the host edge follows it.  The
    carriers may only share the glued edge.  Grafting preserves the kind
    of inner faces, outer faces, degeneracies and isomorphisms.
    """
    glue = root(alpha.domain)
    target_root = root(alpha.codomain)
    if alpha(glue) != target_root:
        raise GraftUndefined("the map must send the domain root to the codomain root")
    if glue not in leaves(host):
        raise GraftUndefined(f"{glue!r} is not a leaf of the host")
    rest = host.carrier - {glue}
    if rest & alpha.domain.carrier or rest & alpha.codomain.carrier:
        raise GraftUndefined("carriers overlap beyond the glued edge")
    if target_root != glue and target_root in host.carrier:
        raise GraftUndefined("codomain root collides with a host edge")
    left = graft(host, glue, alpha.domain)
    right_host = host.rename({glue: target_root}) if target_root != glue else host
    right = graft(right_host, target_root, alpha.codomain)
    assignment = {x: (target_root if x == glue else x) for x in host.carrier}
    assignment.update({b: alpha(b) for b in alpha.domain.carrier})
    return MonotoneMap.from_dict(left, right, assignment)
