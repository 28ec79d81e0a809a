"""Finite broad posets in commutative and planar flavours.

A broad relation on a carrier set A relates finite words over A to single
elements of A.  In the planar flavour words are sequences; in the
commutative flavour they are multisets, stored canonically sorted under
plain string comparison of identifiers.  A broad poset additionally
satisfies

* reflexivity: every element is related to itself (such pairs are kept
  implicit and never stored),
* transitivity under letterwise substitution: if ``a1 ... an <= a`` and
  ``bi <= ai`` for each i, then ``b1 ... bn <= a``,
* anti-symmetry on single elements.

All values in this module are immutable; every operation is a pure
function of its inputs.  Equality of broad posets is on the nose (same
flavour, carrier and relation); isomorphism is a separate search.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    BudgetExceeded,
    ClosureOverflow,
    CollapseError,
    DomainMismatch,
    FlavourMismatch,
    IdentifierError,
)


class Flavour(str, Enum):
    COMMUTATIVE = "commutative"
    PLANAR = "planar"


EPSILON = "ε"  # printed form of the empty word


def pair_id(left: str, right: str) -> str:
    """Identifier of a pair element in products and tensors."""
    return f"({left},{right})"


@dataclass(frozen=True, slots=True)
class BroadWord:
    """A finite word over element identifiers.

    Commutative words are canonicalised by sorting, so two words with equal
    letter multisets compare equal.  The empty word is a valid value and is
    distinct from every length-1 word.
    """

    flavour: Flavour
    letters: tuple[str, ...]

    def __post_init__(self):
        letters = tuple(self.letters)
        if self.flavour is Flavour.COMMUTATIVE:
            letters = tuple(sorted(letters))
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __contains__(self, element: str) -> bool:
        return element in self.letters

    @property
    def is_empty(self) -> bool:
        return not self.letters

    def substitute(self, position: int, replacement: "BroadWord") -> "BroadWord":
        """Replace the letter at ``position`` by a whole word."""
        ls = self.letters
        return BroadWord(self.flavour, ls[:position] + replacement.letters + ls[position + 1:])

    def __str__(self) -> str:
        return "·".join(self.letters) if self.letters else EPSILON


def word(flavour: Flavour, letters: Iterable[str]) -> BroadWord:
    return BroadWord(flavour, tuple(letters))


Pair = tuple[BroadWord, str]


def pair_str(pair: Pair) -> str:
    return f"{pair[0]} ≤ {pair[1]}"


@dataclass(frozen=True, slots=True)
class BroadPoset:
    """A finite carrier with a broad relation, reflexive pairs implicit.

    The constructor checks that identifiers are consistent and that no
    reflexive pair is stored; it does not verify transitivity or
    anti-symmetry.  Use :func:`validate` to check those, or
    :func:`generate_broad_poset` to build a closed relation from
    generators.
    """

    flavour: Flavour
    carrier: frozenset[str]
    relation: frozenset[Pair]
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "carrier", frozenset(self.carrier))
        object.__setattr__(self, "relation", frozenset(self.relation))
        carrier = self.carrier
        for w, target in self.relation:
            if w.flavour is not self.flavour:
                raise FlavourMismatch(f"word {w} has flavour {w.flavour.value}")
            if target not in carrier:
                raise IdentifierError(f"target {target!r} not in carrier")
            for letter in w.letters:
                if letter not in carrier:
                    raise IdentifierError(f"letter {letter!r} not in carrier")
            if w.letters == (target,):
                raise ValueError(f"reflexive pair {pair_str((w, target))} must stay implicit")

    @classmethod
    def build(
        cls,
        flavour: Flavour,
        carrier: Iterable[str],
        pairs: Iterable[tuple[Sequence[str] | BroadWord, str]] = (),
        meta: dict | None = None,
    ) -> "BroadPoset":
        """Normalise raw ``(letters, target)`` pairs and drop reflexive ones."""
        relation = set()
        for source, target in pairs:
            w = source if isinstance(source, BroadWord) else BroadWord(flavour, tuple(source))
            if w.letters == (target,):
                continue
            relation.add((w, target))
        return cls(flavour, frozenset(carrier), frozenset(relation), meta or {})

    def leq(self, source: Sequence[str] | BroadWord, target: str) -> bool:
        """Whether ``source <= target`` holds, counting implicit reflexivity."""
        w = source if isinstance(source, BroadWord) else BroadWord(self.flavour, tuple(source))
        if w.letters == (target,):
            return target in self.carrier
        return (w, target) in self.relation

    def sources(self, target: str) -> frozenset[BroadWord]:
        """All stored words strictly below ``target``."""
        return sources_map(self)[target]

    def unary_pairs(self) -> frozenset[tuple[str, str]]:
        """Stored pairs whose source has length one, as element pairs."""
        return frozenset(
            (w.letters[0], target) for w, target in self.relation if len(w) == 1
        )

    def rename(self, mapping: Mapping[str, str]) -> "BroadPoset":
        """Injectively relabel the carrier; words are rewritten letterwise."""
        values = set(mapping.values())
        if len(values) != len(mapping):
            raise ValueError("renaming must be injective")
        def r(x: str) -> str:
            return mapping.get(x, x)
        carrier = frozenset(r(x) for x in self.carrier)
        if len(carrier) != len(self.carrier):
            raise ValueError("renaming must stay injective on the carrier")
        relation = frozenset(
            (BroadWord(self.flavour, tuple(r(x) for x in w.letters)), r(t))
            for w, t in self.relation
        )
        return BroadPoset(self.flavour, carrier, relation)

    def to_json(self) -> dict:
        return {
            "flavour": self.flavour.value,
            "carrier": sorted(self.carrier),
            "relation": [
                {"source": list(w.letters), "target": t}
                for w, t in sorted(
                    self.relation, key=lambda p: (p[1], len(p[0]), p[0].letters)
                )
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "BroadPoset":
        flavour = Flavour(data["flavour"])
        pairs = [(tuple(entry["source"]), entry["target"]) for entry in data["relation"]]
        return cls.build(flavour, data["carrier"], pairs)

    def __repr__(self) -> str:  # compact, for test failures
        rel = ", ".join(sorted(pair_str(p) for p in self.relation))
        return f"BroadPoset({self.flavour.value}, {{{', '.join(sorted(self.carrier))}}}, {{{rel}}})"


# ---------------------------------------------------------------------------
# Derived lookups


# Values are immutable, so derived structure is cached per poset; equal
# posets share entries.  Callers must not mutate the returned mappings.


@lru_cache(maxsize=16384)
def sources_map(poset: BroadPoset) -> dict[str, frozenset[BroadWord]]:
    """Map each element to the set of stored words below it."""
    by_target: dict[str, set[BroadWord]] = {x: set() for x in poset.carrier}
    for w, target in poset.relation:
        by_target[target].add(w)
    return {x: frozenset(ws) for x, ws in by_target.items()}


@lru_cache(maxsize=16384)
def _chunk_candidates(poset: BroadPoset) -> dict[str, tuple[tuple[str, ...], ...]]:
    """For each element x, the letter tuples of words w with w <= x."""
    out: dict[str, list[tuple[str, ...]]] = {x: [(x,)] for x in poset.carrier}
    for w, target in poset.relation:
        out[target].append(w.letters)
    return {x: tuple(sorted(chunks, key=lambda c: (len(c), c))) for x, chunks in out.items()}


def word_leq(poset: BroadPoset, lower: BroadWord, upper: BroadWord) -> bool:
    """The induced order on words: lower <= upper.

    Holds when ``upper = u1 ... un`` splits ``lower`` into words
    ``c1 ... cn`` with ``ci <= ui`` for each i.  Planar splits are
    consecutive; commutative splits partition the letter multiset.
    """
    return _word_leq(_chunk_candidates(poset), poset.flavour, lower.letters, upper.letters)


def _word_leq(
    candidates: dict[str, tuple[tuple[str, ...], ...]],
    flavour: Flavour,
    lower: tuple[str, ...],
    upper: tuple[str, ...],
) -> bool:
    if lower == upper:
        return True
    if flavour is Flavour.PLANAR:
        n = len(upper)
        m = len(lower)
        seen: set[tuple[int, int]] = set()

        def match(i: int, pos: int) -> bool:
            if (i, pos) in seen:
                return False
            if i == n:
                return pos == m
            for chunk in candidates[upper[i]]:
                k = len(chunk)
                if pos + k <= m and lower[pos:pos + k] == chunk and match(i + 1, pos + k):
                    return True
            seen.add((i, pos))
            return False

        return match(0, 0)

    remaining = Counter(lower)

    def match_c(i: int) -> bool:
        if i == len(upper):
            return not +remaining
        total_left = sum(remaining.values())
        for chunk in candidates[upper[i]]:
            if len(chunk) > total_left:
                continue
            need = Counter(chunk)
            if all(remaining[x] >= k for x, k in need.items()):
                remaining.subtract(need)
                if match_c(i + 1):
                    remaining.update(need)
                    return True
                remaining.update(need)
        return False

    return match_c(0)


@lru_cache(maxsize=16384)
def _descendant_pairs(poset: BroadPoset) -> frozenset[tuple[str, str]]:
    """Reflexive descendant relation: (b, a) when b occurs in a word below a."""
    pairs = {(x, x) for x in poset.carrier}
    for w, target in poset.relation:
        for letter in w.letters:
            pairs.add((letter, target))
    return frozenset(pairs)


# ---------------------------------------------------------------------------
# Generation (reflexive-transitive closure plus anti-symmetry quotient)


def generate_broad_poset(
    carrier: Iterable[str],
    generators: Iterable[tuple[Sequence[str] | BroadWord, str]],
    flavour: Flavour,
    max_word_len: int | None = None,
) -> BroadPoset:
    """The broad poset generated by a relation.

    Saturates the generators under letterwise substitution, then quotients
    by mutual comparability of single elements, choosing the least
    identifier as each class representative.  Any collapse performed by the
    quotient is recorded in the result's ``meta['collapsed']``.

    Raises :class:`ClosureOverflow` when a word longer than
    ``max_word_len`` (default: the carrier size) appears, which signals a
    possibly infinite relation.
    """
    carrier = frozenset(carrier)
    bound = max(1, len(carrier)) if max_word_len is None else max_word_len
    if bound < 1:
        raise ValueError("max_word_len must be at least 1")

    planar = flavour is Flavour.PLANAR
    queue: deque[Pair] = deque()
    for source, target in generators:
        w = source if isinstance(source, BroadWord) else BroadWord(flavour, tuple(source))
        if target not in carrier:
            raise IdentifierError(f"target {target!r} not in carrier")
        for letter in w.letters:
            if letter not in carrier:
                raise IdentifierError(f"letter {letter!r} not in carrier")
        queue.append((w, target))

    relation: set[Pair] = set()
    occurrences: dict[str, set[Pair]] = defaultdict(set)   # letter -> pairs containing it
    by_target: dict[str, set[Pair]] = defaultdict(set)     # target -> pairs below it

    def substitutions(outer: Pair, inner: Pair) -> Iterator[Pair]:
        w, target = outer
        b, x = inner
        if planar:
            for position, letter in enumerate(w.letters):
                if letter == x:
                    yield (w.substitute(position, b), target)
        elif x in w.letters:
            yield (w.substitute(w.letters.index(x), b), target)

    while queue:
        current = queue.popleft()
        w, target = current
        if w.letters == (target,) or current in relation:
            continue
        if len(w) > bound:
            raise ClosureOverflow(
                f"saturation produced {pair_str(current)} with length {len(w)} > {bound}"
            )
        relation.add(current)
        for letter in set(w.letters):
            occurrences[letter].add(current)
        by_target[target].add(current)
        # use existing pairs as substitutions into the new pair
        for letter in set(w.letters):
            for inner in by_target.get(letter, ()):
                queue.extend(substitutions(current, inner))
        # use the new pair as a substitution into existing pairs
        for outer in list(occurrences.get(target, ())):
            queue.extend(substitutions(outer, current))

    # quotient by mutual single-element comparability
    unary = {(w.letters[0], t) for w, t in relation if len(w) == 1}
    mutual = {(a, b) for (a, b) in unary if (b, a) in unary}
    collapsed: dict[str, str] = {}
    if mutual:
        classes: dict[str, set[str]] = {}
        for a, b in mutual:
            merged = classes.get(a, {a}) | classes.get(b, {b})
            for x in merged:
                classes[x] = merged
        rep = {x: min(cls) for x, cls in classes.items()}
        collapsed = {x: r for x, r in rep.items() if x != r}
    if collapsed:
        def r(x: str) -> str:
            return collapsed.get(x, x)
        carrier = frozenset(r(x) for x in carrier)
        relation = {
            pair
            for w, t in relation
            for pair in [(BroadWord(flavour, tuple(r(x) for x in w.letters)), r(t))]
            if pair[0].letters != (pair[1],)
        }

    meta = {"collapsed": collapsed} if collapsed else {}
    return BroadPoset(flavour, carrier, frozenset(relation), meta)


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True, slots=True)
class ValidationReport:
    transitive: bool
    antisymmetric: bool
    stratified: bool
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.transitive and self.antisymmetric and self.stratified

    def to_json(self) -> dict:
        return {
            "transitive": self.transitive,
            "antisymmetric": self.antisymmetric,
            "stratified": self.stratified,
            "violations": list(self.violations),
        }


def validate(poset: BroadPoset) -> ValidationReport:
    """Report whether candidate data satisfies the broad poset axioms.

    ``stratified`` asks that the descendant preorder is anti-symmetric;
    for finite relations this is automatic once the other two hold.
    """
    violations: list[str] = []

    transitive = True
    relation = poset.relation
    planar = poset.flavour is Flavour.PLANAR
    by_target: dict[str, list[Pair]] = defaultdict(list)
    for p in relation:
        by_target[p[1]].append(p)
    for w, target in relation:
        for position, letter in (
            enumerate(w.letters) if planar else ((w.letters.index(x), x) for x in set(w.letters))
        ):
            for b, _ in by_target.get(letter, ()):
                derived = w.substitute(position, b)
                if derived.letters != (target,) and (derived, target) not in relation:
                    transitive = False
                    violations.append(
                        f"missing {pair_str((derived, target))} obtained from "
                        f"{pair_str((w, target))} and {pair_str((b, letter))}"
                    )

    antisymmetric = True
    unary = poset.unary_pairs()
    for a, b in sorted(unary):
        if a != b and (b, a) in unary and a < b:
            antisymmetric = False
            violations.append(f"mutual pair {a} ≤ {b} and {b} ≤ {a}")

    stratified = True
    descend = _descendant_pairs(poset)
    # close the one-step descendant relation transitively before checking
    changed = True
    pairs = set(descend)
    while changed:
        changed = False
        by_upper: dict[str, set[str]] = defaultdict(set)
        for lo, hi in pairs:
            by_upper[lo].add(hi)
        new = {
            (lo, top)
            for lo, hi in pairs
            for top in by_upper.get(hi, ())
            if (lo, top) not in pairs
        }
        if new:
            pairs |= new
            changed = True
    for a, b in sorted(pairs):
        if a != b and (b, a) in pairs and a < b:
            stratified = False
            violations.append(f"descendant cycle between {a} and {b}")

    return ValidationReport(transitive, antisymmetric, stratified, tuple(violations))


# ---------------------------------------------------------------------------
# Monotone maps


@dataclass(frozen=True, slots=True)
class MonotoneMap:
    """A total assignment between carriers, extended to words letterwise."""

    domain: BroadPoset
    codomain: BroadPoset
    pairs: tuple[tuple[str, str], ...]
    _map: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.domain.flavour is not self.codomain.flavour:
            raise FlavourMismatch("domain and codomain flavours differ")
        mapping = dict(self.pairs)
        object.__setattr__(self, "pairs", tuple(sorted(mapping.items())))
        object.__setattr__(self, "_map", mapping)
        if set(mapping) != set(self.domain.carrier):
            raise IdentifierError("assignment is not total on the domain carrier")
        for value in mapping.values():
            if value not in self.codomain.carrier:
                raise IdentifierError(f"value {value!r} not in codomain carrier")

    @classmethod
    def from_dict(
        cls, domain: BroadPoset, codomain: BroadPoset, assignment: Mapping[str, str]
    ) -> "MonotoneMap":
        return cls(domain, codomain, tuple(assignment.items()))

    @property
    def mapping(self) -> dict[str, str]:
        return dict(self._map)

    def __call__(self, element: str) -> str:
        return self._map[element]

    def word(self, w: BroadWord) -> BroadWord:
        return BroadWord(self.codomain.flavour, tuple(self._map[x] for x in w.letters))

    def is_identity(self) -> bool:
        return self.domain == self.codomain and all(k == v for k, v in self.pairs)

    def to_json(self) -> dict:
        return {
            "domain": self.domain.to_json(),
            "codomain": self.codomain.to_json(),
            "assignment": {k: v for k, v in self.pairs},
        }

    @classmethod
    def from_json(cls, data: Mapping, registry: Mapping[str, BroadPoset] | None = None) -> "MonotoneMap":
        def resolve(entry):
            if isinstance(entry, str):
                if registry is None or entry not in registry:
                    raise IdentifierError(f"unknown poset name {entry!r}")
                return registry[entry]
            return BroadPoset.from_json(entry)

        return cls.from_dict(resolve(data["domain"]), resolve(data["codomain"]), data["assignment"])

    def __repr__(self) -> str:
        assign = ",".join(f"{k}↦{v}" for k, v in self.pairs)
        return f"MonotoneMap({assign})"


def is_monotone(assignment: Mapping[str, str], domain: BroadPoset, codomain: BroadPoset) -> bool:
    """Whether every relation pair maps into a stored or reflexive pair."""
    if domain.flavour is not codomain.flavour:
        raise FlavourMismatch("flavours differ")
    if set(assignment) != set(domain.carrier):
        raise IdentifierError("assignment is not total on the domain carrier")
    for value in assignment.values():
        if value not in codomain.carrier:
            raise IdentifierError(f"value {value!r} not in codomain carrier")
    relation = codomain.relation
    flavour = codomain.flavour
    for w, target in domain.relation:
        image = BroadWord(flavour, tuple(assignment[x] for x in w.letters))
        ft = assignment[target]
        if image.letters != (ft,) and (image, ft) not in relation:
            return False
    return True


def identity(poset: BroadPoset) -> MonotoneMap:
    return MonotoneMap.from_dict(poset, poset, {x: x for x in poset.carrier})


def compose(outer: MonotoneMap, inner: MonotoneMap) -> MonotoneMap:
    """The composite ``outer after inner``."""
    if inner.codomain != outer.domain:
        raise DomainMismatch("codomain of the first map must equal domain of the second")
    return MonotoneMap.from_dict(
        inner.domain, outer.codomain, {x: outer(inner(x)) for x in inner.domain.carrier}
    )


def enumerate_monotone(
    domain: BroadPoset, codomain: BroadPoset, budget: int = 10**7
) -> list[MonotoneMap]:
    """All monotone maps, in lexicographic order of their assignments.

    The worst-case assignment count ``|codomain| ** |domain|`` must stay
    within ``budget``; the actual search prunes partial assignments as soon
    as a fully-assigned relation pair fails.
    """
    if domain.flavour is not codomain.flavour:
        raise FlavourMismatch("flavours differ")
    elements = sorted(domain.carrier)
    values = sorted(codomain.carrier)
    if not elements:
        return [MonotoneMap.from_dict(domain, codomain, {})]
    if values and len(values) ** len(elements) > budget:
        raise BudgetExceeded(
            f"{len(values)}^{len(elements)} assignments exceed budget {budget}"
        )
    index = {x: i for i, x in enumerate(elements)}
    checkable: list[list[Pair]] = [[] for _ in elements]
    for w, target in domain.relation:
        last = max([index[target]] + [index[x] for x in w.letters])
        checkable[last].append((w, target))

    relation = codomain.relation
    flavour = codomain.flavour
    out: list[MonotoneMap] = []
    assignment: dict[str, str] = {}

    def extend(k: int) -> None:
        if k == len(elements):
            out.append(MonotoneMap.from_dict(domain, codomain, assignment))
            return
        x = elements[k]
        for value in values:
            assignment[x] = value
            ok = True
            for w, target in checkable[k]:
                image = BroadWord(flavour, tuple(assignment[y] for y in w.letters))
                ft = assignment[target]
                if image.letters != (ft,) and (image, ft) not in relation:
                    ok = False
                    break
            if ok:
                extend(k + 1)
        assignment.pop(x, None)

    extend(0)
    return out


# ---------------------------------------------------------------------------
# Isomorphism search for arbitrary broad posets


def check_isomorphism(
    left: BroadPoset, right: BroadPoset, assignment: Mapping[str, str]
) -> bool:
    """Whether the assignment is a bijection that is monotone both ways."""
    if set(assignment) != set(left.carrier) or set(assignment.values()) != set(right.carrier):
        return False
    if len(set(assignment.values())) != len(assignment):
        return False
    image = {
        (BroadWord(right.flavour, tuple(assignment[x] for x in w.letters)), assignment[t])
        for w, t in left.relation
    }
    return image == set(right.relation)


def _element_profiles(poset: BroadPoset) -> dict[str, tuple]:
    below: dict[str, list[int]] = {x: [] for x in poset.carrier}
    occurs: dict[str, list[int]] = {x: [] for x in poset.carrier}
    for w, target in poset.relation:
        below[target].append(len(w))
        for letter in w.letters:
            occurs[letter].append(len(w))
    base = {
        x: (tuple(sorted(below[x])), tuple(sorted(occurs[x]))) for x in poset.carrier
    }
    # one refinement round over the relation's shape
    refined = {}
    for x in poset.carrier:
        neighbour = sorted(
            (tuple(sorted(base[l] for l in w.letters)), base[t])
            for w, t in poset.relation
            if x == t or x in w.letters
        )
        refined[x] = (base[x], tuple(neighbour))
    return refined


def find_isomorphism(left: BroadPoset, right: BroadPoset) -> dict[str, str] | None:
    """Search for a bijection monotone both ways; None when there is none."""
    if left.flavour is not right.flavour:
        return None
    if len(left.carrier) != len(right.carrier) or len(left.relation) != len(right.relation):
        return None
    if sorted(len(w) for w, _ in left.relation) != sorted(len(w) for w, _ in right.relation):
        return None
    lprof = _element_profiles(left)
    rprof = _element_profiles(right)
    if sorted(lprof.values()) != sorted(rprof.values()):
        return None
    candidates = {
        x: sorted(y for y in right.carrier if rprof[y] == lprof[x]) for x in left.carrier
    }
    order = sorted(left.carrier, key=lambda x: (len(candidates[x]), x))
    index = {x: i for i, x in enumerate(order)}
    checkable: list[list[Pair]] = [[] for _ in order]
    for w, target in left.relation:
        last = max([index[target]] + [index[x] for x in w.letters])
        checkable[last].append((w, target))

    relation = right.relation
    flavour = right.flavour
    assignment: dict[str, str] = {}
    used: set[str] = set()

    def extend(k: int) -> dict[str, str] | None:
        if k == len(order):
            if check_isomorphism(left, right, assignment):
                return dict(assignment)
            return None
        x = order[k]
        for value in candidates[x]:
            if value in used:
                continue
            assignment[x] = value
            used.add(value)
            ok = True
            for w, target in checkable[k]:
                image = BroadWord(flavour, tuple(assignment[y] for y in w.letters))
                if (image, assignment[target]) not in relation:
                    ok = False
                    break
            if ok:
                found = extend(k + 1)
                if found is not None:
                    return found
            used.discard(value)
            del assignment[x]
        return None

    return extend(0)


# ---------------------------------------------------------------------------
# Finite ordinary posets and their embedding


@dataclass(frozen=True, slots=True)
class FinitePoset:
    """A finite partial order, stored as its strict transitively closed pairs."""

    elements: frozenset[str]
    strict: frozenset[tuple[str, str]]

    def __post_init__(self):
        object.__setattr__(self, "elements", frozenset(self.elements))
        object.__setattr__(self, "strict", frozenset(self.strict))
        for a, b in self.strict:
            if a not in self.elements or b not in self.elements:
                raise IdentifierError("order pair outside the element set")
            if a == b or (b, a) in self.strict:
                raise ValueError("strict order must be irreflexive and anti-symmetric")
        for a, b in self.strict:
            for c, d in self.strict:
                if b == c and (a, d) not in self.strict:
                    raise ValueError("strict order must be transitively closed")

    @classmethod
    def chain(cls, top: int, prefix: str = "c") -> "FinitePoset":
        """The linear order with elements ``prefix0 .. prefix<top>``."""
        names = [f"{prefix}{i}" for i in range(top + 1)]
        strict = {(names[i], names[j]) for i in range(top + 1) for j in range(i + 1, top + 1)}
        return cls(frozenset(names), frozenset(strict))

    def leq(self, a: str, b: str) -> bool:
        return a == b or (a, b) in self.strict

    def product(self, other: "FinitePoset") -> "FinitePoset":
        elements = {
            pair_id(a, b): (a, b) for a in self.elements for b in other.elements
        }
        strict = {
            (pair_id(a1, b1), pair_id(a2, b2))
            for a1 in self.elements
            for b1 in other.elements
            for a2 in self.elements
            for b2 in other.elements
            if self.leq(a1, a2) and other.leq(b1, b2) and (a1, b1) != (a2, b2)
        }
        return FinitePoset(frozenset(elements), frozenset(strict))


def embed_poset(poset: FinitePoset, flavour: Flavour = Flavour.COMMUTATIVE) -> BroadPoset:
    """View an ordinary poset as a broad poset with unary relation pairs."""
    pairs = [((a,), b) for a, b in poset.strict]
    return BroadPoset.build(flavour, poset.elements, pairs)


def underlying_poset(poset: BroadPoset) -> FinitePoset:
    """The ordinary poset carried by the unary part of the relation."""
    return FinitePoset(poset.carrier, frozenset(poset.unary_pairs()))


# ---------------------------------------------------------------------------
# Basic objects


def star(name: str = "x", flavour: Flavour = Flavour.COMMUTATIVE) -> BroadPoset:
    """The single-edge broad poset, unit of the tensor product."""
    return BroadPoset.build(flavour, [name])


def corolla(
    leaf_count: int,
    flavour: Flavour = Flavour.COMMUTATIVE,
    root: str = "r",
    leaf_prefix: str = "l",
) -> BroadPoset:
    """The corolla: one vertex relating the word of leaves to the root."""
    leaves = [f"{leaf_prefix}{i}" for i in range(1, leaf_count + 1)]
    return BroadPoset.build(flavour, [root, *leaves], [(tuple(leaves), root)])


# ---------------------------------------------------------------------------
# Products, tensor product, internal hom, pushouts


def product(
    left: BroadPoset, right: BroadPoset
) -> tuple[BroadPoset, MonotoneMap, MonotoneMap]:
    """Cartesian product with its two projections.

    A word of pairs is below a pair exactly when both coordinatewise words
    are below the respective coordinates, counting reflexive pairs.
    """
    if left.flavour is not right.flavour:
        raise FlavourMismatch("flavours differ")
    flavour = left.flavour
    carrier = {pair_id(a, b): (a, b) for a in left.carrier for b in right.carrier}

    def side_words(poset: BroadPoset, element: str) -> list[tuple[str, ...]]:
        ws = [(element,)]
        ws.extend(w.letters for w in poset.sources(element))
        return ws

    relation: set[Pair] = set()
    for name, (a, b) in carrier.items():
        for wa in side_words(left, a):
            for wb in side_words(right, b):
                if len(wa) != len(wb):
                    continue
                if wa == (a,) and wb == (b,):
                    continue
                if flavour is Flavour.PLANAR:
                    zips = [tuple(zip(wa, wb))]
                else:
                    zips = {
                        tuple(sorted(zip(wa, perm)))
                        for perm in itertools.permutations(wb)
                    }
                for z in zips:
                    w = BroadWord(flavour, tuple(pair_id(x, y) for x, y in z))
                    if w.letters != (name,):
                        relation.add((w, name))

    poset = BroadPoset(flavour, frozenset(carrier), frozenset(relation))
    proj_left = MonotoneMap.from_dict(poset, left, {n: ab[0] for n, ab in carrier.items()})
    proj_right = MonotoneMap.from_dict(poset, right, {n: ab[1] for n, ab in carrier.items()})
    return poset, proj_left, proj_right


def tensor(
    left: BroadPoset, right: BroadPoset, max_word_len: int | None = None
) -> BroadPoset:
    """Tensor product: generated by tensoring each side's pairs with points."""
    if left.flavour is not right.flavour:
        raise FlavourMismatch("flavours differ")
    flavour = left.flavour
    carrier = [pair_id(a, b) for a in sorted(left.carrier) for b in sorted(right.carrier)]
    generators: list[tuple[tuple[str, ...], str]] = []
    for a in sorted(left.carrier):
        for w, b in right.relation:
            generators.append((tuple(pair_id(a, y) for y in w.letters), pair_id(a, b)))
    for b in sorted(right.carrier):
        for w, a in left.relation:
            generators.append((tuple(pair_id(x, b) for x in w.letters), pair_id(a, b)))
    return generate_broad_poset(carrier, generators, flavour, max_word_len)


def map_signature(assignment: Mapping[str, str]) -> str:
    return ",".join(f"{k}=>{v}" for k, v in sorted(assignment.items()))


def internal_hom(
    domain: BroadPoset, codomain: BroadPoset, budget: int = 10**7
) -> BroadPoset:
    """The broad poset of monotone maps, ordered pointwise.

    Carrier elements are named by their assignments.  A word of maps is
    below a map when, at every domain element, the word of images is below
    the image in the codomain.  Word lengths never exceed the longest
    source in the codomain's relation.
    """
    maps = enumerate_monotone(domain, codomain, budget)
    named = {map_signature(f.mapping): f for f in maps}
    names = sorted(named)
    flavour = domain.flavour
    max_len = max((len(w) for w, _ in codomain.relation), default=0)
    points = sorted(domain.carrier)

    def below(word_names: tuple[str, ...], target_name: str) -> bool:
        target = named[target_name]
        for a in points:
            image = BroadWord(flavour, tuple(named[n](a) for n in word_names))
            if not codomain.leq(image, target(a)):
                return False
        return True

    relation: set[Pair] = set()
    for n in range(0, max(max_len, 1) + 1):
        if flavour is Flavour.PLANAR:
            combos: Iterable[tuple[str, ...]] = itertools.product(names, repeat=n)
            count = len(names) ** n if names else 0
        else:
            combos = itertools.combinations_with_replacement(names, n)
            count = math.comb(len(names) + n - 1, n) if names else 0
        if count > budget:
            raise BudgetExceeded(f"{count} candidate words exceed budget {budget}")
        for combo in combos:
            for target_name in names:
                if combo == (target_name,):
                    continue
                if below(combo, target_name):
                    relation.add((BroadWord(flavour, combo), target_name))

    return BroadPoset(flavour, frozenset(names), frozenset(relation))


def pushout(
    left_leg: MonotoneMap, right_leg: MonotoneMap, max_word_len: int | None = None
) -> tuple[BroadPoset, MonotoneMap, MonotoneMap]:
    """Pushout of two maps with common domain, with its injections.

    The carrier is the set pushout of the carriers; the relation is
    generated by the images of both relations.  Raises
    :class:`CollapseError` if generation identifies elements beyond the set
    pushout, which signals a failure of amalgamation.
    """
    if left_leg.domain != right_leg.domain:
        raise DomainMismatch("legs must share their domain")
    if left_leg.codomain.flavour is not right_leg.codomain.flavour:
        raise FlavourMismatch("flavours differ")
    shared = left_leg.domain
    left, right = left_leg.codomain, right_leg.codomain
    flavour = left.flavour

    # set pushout of the carriers on tagged elements
    tagged = [("L", x) for x in sorted(left.carrier)] + [("R", y) for y in sorted(right.carrier)]
    classes: dict[tuple[str, str], set[tuple[str, str]]] = {t: {t} for t in tagged}
    for c in shared.carrier:
        a, b = ("L", left_leg(c)), ("R", right_leg(c))
        merged = classes[a] | classes[b]
        for t in merged:
            classes[t] = merged
    unique: list[set[tuple[str, str]]] = []
    seen: set[frozenset] = set()
    for t in tagged:
        key = frozenset(classes[t])
        if key not in seen:
            seen.add(key)
            unique.append(classes[t])

    def class_key(cls: set[tuple[str, str]]) -> tuple:
        return (min(name for _, name in cls), tuple(sorted(cls)))

    names: dict[tuple[str, str], str] = {}
    used: set[str] = set()
    for cls in sorted(unique, key=class_key):
        name = min(n for _, n in cls)
        while name in used:
            name += "'"
        used.add(name)
        for t in cls:
            names[t] = name

    generators: list[tuple[tuple[str, ...], str]] = []
    for w, target in left.relation:
        generators.append((tuple(names[("L", x)] for x in w.letters), names[("L", target)]))
    for w, target in right.relation:
        generators.append((tuple(names[("R", x)] for x in w.letters), names[("R", target)]))
    result = generate_broad_poset(used, generators, flavour, max_word_len)
    if result.meta.get("collapsed"):
        raise CollapseError(
            f"generation collapsed elements beyond the set pushout: {result.meta['collapsed']}"
        )
    inj_left = MonotoneMap.from_dict(left, result, {x: names[("L", x)] for x in left.carrier})
    inj_right = MonotoneMap.from_dict(right, result, {y: names[("R", y)] for y in right.carrier})
    return result, inj_left, inj_right


# ---------------------------------------------------------------------------
# Change of flavour


def abelianize(poset: BroadPoset) -> BroadPoset:
    """Forget word order: each planar source becomes its multiset."""
    if poset.flavour is not Flavour.PLANAR:
        raise FlavourMismatch("abelianize expects a planar broad poset")
    pairs = [(w.letters, t) for w, t in poset.relation]
    return generate_broad_poset(poset.carrier, pairs, Flavour.COMMUTATIVE)


def forget_symmetry(poset: BroadPoset) -> BroadPoset:
    """All orderings of each commutative source, as a planar broad poset."""
    if poset.flavour is not Flavour.COMMUTATIVE:
        raise FlavourMismatch("forget_symmetry expects a commutative broad poset")
    relation: set[Pair] = set()
    for w, target in poset.relation:
        for perm in set(itertools.permutations(w.letters)):
            relation.add((BroadWord(Flavour.PLANAR, perm), target))
    return BroadPoset(Flavour.PLANAR, poset.carrier, frozenset(relation))
