import sys
from functools import cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dendro import Flavour, corolla, embed_poset, enumerate_trees, star, to_broad
from dendro.core import BroadPoset, FinitePoset


@cache
def tree_corpus(flavour: Flavour, max_edges: int):
    """Broad posets of every tree up to the given size, one per class."""
    return tuple(to_broad(t, flavour) for t in enumerate_trees(max_edges, flavour))


def stump_poset(name: str = "x", flavour: Flavour = Flavour.COMMUTATIVE) -> BroadPoset:
    return BroadPoset.build(flavour, [name], [((), name)])


def linear_tree(length: int, flavour: Flavour = Flavour.COMMUTATIVE) -> BroadPoset:
    """The tree with one leaf and only unary vertices, as a broad poset."""
    return embed_poset(FinitePoset.chain(length), flavour)


@pytest.fixture(scope="session")
def small_posets():
    """A mixed bag of small commutative broad posets."""
    chain2 = embed_poset(FinitePoset.chain(1))
    chain3 = embed_poset(FinitePoset.chain(2))
    return {
        "star": star("x"),
        "stump": stump_poset(),
        "gamma1": corolla(1),
        "gamma2": corolla(2),
        "gamma3": corolla(3),
        "chain2": chain2,
        "chain3": chain3,
        "discrete2": BroadPoset.build(Flavour.COMMUTATIVE, ["u", "v"]),
    }
