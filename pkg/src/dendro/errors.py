"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class DendroError(Exception):
    """Base class for every error raised by this package."""


class IdentifierError(DendroError):
    """An element identifier is missing from the relevant carrier."""


class FlavourMismatch(DendroError):
    """Commutative and planar values were mixed in one operation."""


class ClosureOverflow(DendroError):
    """Saturation produced a word longer than the configured bound.

    This signals that the generated relation is possibly infinite; the
    bound makes the failure observable instead of diverging.
    """


class CollapseError(DendroError):
    """A pushout identified more elements than the underlying set pushout."""


class BudgetExceeded(DendroError):
    """An enumeration would exceed its configured work budget."""


class NotDendroidal(DendroError):
    """The broad poset does not satisfy the tree axioms."""


class NoParent(DendroError):
    """The root has no parent edge."""


class NotALeaf(DendroError):
    """Grafting was attempted at an edge that is not a leaf."""


class NotInnerEdge(DendroError):
    """The edge is the root or a leaf, so it cannot be contracted."""


class NotOuterCluster(DendroError):
    """The vertex has a non-leaf child, so it cannot be pruned."""


class NoRootFace(DendroError):
    """The root vertex cannot be removed towards the given branch."""


class NotUnaryVertex(DendroError):
    """Degeneracies only collapse vertices with exactly one child."""


class NotMaximal(DendroError):
    """The subtree does not have degree one less than the ambient tree."""


class NotMonotone(DendroError):
    """The assignment fails to preserve the broad relation."""


class DomainMismatch(DendroError):
    """Composition of maps whose endpoints do not agree."""


class GraftUndefined(DendroError):
    """The grafting required by this operation is not defined."""


class ParseError(DendroError):
    """Invalid tree term syntax."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DuplicateEdge(DendroError):
    """A tree term repeats an edge identifier."""


class FactorizationError(DendroError):
    """No valid decomposition step could be found."""
