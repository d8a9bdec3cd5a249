"""Finite binary trees over [0, size) as sets of colored branches.

A tree is the set of its root-to-node paths, each a :class:`ColoredList`
whose colors record whether each step went to the color-1 (left) or color-2
(right) child. The algebraic view ``nil | Node(label, left, right)`` is
available through :func:`to_branch_set` and :func:`from_branch_set`, with
``None`` standing for nil.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Generic, Iterable, Iterator, Sequence, TypeVar

from hclosure.colored_lists import (
    COLORS,
    EMPTY,
    ColoredList,
    can_extend_t1t2,
    extend_colored,
    is_t1t2_list,
    parse_colored_list,
    sort_key,
)
from hclosure.relations import Relation, RelationError


class TreeError(ValueError):
    pass


class InvalidTreeError(TreeError):
    def __init__(self, violations: list[str], detail: str = ""):
        msg = "invalid tree: violates " + ", ".join(violations)
        super().__init__(f"{msg} ({detail})" if detail else msg)
        self.violations = violations


class GraftError(TreeError):
    pass


_V = TypeVar("_V")


class _lazy(Generic[_V]):
    """Compute-once attribute stored in the instance ``__dict__``.

    Unlike ``functools.cached_property`` on Python 3.10 it takes no lock,
    which matters for the many short-lived trees built during searches.
    """

    def __init__(self, func: Callable[[Any], _V]):
        self.func = func
        self.__doc__ = func.__doc__

    def __set_name__(self, owner: type, name: str) -> None:
        self.name = name

    def __get__(self, obj: Any, owner: type | None = None) -> _V:
        if obj is None:
            return self  # type: ignore[return-value]
        value = self.func(obj)
        obj.__dict__[self.name] = value
        return value


CONDITIONS = {
    "a": "the empty colored list is a branch",
    "b": "at most one singleton branch",
    "c": "prefix-closed",
    "d": "at most one extension per color at each nonempty branch",
}


def validate_tree(branches: Iterable[ColoredList]) -> tuple[bool, list[str]]:
    """Check the four branch-set conditions; returns ``(valid, violated)``
    with ``violated`` a sorted list of condition letters."""
    ok, violated = _validate(frozenset(branches))
    return ok, list(violated)


@lru_cache(maxsize=1 << 16)
def _validate(branches: frozenset[ColoredList]) -> tuple[bool, tuple[str, ...]]:
    violated: set[str] = set()
    if EMPTY not in branches:
        violated.add("a")
    if sum(1 for b in branches if len(b.elems) == 1) > 1:
        violated.add("b")
    slots: set[tuple[ColoredList, int]] = set()
    for b in branches:
        if len(b.elems) < 2:
            continue
        parent = b.parent()
        if parent not in branches:
            violated.add("c")
        slot = (parent, b.colors[-1])
        if slot in slots:
            violated.add("d")
        slots.add(slot)
    # a singleton's parent is the empty list, covered by (a)
    return (not violated, tuple(sorted(violated)))


@dataclass(frozen=True)
class BinaryTree:
    branches: frozenset[ColoredList]

    def __post_init__(self) -> None:
        ok, violated = _validate(self.branches)
        if not ok:
            raise InvalidTreeError(list(violated))

    def __hash__(self) -> int:
        return hash(self.branches)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, BinaryTree):
            return NotImplemented
        return self.branches == other.branches

    @classmethod
    def of(cls, branches: Iterable[ColoredList]) -> BinaryTree:
        return cls(frozenset(branches))

    def __iter__(self) -> Iterator[ColoredList]:
        return iter(sorted(self.branches, key=sort_key))

    def __len__(self) -> int:
        return len(self.branches)

    def __str__(self) -> str:
        return "{" + ", ".join(str(b) for b in self) + "}"

    @property
    def nodes(self) -> int:
        """Number of nonempty branches, i.e. labelled nodes."""
        return len(self.branches) - 1

    @property
    def is_nil(self) -> bool:
        return len(self.branches) == 1

    @_lazy
    def elements(self) -> frozenset[int]:
        return frozenset(x for b in self.branches for x in b.elems)

    @_lazy
    def root(self) -> ColoredList | None:
        return next((b for b in self.branches if len(b.elems) == 1), None)

    @_lazy
    def children(self) -> dict[tuple[ColoredList, int], ColoredList]:
        """``(branch, color) -> the branch's extension of that color``."""
        return {
            (b.parent(), b.colors[-1]): b
            for b in self.branches
            if len(b.elems) >= 2
        }

    def child(self, branch: ColoredList, color: int) -> ColoredList | None:
        return self.children.get((branch, color))

    def to_json(self) -> dict[str, Any]:
        return {"branches": [str(b) for b in self]}

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> BinaryTree:
        return cls.of(parse_colored_list(text) for text in data["branches"])


NIL = BinaryTree(frozenset({EMPTY}))


def leaf(x: int) -> BinaryTree:
    return BinaryTree(frozenset({EMPTY, ColoredList((x,), ())}))


def tree_sort_key(t: BinaryTree) -> tuple:
    return (t.nodes, tuple(sort_key(b) for b in t))


@dataclass(frozen=True)
class Node:
    label: int
    left: Node | None = None
    right: Node | None = None


def to_branch_set(t: Node | None) -> BinaryTree:
    return BinaryTree(frozenset(_branches(t)) | {EMPTY})


def _branches(t: Node | None) -> Iterator[ColoredList]:
    if t is None:
        return
    yield ColoredList((t.label,), ())
    for color, sub in ((1, t.left), (2, t.right)):
        for b in _branches(sub):
            yield ColoredList((t.label,) + b.elems, (color,) + b.colors)


def from_branch_set(tree: BinaryTree) -> Node | None:
    def build(branch: ColoredList) -> Node:
        kids = [tree.child(branch, c) for c in COLORS]
        return Node(
            branch.last,
            *(None if k is None else build(k) for k in kids),
        )

    return None if tree.root is None else build(tree.root)


def universe(t: BinaryTree) -> frozenset[int]:
    return t.elements


def covers(t: BinaryTree, l: Sequence[int]) -> bool:
    return t.elements == frozenset(l)


def tree_extend_one(
    t: BinaryTree, at: ColoredList, y: int, c: int | None = None
) -> BinaryTree:
    """Add the extension of branch ``at`` by ``y`` (with color ``c`` unless
    ``at`` is empty) as a new leaf."""
    if at not in t.branches:
        raise TreeError(f"branch {at} is not in the tree")
    if not at.elems:
        if not t.is_nil:
            raise TreeError("only nil can be extended at the empty branch")
        if c is not None:
            raise TreeError("extension at the empty branch takes no color")
        return leaf(y)
    if c is None:
        raise TreeError("extension at a nonempty branch needs a color")
    if t.child(at, c) is not None:
        raise TreeError(f"branch {at} already has a color-{c} extension")
    return BinaryTree(t.branches | {extend_colored(at, y, c)})


def is_tree_one_step(big: BinaryTree, small: BinaryTree) -> bool:
    extra = big.branches - small.branches
    if len(extra) != 1 or not small.branches <= big.branches:
        return False
    (new,) = extra
    if len(new.elems) == 1:
        return small.is_nil
    return new.parent() in small.branches


def tree_extensions(
    t: BinaryTree,
    size: int,
    t1: Relation | None = None,
    t2: Relation | None = None,
) -> Iterator[BinaryTree]:
    """All one-step extensions of ``t`` over [0, size); when ``t1``/``t2``
    are given, only those whose new branch is a t1,t2-list (which keeps a
    t1,t2-tree a t1,t2-tree)."""
    if t.is_nil:
        for x in range(size):
            yield leaf(x)
        return
    for b in t:
        if not b.elems:
            continue
        for c in COLORS:
            if t.child(b, c) is not None:
                continue
            for y in range(size):
                if t1 is not None and not can_extend_t1t2(t1, t2, b, y, c):
                    continue
                yield BinaryTree(t.branches | {extend_colored(b, y, c)})


@lru_cache(maxsize=1 << 16)
def is_t1t2_tree(t1: Relation, t2: Relation, t: BinaryTree) -> bool:
    return all(is_t1t2_list(t1, t2, b) for b in t.branches)


def enumerate_t1t2_trees(
    t1: Relation, t2: Relation, max_branches: int
) -> list[BinaryTree]:
    """Every t1,t2-tree with at most ``max_branches`` nonempty branches, in
    :func:`tree_sort_key` order.

    Every such tree arises from a smaller one by adding a leaf, so growing
    layer by layer from nil reaches all of them.
    """
    if t1.size != t2.size:
        raise RelationError(f"size mismatch: {t1.size} vs {t2.size}")
    found = [NIL]
    layer = {NIL}
    for _ in range(max_branches):
        layer = {
            bigger
            for t in layer
            for bigger in tree_extensions(t, t1.size, t1, t2)
        }
        found.extend(sorted(layer, key=tree_sort_key))
    return found


def decompose(
    t: BinaryTree, lam1: ColoredList, lam2: ColoredList
) -> tuple[frozenset[ColoredList], frozenset[ColoredList]]:
    """Split ``t`` into the branches comparable with ``lam1`` and those
    comparable with ``lam2`` (prefix order on both components)."""
    for lam in (lam1, lam2):
        if lam not in t.branches:
            raise TreeError(f"{lam} is not a branch of the tree")
    part1 = frozenset(mu for mu in t.branches if mu.comparable(lam1))
    part2 = frozenset(mu for mu in t.branches if mu.comparable(lam2))
    stray = t.branches - part1 - part2
    if stray:
        worst = min(stray, key=sort_key)
        raise TreeError(f"branch {worst} is comparable with neither {lam1} nor {lam2}")
    return part1, part2


def choose_color_map(
    t1: Relation, t2: Relation, l: Sequence[int], y: int
) -> tuple[int, ...]:
    """For each position ``j``, a color ``k`` with ``y t_k l[j]``; color 1
    whenever it works."""
    _check_union_chain(t1, t2, l, y)
    p1 = t1.pairs
    return tuple([1 if (y, x) in p1 else 2 for x in l])


def _check_union_chain(
    t1: Relation, t2: Relation, l: Sequence[int], y: int
) -> None:
    extended = tuple(l) + (y,)
    needed = {(b, a) for a, b in itertools.combinations(extended, 2)}
    if needed <= _union_pairs(t1, t2):
        return
    j, i = next(
        (j, i)
        for j in range(1, len(extended))
        for i in range(j)
        if (extended[j], extended[i]) not in t1.pairs | t2.pairs
    )
    raise GraftError(
        f"list + [{y}] is not decreasing transitive for the "
        f"union: position {j} is not below position {i}"
    )


@lru_cache(maxsize=256)
def _union_pairs(t1: Relation, t2: Relation) -> frozenset[tuple[int, int]]:
    return t1.pairs | t2.pairs


def graft(
    t1: Relation, t2: Relation, t: BinaryTree, l: Sequence[int], y: int
) -> BinaryTree:
    """Grow a t1,t2-tree covering ``l`` into one covering ``l + [y]`` by
    adding a single leaf labelled ``y``.

    Starting at the root, walk down the child whose color is the one chosen
    for the current label by :func:`choose_color_map`; the first missing
    child slot on that walk receives ``y``. The walk only lengthens the
    current branch, so it ends inside the finite tree.
    """
    if not is_t1t2_tree(t1, t2, t):
        raise GraftError("tree is not a t1,t2-tree")
    if not covers(t, l):
        raise GraftError(f"tree does not cover {list(l)}")
    _check_union_chain(t1, t2, l, y)
    return _graft_walk(t1, t, y)


@lru_cache(maxsize=1 << 16)
def _graft_walk(t1: Relation, t: BinaryTree, y: int) -> BinaryTree:
    # The chosen color of a label x is 1 iff y t1 x, and the labels of l are
    # those of t, so the walk is a function of (t1, t, y) alone.
    if t.is_nil:
        return leaf(y)
    p1 = t1.pairs
    children = t.children
    branch = t.root
    while True:
        c = 1 if (y, branch.elems[-1]) in p1 else 2
        below = children.get((branch, c))
        if below is None:
            # the walk only visits branches of t and stops at a free slot,
            # so this is tree_extend_one(t, branch, y, c) minus its checks
            new = ColoredList(branch.elems + (y,), branch.colors + (c,))
            return BinaryTree(t.branches | {new})
        branch = below
