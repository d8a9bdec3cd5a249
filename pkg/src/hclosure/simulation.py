"""Finite simulations and morphisms between structures, and bounded
verifications of the two list-to-tree simulations behind H-closure."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from hclosure.colored_lists import (
    TOP,
    ColoredList,
    enumerate_t1t2_lists,
    split_by_color,
)
from hclosure.relations import (
    Relation,
    RelationError,
    can_extend_h_list,
    enumerate_h_lists,
    is_h_list,
    product_index,
    product_relation,
    successor_structure,
    transitive_closure,
    union,
)
from hclosure.trees import (
    BinaryTree,
    TreeError,
    covers,
    enumerate_t1t2_trees,
    graft,
    is_t1t2_tree,
    is_tree_one_step,
    universe,
    validate_tree,
)


@dataclass(frozen=True)
class Structure:
    """A carrier of indexed points with a relation on the indices."""

    points: tuple[Hashable, ...]
    rel: Relation

    def __post_init__(self) -> None:
        if self.rel.size != len(self.points):
            raise RelationError(
                f"relation size {self.rel.size} != carrier size {len(self.points)}"
            )

    @classmethod
    def from_edges(
        cls, points: Sequence[Hashable], edges: Iterable[tuple[Hashable, Hashable]]
    ) -> Structure:
        index = {p: i for i, p in enumerate(points)}
        return cls(
            tuple(points),
            Relation(len(points), frozenset((index[p], index[q]) for p, q in edges)),
        )

    @classmethod
    def of(cls, rel: Relation) -> Structure:
        return cls(tuple(range(rel.size)), rel)

    def index(self) -> dict[Hashable, int]:
        return {p: i for i, p in enumerate(self.points)}


@dataclass(frozen=True)
class SimulationTable:
    pairs: frozenset[tuple[int, int]]

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> SimulationTable:
        return cls(frozenset(pairs))

    def dom(self) -> frozenset[int]:
        return frozenset(x for x, _ in self.pairs)


@dataclass(frozen=True)
class SimulationCheck:
    passed: bool
    counterexample: tuple[int, int, int] | None = None

    def __bool__(self) -> bool:
        return self.passed


def check_simulation(a: Structure, b: Structure, t: SimulationTable) -> SimulationCheck:
    """Whether every ``z a.rel x`` with ``x t y`` is matched by some ``w``
    with ``w b.rel y`` and ``z t w``.

    The counterexample is the lexicographically first failing ``(x, y, z)``.
    """
    for x, y in t.pairs:
        if not (0 <= x < a.rel.size and 0 <= y < b.rel.size):
            raise RelationError(f"table pair ({x}, {y}) outside the carriers")
    image: dict[int, set[int]] = defaultdict(set)
    for x, y in t.pairs:
        image[x].add(y)
    for x, y in sorted(t.pairs):
        targets = set(b.rel.below[y])
        for z in a.rel.below[x]:
            if targets.isdisjoint(image.get(z, ())):
                return SimulationCheck(False, (x, y, z))
    return SimulationCheck(True)


def is_total(t: SimulationTable, a: Structure) -> bool:
    return t.dom() == frozenset(range(len(a.points)))


def morphism_table(f: Mapping[int, int] | Sequence[int]) -> SimulationTable:
    items = f.items() if isinstance(f, Mapping) else enumerate(f)
    return SimulationTable.of(items)


def _as_function(f: Mapping[int, int] | Sequence[int], a: Structure) -> dict[int, int]:
    g = dict(f.items() if isinstance(f, Mapping) else enumerate(f))
    missing = sorted(set(range(len(a.points))) - g.keys())
    if missing:
        raise ValueError(f"map is not total: no image for {missing}")
    return g


def check_morphism(
    f: Mapping[int, int] | Sequence[int], a: Structure, b: Structure
) -> bool:
    g = _as_function(f, a)
    return all((g[x], g[y]) in b.rel.pairs for x, y in a.rel.pairs)


@dataclass(frozen=True)
class LemmaReport:
    lemma: str
    instance: dict[str, Any]
    bound: dict[str, int]
    passed: bool
    counterexample: dict[str, Any] | None = None

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict[str, Any]:
        out = {
            "lemma": self.lemma,
            "instance": self.instance,
            "bound": self.bound,
            "pass": self.passed,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> LemmaReport:
        return cls(
            data["lemma"],
            data["instance"],
            data["bound"],
            data["pass"],
            data.get("counterexample"),
        )


def describe_instance(t1: Relation, t2: Relation) -> dict[str, Any]:
    return {
        "size": t1.size,
        "t1": [list(p) for p in t1],
        "t2": [list(p) for p in t2],
    }


def _drop_last(l: Any) -> Any:
    return l.parent() if isinstance(l, ColoredList) else l[:-1]


def list_extension_relation(lists: Sequence[Any], proper: bool = False) -> Relation:
    """``(i, j)`` when ``lists[i]`` is ``lists[j]`` plus one element (or, with
    ``proper``, any number of elements). Works for plain tuples and for
    colored lists."""
    index = {l: i for i, l in enumerate(lists)}
    one_step = Relation(
        len(lists),
        frozenset(
            (i, index[_drop_last(l)])
            for i, l in enumerate(lists)
            if len(l) and _drop_last(l) in index
        ),
    )
    return transitive_closure(one_step) if proper else one_step


def pairing_structures(
    t1: Relation,
    t2: Relation,
    max_len: int,
    *,
    transitive: bool = False,
    product: Callable[[Relation, Relation], Relation] = product_relation,
) -> tuple[Structure, Structure, SimulationTable]:
    """The colored-list structure, the paired-lists-plus-top structure and
    the table given by :func:`split_by_color`, all bounded by ``max_len``.

    Pair components of a split have at most ``max_len - 1`` elements, so the
    target uses H-lists up to that length. With ``transitive`` both sides use
    proper extension (any number of steps) instead of one-step extension.
    """
    lists = enumerate_t1t2_lists(t1, t2, max_len)
    a = Structure(
        tuple(lists),
        list_extension_relation(lists, transitive),
    )
    bound = max(max_len - 1, 0)
    h1 = enumerate_h_lists(t1, bound)
    h2 = enumerate_h_lists(t2, bound)
    r1 = list_extension_relation(h1, transitive)
    r2 = list_extension_relation(h2, transitive)
    rel = successor_structure(product(r1, r2))
    top = rel.size - 1
    points: list[Hashable] = [(l1, l2) for l1 in h1 for l2 in h2]
    points.append(TOP)
    b = Structure(tuple(points), rel)

    i1 = {l: i for i, l in enumerate(h1)}
    i2 = {l: i for i, l in enumerate(h2)}
    pairs = []
    for i, cl in enumerate(lists):
        s = split_by_color(cl)
        if s.tag == "top":
            pairs.append((i, top))
        else:
            # components outside the H-lists have no target point
            if s.left in i1 and s.right in i2:
                pairs.append((i, product_index(i1[s.left], i2[s.right], len(h2))))
    return a, b, SimulationTable.of(pairs)


def verify_pairing_simulation(
    t1: Relation,
    t2: Relation,
    max_len: int,
    *,
    transitive: bool = False,
    product: Callable[[Relation, Relation], Relation] = product_relation,
) -> LemmaReport:
    """Check on the bounded fragment that splitting a t1,t2-list by color is a
    total simulation into pairs of H-lists plus top."""
    if t1.size != t2.size:
        raise RelationError(f"size mismatch: {t1.size} vs {t2.size}")
    a, b, table = pairing_structures(
        t1, t2, max_len, transitive=transitive, product=product
    )
    report = dict(
        lemma="pairing" + ("-transitive" if transitive else ""),
        instance=describe_instance(t1, t2),
        bound={"max_len": max_len},
    )
    mapped = table.dom()
    for i, cl in enumerate(a.points):
        if i in mapped:
            continue
        s = split_by_color(cl)
        return LemmaReport(
            **report,
            passed=False,
            counterexample={
                "reason": "split leaves the H-lists",
                "list": str(cl),
                "left": list(s.left),
                "right": list(s.right),
                "left_ok": is_h_list(t1, s.left),
                "right_ok": is_h_list(t2, s.right),
            },
        )
    check = check_simulation(a, b, table)
    if not check:
        x, y, z = check.counterexample
        return LemmaReport(
            **report,
            passed=False,
            counterexample={
                "reason": "step not matched",
                "list": str(a.points[x]),
                "image": _describe_point(b.points[y]),
                "extension": str(a.points[z]),
                "extension_image": _describe_point(split_by_color(a.points[z])),
            },
        )
    return LemmaReport(**report, passed=True)


def _describe_point(p: Any) -> Any:
    if p == TOP:
        return "top"
    if hasattr(p, "tag"):
        return [list(p.left), list(p.right)]
    return [list(p[0]), list(p[1])]


GraftFn = Callable[[Relation, Relation, BinaryTree, Sequence[int], int], BinaryTree]


def graft_failure(
    t1: Relation,
    t2: Relation,
    t: BinaryTree,
    l: Sequence[int],
    y: int,
    graft_fn: GraftFn = graft,
) -> str | None:
    """Run one graft and return why its postconditions fail, or ``None``."""
    try:
        grown = graft_fn(t1, t2, t, l, y)
    except TreeError as exc:
        return f"graft raised: {exc}"
    return postcondition_failure(t1, t2, t, grown, tuple(l) + (y,))


def postcondition_failure(
    t1: Relation,
    t2: Relation,
    t: BinaryTree,
    grown: BinaryTree,
    target: Sequence[int],
) -> str | None:
    """Why ``grown`` is not a valid one-step t1,t2-tree extension of ``t``
    covering ``target``, or ``None``."""
    ok, violated = validate_tree(grown.branches)
    if not ok:
        return "result violates condition(s) " + ", ".join(violated)
    if not is_tree_one_step(grown, t):
        return "result is not a one-step extension"
    if not is_t1t2_tree(t1, t2, grown):
        return "result is not a t1,t2-tree"
    if not covers(grown, target):
        return "result does not cover the extended list"
    return None


def verify_covering_simulation(
    t1: Relation,
    t2: Relation,
    max_len: int,
    *,
    max_branches: int | None = None,
    every_tree: bool = False,
    graft_fn: GraftFn = graft,
) -> LemmaReport:
    """Check that grafting realises the covering simulation of
    decreasing-transitive union lists into t1,t2-trees.

    For every union H-list ``l`` with an in-bound extension ``l + [y]`` and
    every t1,t2-tree ``t`` covering ``l``, the graft must be a one-step
    t1,t2-tree extension of ``t`` covering ``l + [y]``. By default ``t``
    ranges over trees with at most ``len(l)`` nodes (the bounded covering
    table of :func:`covering_structures`), further capped by
    ``max_branches``. With ``every_tree`` it ranges over all covering trees
    with at most ``max_branches`` nodes. Every list must be covered by some
    tree within the bound.
    """
    if t1.size != t2.size:
        raise RelationError(f"size mismatch: {t1.size} vs {t2.size}")
    if every_tree and max_branches is None:
        raise ValueError("every_tree needs max_branches")
    if every_tree:
        tree_bound = max_branches
    else:
        tree_bound = max(max_len - 1, 0)
        if max_branches is not None:
            tree_bound = min(tree_bound, max_branches)
    bound: dict[str, Any] = {"max_len": max_len}
    if max_branches is not None:
        bound["max_branches"] = max_branches
    if every_tree:
        bound["every_tree"] = True
    report = dict(
        lemma="covering", instance=describe_instance(t1, t2), bound=bound
    )
    joined = union([t1, t2])
    lists = enumerate_h_lists(joined, max_len)
    by_universe: dict[frozenset[int], list[BinaryTree]] = defaultdict(list)
    for t in enumerate_t1t2_trees(t1, t2, tree_bound):
        by_universe[t.elements].append(t)

    verdicts: dict[tuple[BinaryTree, BinaryTree, int], str | None] = {}
    for l in lists:
        limit = tree_bound if every_tree else min(len(l), tree_bound)
        trees = [t for t in by_universe.get(frozenset(l), ()) if t.nodes <= limit]
        if not trees and len(l) <= limit:
            return LemmaReport(
                **report,
                passed=False,
                counterexample={"reason": "list not covered", "list": list(l)},
            )
        if len(l) >= max_len:
            continue
        for y in range(joined.size):
            if not can_extend_h_list(joined, l, y):
                continue
            for t in trees:
                try:
                    grown = graft_fn(t1, t2, t, l, y)
                except TreeError as exc:
                    reason: str | None = f"graft raised: {exc}"
                else:
                    # t covers l, so the postconditions depend on (t, grown, y) only
                    key = (t, grown, y)
                    if key not in verdicts:
                        verdicts[key] = postcondition_failure(
                            t1, t2, t, grown, tuple(l) + (y,)
                        )
                    reason = verdicts[key]
                if reason is not None:
                    return LemmaReport(
                        **report,
                        passed=False,
                        counterexample={
                            "reason": reason,
                            "list": list(l),
                            "y": y,
                            "tree": t.to_json(),
                        },
                    )
    return LemmaReport(**report, passed=True)


def covering_structures(
    t1: Relation, t2: Relation, max_len: int
) -> tuple[Structure, Structure, SimulationTable]:
    """Union H-lists, t1,t2-trees and the covering table, bounded so that
    a tree is paired with a list only when it has no more nodes than the
    list has elements. This keeps every matching extension in bound, so
    :func:`check_simulation` applies directly."""
    joined = union([t1, t2])
    lists = enumerate_h_lists(joined, max_len)
    trees = enumerate_t1t2_trees(t1, t2, max_len)
    a = Structure.from_edges(lists, ((l, l[:-1]) for l in lists if l))
    tree_index = {t: i for i, t in enumerate(trees)}
    edges = []
    for t in trees:
        # t is one step above each tree obtained by dropping one of its leaves
        for b in t.branches:
            if not b.elems or any(
                t.child(b, c) is not None for c in (1, 2)
            ):
                continue
            smaller = BinaryTree(t.branches - {b})
            edges.append((tree_index[t], tree_index[smaller]))
    b_struct = Structure(tuple(trees), Relation(len(trees), frozenset(edges)))
    pairs = [
        (i, j)
        for i, l in enumerate(lists)
        for j, t in enumerate(trees)
        if t.nodes <= len(l) and covers(t, l)
    ]
    return a, b_struct, SimulationTable.of(pairs)
