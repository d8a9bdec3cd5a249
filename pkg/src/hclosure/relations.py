"""Finite binary relations over the universe [0, size).

A pair ``(a, b)`` in a relation ``r`` reads "a r b". Descending chains step
downward, so the elements below ``x`` are the ``y`` with ``(y, x)`` in ``r``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from graphlib import TopologicalSorter
from pathlib import Path
from typing import Any, Iterable, Iterator, Sequence

Pair = tuple[int, int]


class RelationError(ValueError):
    """Malformed relation: index out of range, size mismatch, bad file."""


class CyclicRelationError(ValueError):
    def __init__(self, cycle: list[int]):
        super().__init__(f"relation is cyclic: {cycle}")
        self.cycle = cycle


class InconsistencyError(RuntimeError):
    """Two routes that must agree did not."""


@dataclass(frozen=True)
class Relation:
    size: int
    pairs: frozenset[Pair]

    def __post_init__(self) -> None:
        if self.size < 0:
            raise RelationError(f"negative universe size {self.size}")
        for a, b in self.pairs:
            if not (0 <= a < self.size and 0 <= b < self.size):
                raise RelationError(
                    f"pair ({a}, {b}) outside universe [0, {self.size})"
                )
        object.__setattr__(self, "_hash", hash((self.size, self.pairs)))

    # relations key many caches, so hashing and equality are kept cheap
    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Relation):
            return NotImplemented
        return self.size == other.size and self.pairs == other.pairs

    def __contains__(self, pair: object) -> bool:
        return pair in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[Pair]:
        return iter(sorted(self.pairs))

    def issubset(self, other: Relation) -> bool:
        return self.size == other.size and self.pairs <= other.pairs

    @cached_property
    def successors(self) -> tuple[tuple[int, ...], ...]:
        """``successors[x]``: sorted ``b`` with ``x r b``."""
        out: list[list[int]] = [[] for _ in range(self.size)]
        for a, b in self.pairs:
            out[a].append(b)
        return tuple(tuple(sorted(bs)) for bs in out)

    @cached_property
    def below(self) -> tuple[tuple[int, ...], ...]:
        """``below[x]``: sorted ``y`` with ``y r x``."""
        out: list[list[int]] = [[] for _ in range(self.size)]
        for a, b in self.pairs:
            out[b].append(a)
        return tuple(tuple(sorted(ys)) for ys in out)

    def to_text(self) -> str:
        lines = [f"size {self.size}"]
        lines.extend(f"{a} {b}" for a, b in self)
        return "\n".join(lines) + "\n"


def make_relation(size: int, pairs: Iterable[Sequence[int]] = ()) -> Relation:
    return Relation(size, frozenset((int(a), int(b)) for a, b in pairs))


def strict_order(n: int) -> Relation:
    """([0, n), <): ``a r b`` iff ``a < b``."""
    return Relation(n, frozenset(itertools.combinations(range(n), 2)))


def from_mask(size: int, mask: int) -> Relation:
    """Relation whose pair ``(a, b)`` is present iff bit ``a*size + b`` is set."""
    return Relation(
        size,
        frozenset(
            divmod(bit, size) for bit in range(size * size) if mask >> bit & 1
        ),
    )


def to_mask(r: Relation) -> int:
    return sum(1 << (a * r.size + b) for a, b in r.pairs)


def all_relations(size: int) -> Iterator[Relation]:
    """Every relation on [0, size), in mask order."""
    for mask in range(1 << (size * size)):
        yield from_mask(size, mask)


def random_relation(size: int, rng: random.Random, density: float = 0.5) -> Relation:
    return Relation(
        size,
        frozenset(
            (a, b)
            for a in range(size)
            for b in range(size)
            if rng.random() < density
        ),
    )


def union(rs: Sequence[Relation], size: int | None = None) -> Relation:
    """Set union of relations sharing one universe.

    ``size`` is only needed to take the union of an empty sequence.
    """
    sizes = {r.size for r in rs}
    if size is not None:
        sizes.add(size)
    if len(sizes) != 1:
        raise RelationError(
            f"union needs exactly one shared size, got {sorted(sizes)}"
        )
    pairs: frozenset[Pair] = frozenset().union(*(r.pairs for r in rs))
    return Relation(sizes.pop(), pairs)


def product_index(left: int, right: int, right_size: int) -> int:
    return left * right_size + right


def product_components(index: int, right_size: int) -> Pair:
    return divmod(index, right_size)


def product_relation(r: Relation, s: Relation) -> Relation:
    """Componentwise step relation on [0, r.size) x [0, s.size).

    ``(x, y)`` is related to ``(x', y')`` when either coordinate steps and the
    other stays put, or both step. Product points are encoded with
    :func:`product_index`.
    """
    m = s.size
    pairs: set[Pair] = set()
    for x, x2 in r.pairs:
        for y in range(m):
            pairs.add((x * m + y, x2 * m + y))
    for y, y2 in s.pairs:
        for x in range(r.size):
            pairs.add((x * m + y, x * m + y2))
    for x, x2 in r.pairs:
        for y, y2 in s.pairs:
            pairs.add((x * m + y, x2 * m + y2))
    return Relation(r.size * m, frozenset(pairs))


def successor_structure(r: Relation) -> Relation:
    """Adjoin a top element (index ``r.size``) above every old element."""
    top = r.size
    return Relation(top + 1, r.pairs | {(x, top) for x in range(top)})


def transitive_closure(r: Relation) -> Relation:
    reach = [set(bs) for bs in r.successors]
    for k in range(r.size):
        via_k = reach[k]
        for i in range(r.size):
            if k in reach[i]:
                reach[i] |= via_k
    return Relation(
        r.size, frozenset((a, b) for a in range(r.size) for b in reach[a])
    )


def _reaches(r: Relation, start: int, target: int, avoid: set[int]) -> bool:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in r.successors[u]:
            if v == target:
                return True
            if v not in seen and v not in avoid:
                seen.add(v)
                stack.append(v)
    return False


def find_cycle(r: Relation) -> list[int] | None:
    """A cycle ``[c0, ..., ck]`` with ``ck == c0``, ``k > 0`` and every
    ``(c_i, c_{i+1})`` in ``r``, or ``None`` when ``r`` is acyclic.

    The start is the smallest element lying on any cycle; from there the
    lexicographically smallest simple cycle is returned.
    """
    for s in range(r.size):
        if not _reaches(r, s, s, set()):
            continue
        path = [s]
        on_path = {s}
        u = s
        while True:
            for v in r.successors[u]:
                if v == s:
                    return path + [s]
                if v not in on_path and _reaches(r, v, s, on_path):
                    path.append(v)
                    on_path.add(v)
                    u = v
                    break
    return None


def find_loop(r: Relation) -> int | None:
    for x in range(r.size):
        if (x, x) in r.pairs:
            return x
    return None


def height_map(r: Relation) -> dict[int, int]:
    """Length in edges of the longest descending chain from each element.

    Raises :class:`CyclicRelationError` carrying the :func:`find_cycle`
    witness when ``r`` has a cycle.
    """
    cycle = find_cycle(r)
    if cycle is not None:
        raise CyclicRelationError(cycle)
    graph = {x: r.below[x] for x in range(r.size)}
    heights: dict[int, int] = {}
    for x in TopologicalSorter(graph).static_order():
        heights[x] = max((heights[y] + 1 for y in r.below[x]), default=0)
    return dict(sorted(heights.items()))


def is_h_list(t: Relation, l: Sequence[int]) -> bool:
    """Whether ``l`` is decreasing and transitive: ``l[j] t l[i]`` for i < j."""
    for x in l:
        if not 0 <= x < t.size:
            raise RelationError(f"element {x} outside universe [0, {t.size})")
    pairs = t.pairs
    return all(
        (l[j], l[i]) in pairs
        for j in range(1, len(l))
        for i in range(j)
    )


def can_extend_h_list(t: Relation, l: Sequence[int], y: int) -> bool:
    """Whether ``l + [y]`` stays an H-list, given that ``l`` is one."""
    pairs = t.pairs
    return all((y, x) in pairs for x in l)


def enumerate_h_lists(t: Relation, max_len: int) -> list[tuple[int, ...]]:
    """Every H-list of length at most ``max_len``, ordered by length then
    lexicographically."""
    found: list[tuple[int, ...]] = [()]
    frontier: list[tuple[int, ...]] = [()]
    for _ in range(max_len):
        frontier = [
            l + (y,)
            for l in frontier
            for y in range(t.size)
            if can_extend_h_list(t, l, y)
        ]
        found.extend(frontier)
    return found


def random_h_chain(
    t: Relation, max_len: int, rng: random.Random
) -> tuple[int, ...]:
    """Grow an H-list one random admissible element at a time."""
    chain: tuple[int, ...] = ()
    while len(chain) < max_len:
        options = [y for y in range(t.size) if can_extend_h_list(t, chain, y)]
        if not options:
            break
        chain += (rng.choice(options),)
    return chain


class Verdict(str, Enum):
    WELL_FOUNDED = "well-founded"
    NOT_WELL_FOUNDED = "not-well-founded"
    H_WELL_FOUNDED = "h-well-founded"
    NOT_H_WELL_FOUNDED = "not-h-well-founded"
    TERMINATING = "terminating"
    UNKNOWN = "unknown"

    @property
    def affirmative(self) -> bool:
        return self in (
            Verdict.WELL_FOUNDED,
            Verdict.H_WELL_FOUNDED,
            Verdict.TERMINATING,
        )


# verdict -> witness kinds it may carry
WITNESS_KINDS: dict[Verdict, frozenset[str | None]] = {
    Verdict.WELL_FOUNDED: frozenset({"heights"}),
    Verdict.NOT_WELL_FOUNDED: frozenset({"cycle"}),
    Verdict.H_WELL_FOUNDED: frozenset({None}),
    Verdict.NOT_H_WELL_FOUNDED: frozenset({"loop", "component-loop"}),
    Verdict.TERMINATING: frozenset({"cover"}),
    Verdict.UNKNOWN: frozenset({"uncovered-pair", "component-loop"}),
}


@dataclass(frozen=True)
class Certificate:
    verdict: Verdict
    witness_kind: str | None = None
    witness: Any = None
    details: dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.witness_kind not in WITNESS_KINDS[self.verdict]:
            raise ValueError(
                f"witness kind {self.witness_kind!r} does not fit verdict "
                f"{self.verdict.value!r}"
            )

    def to_json(self) -> dict[str, Any]:
        witness = self.witness
        if self.witness_kind == "heights":
            witness = {str(k): v for k, v in witness.items()}
        elif isinstance(witness, tuple):
            witness = list(witness)
        out: dict[str, Any] = {
            "verdict": self.verdict.value,
            "witness_kind": self.witness_kind,
            "witness": witness,
        }
        if self.details:
            out["details"] = self.details
        return out

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> Certificate:
        kind = data.get("witness_kind")
        witness = data.get("witness")
        if kind == "heights":
            witness = {int(k): v for k, v in witness.items()}
        elif kind == "uncovered-pair":
            witness = tuple(witness)
        elif kind == "cover":
            witness = [tuple(item) for item in witness]
        return cls(Verdict(data["verdict"]), kind, witness, data.get("details", {}))


def is_well_founded_finite(r: Relation) -> Certificate:
    cycle = find_cycle(r)
    if cycle is not None:
        return Certificate(Verdict.NOT_WELL_FOUNDED, "cycle", cycle)
    return Certificate(Verdict.WELL_FOUNDED, "heights", height_map(r))


def is_h_well_founded_finite(t: Relation) -> Certificate:
    loop = find_loop(t)
    if loop is not None:
        return Certificate(Verdict.NOT_H_WELL_FOUNDED, "loop", loop)
    return Certificate(Verdict.H_WELL_FOUNDED)


def check_h_closure(ts: Sequence[Relation]) -> Certificate:
    """Decide both sides of "every component is H-well-founded iff the union
    is" and return the union's certificate once they agree."""
    if not ts:
        raise RelationError("check_h_closure needs at least one relation")
    joined = union(ts)
    component_loops = [find_loop(t) for t in ts]
    components_ok = all(loop is None for loop in component_loops)
    cert = is_h_well_founded_finite(joined)
    if components_ok != (cert.verdict is Verdict.H_WELL_FOUNDED):
        raise InconsistencyError(
            f"components loop-free={components_ok} but union verdict "
            f"{cert.verdict.value}"
        )
    details = {
        "components": [
            Verdict.H_WELL_FOUNDED.value if loop is None
            else Verdict.NOT_H_WELL_FOUNDED.value
            for loop in component_loops
        ],
        "agree": True,
    }
    return Certificate(cert.verdict, cert.witness_kind, cert.witness, details)


def check_disjunctive_termination(
    step: Relation, ts: Sequence[Relation]
) -> Certificate:
    """Terminating when the transitive closure of ``step`` is covered by the
    union of ``ts`` and every ``ts[i]`` is loop-free.

    On success the witness lists, for each closure pair, the index of the
    first relation covering it. On failure the witness is the smallest
    uncovered closure pair, or ``{"index": i, "element": x}`` for the first
    relation with a loop at ``x``.
    """
    for t in ts:
        if t.size != step.size:
            raise RelationError(
                f"size mismatch: step has {step.size}, invariant has {t.size}"
            )
    closure = transitive_closure(step)
    cover: list[tuple[int, int, int]] = []
    for a, b in closure:
        owner = next((i for i, t in enumerate(ts) if (a, b) in t.pairs), None)
        if owner is None:
            return Certificate(
                Verdict.UNKNOWN,
                "uncovered-pair",
                (a, b),
                {"closure_included": False},
            )
        cover.append((a, b, owner))
    loops = [find_loop(t) for t in ts]
    for i, loop in enumerate(loops):
        if loop is not None:
            return Certificate(
                Verdict.UNKNOWN,
                "component-loop",
                {"index": i, "element": loop},
                {"closure_included": True, "loop_free": [x is None for x in loops]},
            )
    return Certificate(
        Verdict.TERMINATING,
        "cover",
        cover,
        {"closure_included": True, "loop_free": [True] * len(ts)},
    )


def parse_relation(text: str, source: str = "<string>") -> Relation:
    """Parse the text format: ``size N`` then one ``a b`` pair per line.

    Blank lines and lines starting with ``#`` are skipped.
    """
    size: int | None = None
    pairs: list[Pair] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            if size is None:
                if len(fields) != 2 or fields[0] != "size":
                    raise ValueError("expected 'size N'")
                size = int(fields[1])
                continue
            if len(fields) != 2:
                raise ValueError("expected 'a b'")
            a, b = int(fields[0]), int(fields[1])
        except ValueError as exc:
            raise RelationError(f"{source}:{lineno}: {exc}") from None
        if size is not None and not (0 <= a < size and 0 <= b < size):
            raise RelationError(
                f"{source}:{lineno}: pair ({a}, {b}) outside [0, {size})"
            )
        pairs.append((a, b))
    if size is None:
        raise RelationError(f"{source}: missing 'size N' header")
    return make_relation(size, pairs)


def read_relation(path: str | Path) -> Relation:
    path = Path(path)
    return parse_relation(path.read_text(), str(path))


def relabel(r: Relation, perm: Sequence[int]) -> Relation:
    """Image of ``r`` under the bijection ``x -> perm[x]``."""
    return Relation(r.size, frozenset((perm[a], perm[b]) for a, b in r.pairs))


def pair_orbit_representatives(
    size: int, swap: bool = False
) -> list[tuple[int, int, int]]:
    """One ``(mask1, mask2, orbit_size)`` per orbit of relation pairs on
    [0, size) under simultaneous relabeling (and, with ``swap``, exchanging
    the two relations). The representative is the orbit's smallest mask
    pair; orbit sizes sum to ``4 ** (size * size)``."""
    n_masks = 1 << (size * size)
    images = []
    for perm in itertools.permutations(range(size)):
        table = [0] * n_masks
        for bit in range(size * size):
            a, b = divmod(bit, size)
            image_bit = 1 << (perm[a] * size + perm[b])
            step = 1 << bit
            for mask in range(n_masks):
                if mask & step:
                    table[mask] |= image_bit
        images.append(table)
    reps = []
    for m1 in range(n_masks):
        for m2 in range(n_masks):
            orbit = {(img[m1], img[m2]) for img in images}
            if swap:
                orbit |= {(q, p) for p, q in orbit}
            if min(orbit) == (m1, m2):
                reps.append((m1, m2, len(orbit)))
    return reps
