"""Lists whose consecutive segments carry a color from {1, 2}."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

from hclosure.relations import Relation, RelationError

COLORS = (1, 2)
_COLOR_SET = frozenset(COLORS)


class ColoredListError(ValueError):
    pass


@dataclass(frozen=True)
class ColoredList:
    elems: tuple[int, ...] = ()
    colors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if len(self.colors) != max(len(self.elems) - 1, 0):
            raise ColoredListError(
                f"{len(self.elems)} elements need {max(len(self.elems) - 1, 0)} "
                f"colors, got {len(self.colors)}"
            )
        if not _COLOR_SET.issuperset(self.colors):
            bad = next(c for c in self.colors if c not in _COLOR_SET)
            raise ColoredListError(f"color {bad!r} is not 1 or 2")
        object.__setattr__(self, "_hash", hash((self.elems, self.colors)))

    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]

    def __len__(self) -> int:
        return len(self.elems)

    def __str__(self) -> str:
        tokens: list[str] = []
        for i, x in enumerate(self.elems):
            tokens.append(str(x))
            if i < len(self.colors):
                tokens.append(str(self.colors[i]))
        return "[" + " ".join(tokens) + "]"

    @property
    def last(self) -> int:
        return self.elems[-1]

    def parent(self) -> ColoredList:
        """The list this one is a one-step extension of."""
        if not self.elems:
            raise ColoredListError("the empty list has no parent")
        return ColoredList(self.elems[:-1], self.colors[:-1])

    def is_prefix_of(self, other: ColoredList) -> bool:
        n = len(self.elems)
        return (
            other.elems[:n] == self.elems
            and other.colors[: len(self.colors)] == self.colors
        )

    def comparable(self, other: ColoredList) -> bool:
        return self.is_prefix_of(other) or other.is_prefix_of(self)


EMPTY = ColoredList()


def sort_key(cl: ColoredList) -> tuple:
    return (len(cl.elems), cl.elems, cl.colors)


def parse_colored_list(text: str) -> ColoredList:
    """Parse ``[x1 c1 x2 ... xn]``; e.g. ``[0 1 1 2 2]``."""
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ColoredListError(f"colored list must be bracketed: {text!r}")
    try:
        tokens = [int(tok) for tok in body[1:-1].split()]
    except ValueError:
        raise ColoredListError(f"non-integer token in {text!r}") from None
    if tokens and len(tokens) % 2 == 0:
        raise ColoredListError(f"expected odd token count in {text!r}")
    return ColoredList(tuple(tokens[0::2]), tuple(tokens[1::2]))


def extend_colored(cl: ColoredList, y: int, c: int | None = None) -> ColoredList:
    if not cl.elems:
        if c is not None:
            raise ColoredListError("extending the empty list takes no color")
        return ColoredList((y,), ())
    if c is None:
        raise ColoredListError("extending a nonempty list needs a color")
    return ColoredList(cl.elems + (y,), cl.colors + (c,))


def is_one_step_colored(big: ColoredList, small: ColoredList) -> bool:
    return len(big.elems) == len(small.elems) + 1 and big.parent() == small


def _check_range(t: Relation, elems: Sequence[int]) -> None:
    for x in elems:
        if not 0 <= x < t.size:
            raise RelationError(f"element {x} outside universe [0, {t.size})")


def is_t1t2_list(t1: Relation, t2: Relation, cl: ColoredList) -> bool:
    """Whether every color-k segment starting at ``x_i`` has all later
    elements ``t_k``-below ``x_i``."""
    if t1.size != t2.size:
        raise RelationError(f"size mismatch: {t1.size} vs {t2.size}")
    _check_range(t1, cl.elems)
    by_color = (None, t1.pairs, t2.pairs)
    xs = cl.elems
    for i, c in enumerate(cl.colors):
        pairs = by_color[c]
        xi = xs[i]
        for j in range(i + 1, len(xs)):
            if (xs[j], xi) not in pairs:
                return False
    return True


def can_extend_t1t2(
    t1: Relation, t2: Relation, cl: ColoredList, y: int, c: int
) -> bool:
    """Whether ``extend_colored(cl, y, c)`` stays a t1,t2-list, given that
    ``cl`` is a nonempty one."""
    by_color = (None, t1.pairs, t2.pairs)
    for x, ci in zip(cl.elems, cl.colors + (c,)):
        if (y, x) not in by_color[ci]:
            return False
    return True


def enumerate_t1t2_lists(
    t1: Relation, t2: Relation, max_len: int
) -> list[ColoredList]:
    """Every t1,t2-list with at most ``max_len`` elements, in
    :func:`sort_key` order."""
    if t1.size != t2.size:
        raise RelationError(f"size mismatch: {t1.size} vs {t2.size}")
    found = [EMPTY]
    if max_len < 1:
        return found
    frontier = [ColoredList((x,), ()) for x in range(t1.size)]
    found.extend(frontier)
    for _ in range(max_len - 1):
        frontier = [
            ColoredList(cl.elems + (y,), cl.colors + (c,))
            for cl in frontier
            for y in range(t1.size)
            for c in COLORS
            if can_extend_t1t2(t1, t2, cl, y, c)
        ]
        found.extend(frontier)
    found.sort(key=sort_key)
    return found


@dataclass(frozen=True)
class SplitResult:
    tag: Literal["top", "pair"]
    left: tuple[int, ...] = ()
    right: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.tag == "top" and (self.left or self.right):
            raise ValueError("top carries no components")


TOP = SplitResult("top")


def split_by_color(cl: ColoredList) -> SplitResult:
    """Send the empty list to top, anything else to the pair (color-1
    sublist, color-2 sublist); an element's color is that of the segment
    leaving it, so the last element lands in neither."""
    if not cl.elems:
        return TOP
    left = tuple(x for x, c in zip(cl.elems, cl.colors) if c == 1)
    right = tuple(x for x, c in zip(cl.elems, cl.colors) if c == 2)
    return SplitResult("pair", left, right)
