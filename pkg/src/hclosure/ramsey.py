"""Two-colorings of complete graphs and the passage between union chains
and single-relation chains, at desk scale."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Literal, Mapping, Sequence

from hclosure.relations import Relation, RelationError, is_h_list, union


class ColoringError(ValueError):
    pass


def _pair_index(n: int, i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


@dataclass(frozen=True)
class PairColoring:
    """Colors of the edges of K_n, stored in ``combinations(range(n), 2)``
    order."""

    n: int
    colors: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.colors) != self.n * (self.n - 1) // 2:
            raise ColoringError(
                f"K_{self.n} has {self.n * (self.n - 1) // 2} edges, "
                f"got {len(self.colors)} colors"
            )
        if any(c not in (1, 2) for c in self.colors):
            raise ColoringError("colors must be 1 or 2")

    def color(self, i: int, j: int) -> int:
        if i == j:
            raise ColoringError(f"no self-pair ({i}, {i})")
        return self.colors[_pair_index(self.n, i, j)]

    def items(self) -> Iterator[tuple[tuple[int, int], int]]:
        return zip(itertools.combinations(range(self.n), 2), self.colors)

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping[tuple[int, int], int]) -> PairColoring:
        colors = [0] * (n * (n - 1) // 2)
        for (i, j), c in mapping.items():
            if i == j or not (0 <= i < n and 0 <= j < n):
                raise ColoringError(f"bad pair ({i}, {j}) for K_{n}")
            k = _pair_index(n, i, j)
            if colors[k] and colors[k] != c:
                raise ColoringError(f"conflicting colors for {{{i}, {j}}}")
            colors[k] = c
        missing = [p for p, c in zip(itertools.combinations(range(n), 2), colors) if not c]
        if missing:
            raise ColoringError(f"uncolored pairs: {missing}")
        return cls(n, tuple(colors))

    @classmethod
    def from_bits(cls, n: int, bits: int) -> PairColoring:
        """Edge ``k`` gets color 2 when bit ``k`` is set, else color 1."""
        m = n * (n - 1) // 2
        return cls(n, tuple(2 if bits >> k & 1 else 1 for k in range(m)))

    def relation(self, color: int) -> Relation:
        """The symmetric irreflexive relation of edges with this color."""
        pairs = set()
        for (i, j), c in self.items():
            if c == color:
                pairs.update({(i, j), (j, i)})
        return Relation(self.n, frozenset(pairs))


def all_colorings(n: int) -> Iterator[PairColoring]:
    for bits in range(1 << (n * (n - 1) // 2)):
        yield PairColoring.from_bits(n, bits)


def pentagon() -> PairColoring:
    """K_5 with cyclic-distance-1 edges colored 1 and distance-2 edges 2."""
    return PairColoring.from_mapping(
        5,
        {
            (i, j): 1 if min((j - i) % 5, (i - j) % 5) == 1 else 2
            for i, j in itertools.combinations(range(5), 2)
        },
    )


def is_homogeneous(col: PairColoring, vertices: Sequence[int]) -> int | None:
    """The shared color of all pairs inside ``vertices``, if there is one."""
    shades = {col.color(i, j) for i, j in itertools.combinations(vertices, 2)}
    return shades.pop() if len(shades) == 1 else None


def homogeneous_subset(col: PairColoring, k: int) -> tuple[tuple[int, ...], int] | None:
    """The lexicographically first ``k``-subset whose internal pairs all share
    one color, with that color; ``None`` when there is none.

    Depth-first over increasing vertex sequences, keeping only partial sets
    that are already monochromatic.
    """
    if k < 2:
        raise ValueError("homogeneous sets are defined for k >= 2")
    n = col.n
    if k > n:
        return None
    colors = col.colors

    def grow(chosen: list[int], shade: int) -> tuple[int, ...] | None:
        if len(chosen) == k:
            return tuple(chosen)
        for v in range(chosen[-1] + 1, n - (k - len(chosen)) + 1):
            if all(colors[_pair_index(n, u, v)] == shade for u in chosen):
                chosen.append(v)
                found = grow(chosen, shade)
                if found:
                    return found
                chosen.pop()
        return None

    for first in range(n - k + 1):
        for second in range(first + 1, n - k + 2):
            shade = colors[_pair_index(n, first, second)]
            found = grow([first, second], shade)
            if found:
                return found, shade
    return None


def star_relation(r: Relation) -> Relation:
    """Keep the pairs ``(a, b)`` with ``a < b``."""
    return Relation(r.size, frozenset((a, b) for a, b in r.pairs if a < b))


def coloring_from_chain(s: Relation, t: Relation, chain: Sequence[int]) -> PairColoring:
    """Color positions ``i < j`` with 1 when ``chain[j] s chain[i]``, else 2.

    The chain must be decreasing transitive for ``s | t``, so color 2 means
    ``chain[j] t chain[i]``. Pairs in both relations get color 1.
    """
    mapping = {}
    for i, j in itertools.combinations(range(len(chain)), 2):
        pair = (chain[j], chain[i])
        if pair in s.pairs:
            mapping[i, j] = 1
        elif pair in t.pairs:
            mapping[i, j] = 2
        else:
            raise RelationError(
                f"chain position {j} ({chain[j]}) is below position {i} "
                f"({chain[i]}) in neither relation"
            )
    return PairColoring.from_mapping(len(chain), mapping)


def extract_monochromatic_chain(
    s: Relation, t: Relation, chain: Sequence[int], k: int
) -> tuple[tuple[int, ...], Literal["s", "t"]] | None:
    """Positions of ``k`` chain elements forming a decreasing transitive
    chain for ``s`` alone or ``t`` alone, tagged with the relation."""
    if not is_h_list(union([s, t]), chain):
        raise RelationError("chain is not decreasing transitive for s | t")
    found = homogeneous_subset(coloring_from_chain(s, t, chain), k)
    if found is None:
        return None
    positions, shade = found
    tag: Literal["s", "t"] = "s" if shade == 1 else "t"
    sub = [chain[p] for p in positions]
    if not is_h_list(s if tag == "s" else t, sub):
        raise AssertionError(f"extracted positions {positions} fail the {tag} check")
    return positions, tag


def homogeneous_via_star(col: PairColoring, k: int) -> tuple[tuple[int, ...], int] | None:
    """Route a coloring through the chain argument: read the color classes as
    symmetric relations, keep their ascending pairs, and pull a
    single-relation chain out of the descending chain n-1, ..., 0 of their
    union. The vertices found form a homogeneous set."""
    s_star = star_relation(col.relation(1))
    t_star = star_relation(col.relation(2))
    chain = tuple(range(col.n - 1, -1, -1))
    found = extract_monochromatic_chain(s_star, t_star, chain, k)
    if found is None:
        return None
    positions, tag = found
    return tuple(sorted(chain[p] for p in positions)), 1 if tag == "s" else 2


def parse_coloring(text: str, source: str = "<string>") -> PairColoring:
    """Parse ``vertices N`` then one ``i j c`` line per unordered pair."""
    n: int | None = None
    mapping: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            if n is None:
                if len(fields) != 2 or fields[0] != "vertices":
                    raise ValueError("expected 'vertices N'")
                n = int(fields[1])
                continue
            if len(fields) != 3:
                raise ValueError("expected 'i j c'")
            i, j, c = map(int, fields)
            if c not in (1, 2):
                raise ValueError(f"color {c} is not 1 or 2")
            if i == j or not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"bad pair ({i}, {j}) for {n} vertices")
            key = (min(i, j), max(i, j))
            if key in mapping and mapping[key] != c:
                raise ValueError(f"conflicting color for {{{i}, {j}}}")
        except ValueError as exc:
            raise ColoringError(f"{source}:{lineno}: {exc}") from None
        mapping[key] = c
    if n is None:
        raise ColoringError(f"{source}: missing 'vertices N' header")
    try:
        return PairColoring.from_mapping(n, mapping)
    except ColoringError as exc:
        raise ColoringError(f"{source}: {exc}") from None


def read_coloring(path: str | Path) -> PairColoring:
    path = Path(path)
    return parse_coloring(path.read_text(), str(path))
