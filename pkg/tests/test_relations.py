from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hclosure.relations import (
    Certificate,
    CyclicRelationError,
    Relation,
    RelationError,
    Verdict,
    all_relations,
    check_disjunctive_termination,
    check_h_closure,
    enumerate_h_lists,
    find_cycle,
    find_loop,
    from_mask,
    height_map,
    is_h_list,
    is_h_well_founded_finite,
    is_well_founded_finite,
    make_relation,
    pair_orbit_representatives,
    parse_relation,
    product_components,
    product_index,
    product_relation,
    random_h_chain,
    relabel,
    strict_order,
    successor_structure,
    to_mask,
    transitive_closure,
    union,
)

from conftest import relations


def brute_force_cycle_exists(r: Relation) -> bool:
    """Any closed walk of length 1..size exists."""
    for start in range(r.size):
        frontier = {start}
        for _ in range(r.size):
            frontier = {b for a in frontier for b in r.successors[a]}
            if start in frontier:
                return True
    return False


def longest_chain(r: Relation, x: int) -> int:
    return max((1 + longest_chain(r, y) for y in r.below[x]), default=0)


# -- construction ----------------------------------------------------------


def test_make_relation_examples():
    assert len(make_relation(3, [(1, 0), (2, 1)])) == 2
    empty = make_relation(0, [])
    assert empty.size == 0 and len(empty) == 0
    assert len(make_relation(2, [(0, 1), (0, 1)])) == 1


@pytest.mark.parametrize("pair", [(2, 0), (0, -1), (5, 5)])
def test_make_relation_rejects_out_of_range(pair):
    with pytest.raises(RelationError):
        make_relation(2, [pair])


def test_mask_round_trip():
    for r in all_relations(2):
        assert from_mask(2, to_mask(r)) == r
    assert sum(1 for _ in all_relations(2)) == 16


def test_union_examples():
    t = make_relation(3, [(1, 0), (2, 2)])
    empty = make_relation(3)
    assert union([t, empty]) == t
    assert union([t, t]) == t
    assert union([make_relation(3, [(1, 0)]), make_relation(3, [(2, 1)])]).pairs == {(1, 0), (2, 1)}
    with pytest.raises(RelationError):
        union([make_relation(2), make_relation(3)])
    with pytest.raises(RelationError):
        union([])
    assert union([], size=4) == make_relation(4)


# -- product and successor --------------------------------------------------------


def brute_force_product(r: Relation, s: Relation) -> set[tuple[int, int]]:
    out = set()
    points = list(itertools.product(range(r.size), range(s.size)))
    for (x, y), (x2, y2) in itertools.product(points, points):
        rx, sy = (x, x2) in r, (y, y2) in s
        if (rx and y == y2) or (x == x2 and sy) or (rx and sy):
            out.add((product_index(x, y, s.size), product_index(x2, y2, s.size)))
    return out


def test_product_five_pair_example():
    r = make_relation(2, [(1, 0)])
    p = product_relation(r, r)
    idx = lambda x, y: product_index(x, y, 2)
    expected = {(idx(1, y), idx(0, y)) for y in (0, 1)}
    expected |= {(idx(x, 1), idx(x, 0)) for x in (0, 1)}
    expected.add((idx(1, 1), idx(0, 0)))
    assert p.pairs == expected and len(p) == 5


def test_product_empty():
    assert len(product_relation(make_relation(2), make_relation(3))) == 0


@given(relations(max_size=3), relations(max_size=3))
def test_product_matches_clause_enumeration(r, s):
    assert product_relation(r, s).pairs == brute_force_product(r, s)


def test_product_of_strict_orders_is_componentwise():
    lt = make_relation(2, [(0, 1)])
    p = product_relation(lt, lt)
    for a, b in itertools.product(range(4), repeat=2):
        (x, y), (x2, y2) = product_components(a, 2), product_components(b, 2)
        componentwise = x <= x2 and y <= y2 and (x, y) != (x2, y2)
        assert ((a, b) in p) == componentwise


def test_product_index_bijective():
    seen = {product_index(x, y, 3) for x in range(4) for y in range(3)}
    assert seen == set(range(12))
    assert all(product_components(product_index(x, y, 3), 3) == (x, y) for x in range(4) for y in range(3))


def test_successor_structure_examples():
    assert successor_structure(make_relation(0)) == make_relation(1)
    assert successor_structure(make_relation(2)).pairs == {(0, 2), (1, 2)}
    r = make_relation(2, [(1, 0)])
    assert r.pairs <= successor_structure(r).pairs


def test_successor_preserves_acyclicity_exhaustive():
    for n in range(4):
        for r in all_relations(n):
            if find_cycle(r) is None:
                assert find_cycle(successor_structure(r)) is None


# -- closure, cycles, loops, heights ------------------------------------------------


def test_transitive_closure_examples():
    assert transitive_closure(make_relation(3, [(1, 0), (2, 1)])).pairs == {(1, 0), (2, 1), (2, 0)}
    lt = strict_order(4)
    assert transitive_closure(lt) == lt
    loop = transitive_closure(make_relation(2, [(0, 1), (1, 0)]))
    assert {(0, 0), (1, 1)} <= loop.pairs


@given(relations(max_size=4))
def test_transitive_closure_is_least_fixpoint(r):
    closure = transitive_closure(r)
    expected = set(r.pairs)
    while True:
        grown = expected | {(a, d) for a, b in expected for c, d in expected if b == c}
        if grown == expected:
            break
        expected = grown
    assert closure.pairs == expected


def test_find_cycle_examples():
    assert find_cycle(strict_order(5)) is None
    assert find_cycle(make_relation(1, [(0, 0)])) == [0, 0]
    assert find_cycle(make_relation(2, [(0, 1), (1, 0)])) == [0, 1, 0]


def test_find_cycle_deterministic_choice():
    # 1 is the smallest element on a cycle; from 1 the lexicographic walk goes via 2
    r = make_relation(4, [(0, 1), (1, 3), (3, 1), (1, 2), (2, 1)])
    assert find_cycle(r) == [1, 2, 1]


@given(relations(max_size=5))
def test_find_cycle_matches_brute_force(r):
    cycle = find_cycle(r)
    assert (cycle is not None) == brute_force_cycle_exists(r)
    if cycle is not None:
        assert len(cycle) >= 2 and cycle[0] == cycle[-1]
        assert all(step in r for step in zip(cycle, cycle[1:]))


def test_find_loop_examples():
    assert find_loop(make_relation(2, [(1, 0)])) is None
    assert find_loop(make_relation(3, [(2, 2), (1, 1)])) == 1


def test_height_examples():
    assert height_map(strict_order(4)) == {0: 0, 1: 1, 2: 2, 3: 3}
    assert height_map(make_relation(3)) == {0: 0, 1: 0, 2: 0}
    with pytest.raises(CyclicRelationError) as info:
        height_map(make_relation(1, [(0, 0)]))
    assert info.value.cycle == [0, 0]


def test_heights_versus_cycles_exhaustive():
    for n in range(4):
        for r in all_relations(n):
            cycle = find_cycle(r)
            if cycle is not None:
                with pytest.raises(CyclicRelationError):
                    height_map(r)
                continue
            h = height_map(r)
            assert all(h[x] < max(n, 1) for x in range(n))
            assert all(h[y] < h[x] for y, x in r.pairs)
            assert all(h[x] == longest_chain(r, x) for x in range(n))


def test_product_of_acyclic_is_acyclic_size_two():
    rels = list(all_relations(2))
    for r, s in itertools.product(rels, rels):
        if find_cycle(r) is None and find_cycle(s) is None:
            assert find_cycle(product_relation(r, s)) is None


def test_subrelation_of_acyclic_is_acyclic_exhaustive():
    rels = list(all_relations(3))
    acyclic = [s for s in rels if find_cycle(s) is None]
    for s in acyclic:
        for r in rels:
            if r.issubset(s):
                assert find_cycle(r) is None


# -- H-lists ---------------------------------------------------------------


def test_is_h_list_examples():
    assert is_h_list(make_relation(3), [])
    assert is_h_list(make_relation(3, [(1, 0), (2, 1), (2, 0)]), [0, 1, 2])
    assert not is_h_list(make_relation(3, [(1, 0), (2, 1)]), [0, 1, 2])
    with pytest.raises(RelationError):
        is_h_list(make_relation(2), [3])


def test_enumerate_h_lists_examples():
    assert set(enumerate_h_lists(make_relation(3), 3)) == {(), (0,), (1,), (2,)}
    # (1, 0) in t puts 1 after 0 in a chain
    assert set(enumerate_h_lists(make_relation(2, [(1, 0)]), 2)) == {(), (0,), (1,), (0, 1)}
    assert (0, 0, 0) in enumerate_h_lists(make_relation(1, [(0, 0)]), 3)


@given(relations(max_size=4), st.integers(0, 4))
def test_enumerate_h_lists_matches_filter(t, k):
    listed = enumerate_h_lists(t, k)
    brute = [
        l
        for n in range(k + 1)
        for l in itertools.product(range(t.size), repeat=n)
        if is_h_list(t, l)
    ]
    assert sorted(listed, key=lambda l: (len(l), l)) == listed
    assert set(listed) == set(brute) and len(listed) == len(brute)


@given(relations(min_size=1, max_size=5), st.integers(0, 6), st.integers(0, 10**6))
def test_random_h_chain_is_h_list(t, k, seed):
    chain = random_h_chain(t, k, random.Random(seed))
    assert len(chain) <= k and is_h_list(t, chain)


# -- certificates -----------------------------------------------------------


def test_well_founded_certificates():
    cert = is_well_founded_finite(strict_order(3))
    assert cert.verdict is Verdict.WELL_FOUNDED and cert.witness == {0: 0, 1: 1, 2: 2}
    cert = is_well_founded_finite(make_relation(2, [(0, 1), (1, 0)]))
    assert cert.verdict is Verdict.NOT_WELL_FOUNDED and cert.witness == [0, 1, 0]


def test_h_well_founded_examples():
    assert is_h_well_founded_finite(strict_order(4)).verdict is Verdict.H_WELL_FOUNDED
    cert = is_h_well_founded_finite(make_relation(2, [(1, 1)]))
    assert cert.verdict is Verdict.NOT_H_WELL_FOUNDED and cert.witness == 1


def test_h_well_founded_agrees_with_repetition_search():
    for n in range(4):
        for t in all_relations(n):
            repeated = any(
                len(set(l)) < len(l) for l in enumerate_h_lists(t, 4)
            )
            verdict = is_h_well_founded_finite(t).verdict
            assert (verdict is Verdict.NOT_H_WELL_FOUNDED) == repeated


def test_h_closure_examples():
    cert = check_h_closure([make_relation(3, [(1, 0)]), make_relation(3, [(2, 1)])])
    assert cert.verdict is Verdict.H_WELL_FOUNDED
    assert cert.details["components"] == ["h-well-founded"] * 2
    cert = check_h_closure([make_relation(1, [(0, 0)]), make_relation(1)])
    assert cert.verdict is Verdict.NOT_H_WELL_FOUNDED and cert.witness == 0
    single = make_relation(2, [(1, 0)])
    assert check_h_closure([single]).verdict is is_h_well_founded_finite(single).verdict
    with pytest.raises(RelationError):
        check_h_closure([make_relation(2), make_relation(3)])


def test_termination_examples():
    step = make_relation(3, [(1, 0), (2, 1)])
    cert = check_disjunctive_termination(step, [make_relation(3, [(1, 0), (2, 1), (2, 0)])])
    assert cert.verdict is Verdict.TERMINATING
    assert sorted(cert.witness) == [(1, 0, 0), (2, 0, 0), (2, 1, 0)]

    swap = make_relation(2, [(0, 1), (1, 0)])
    cert = check_disjunctive_termination(swap, [make_relation(2, [(0, 1)]), make_relation(2, [(1, 0)])])
    assert cert.verdict is Verdict.UNKNOWN and cert.witness_kind == "uncovered-pair"
    assert cert.witness == (0, 0)

    assert check_disjunctive_termination(make_relation(3), []).verdict is Verdict.TERMINATING


def test_termination_closure_loop_witness():
    swap = make_relation(2, [(0, 1), (1, 0)])
    cert = check_disjunctive_termination(swap, [transitive_closure(swap)])
    assert cert.verdict is Verdict.UNKNOWN
    assert cert.witness_kind == "component-loop"
    assert cert.witness == {"index": 0, "element": 0}


def test_termination_iff_closure_loop_free_exhaustive():
    for n in range(4):
        for step in all_relations(n):
            closure = transitive_closure(step)
            cert = check_disjunctive_termination(step, [closure])
            assert (cert.verdict is Verdict.TERMINATING) == (find_loop(closure) is None)


def test_termination_size_mismatch():
    with pytest.raises(RelationError):
        check_disjunctive_termination(make_relation(2), [make_relation(3)])


@given(relations(max_size=4))
def test_certificate_json_round_trip(r):
    for cert in (
        is_well_founded_finite(r),
        is_h_well_founded_finite(r),
        check_disjunctive_termination(r, [transitive_closure(r)]),
        check_disjunctive_termination(r, []),
    ):
        assert Certificate.from_json(cert.to_json()) == cert
        assert Certificate.from_json(cert.to_json()).to_json() == cert.to_json()


def test_certificate_kind_must_fit_verdict():
    with pytest.raises(ValueError):
        Certificate(Verdict.WELL_FOUNDED, "cycle", [0, 0])


# -- file format --------------------------------------------------------------


def test_parse_relation_format():
    text = "# comment\nsize 3\n\n1 0\n2 1\n# trailing\n"
    assert parse_relation(text) == make_relation(3, [(1, 0), (2, 1)])
    assert parse_relation(make_relation(3, [(2, 0)]).to_text()) == make_relation(3, [(2, 0)])


@pytest.mark.parametrize(
    "text, line",
    [
        ("size 2\n0 1\n0 x\n", 3),
        ("size 2\n0 5\n", 2),
        ("sise 2\n", 1),
        ("size 2\n0 1 1\n", 2),
    ],
)
def test_parse_relation_errors_name_line(text, line):
    with pytest.raises(RelationError, match=f"f.rel:{line}:"):
        parse_relation(text, "f.rel")


def test_parse_relation_missing_header():
    with pytest.raises(RelationError, match="missing"):
        parse_relation("# nothing\n")


# -- symmetry reduction --------------------------------------------------------


@pytest.mark.parametrize("swap", [False, True])
def test_orbit_representatives_partition_size_two(swap):
    masks = range(16)
    perms = list(itertools.permutations(range(2)))

    def orbit(m1, m2):
        pts = set()
        for p in perms:
            a = to_mask(relabel(from_mask(2, m1), p))
            b = to_mask(relabel(from_mask(2, m2), p))
            pts.add((a, b))
            if swap:
                pts.add((b, a))
        return pts

    reps = pair_orbit_representatives(2, swap=swap)
    assert sum(size for _, _, size in reps) == 16 * 16
    covered = set()
    for m1, m2, size in reps:
        o = orbit(m1, m2)
        assert len(o) == size and min(o) == (m1, m2)
        assert not covered & o
        covered |= o
    assert covered == set(itertools.product(masks, masks))


def test_orbit_count_size_three():
    # Burnside: (2**18 + 3 * 2**10 + 2 * 2**6) / 6, counting fixed pairs per permutation
    assert len(pair_orbit_representatives(3)) == 44224
    assert sum(size for _, _, size in pair_orbit_representatives(3)) == 4**9
