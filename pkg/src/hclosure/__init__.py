"""Finite combinatorics of H-closure: well-foundedness of finite unions,
colored lists, branch-set trees, simulations and the finite Ramsey bridge."""

from hclosure.relations import (
    Certificate,
    Relation,
    Verdict,
    check_disjunctive_termination,
    check_h_closure,
    find_cycle,
    find_loop,
    height_map,
    is_h_list,
    make_relation,
    product_relation,
    successor_structure,
    transitive_closure,
    union,
)
from hclosure.colored_lists import ColoredList, SplitResult, split_by_color
from hclosure.trees import BinaryTree, graft

__all__ = [
    "BinaryTree",
    "Certificate",
    "ColoredList",
    "Relation",
    "SplitResult",
    "Verdict",
    "check_disjunctive_termination",
    "check_h_closure",
    "find_cycle",
    "find_loop",
    "graft",
    "height_map",
    "is_h_list",
    "make_relation",
    "product_relation",
    "split_by_color",
    "successor_structure",
    "transitive_closure",
    "union",
]
