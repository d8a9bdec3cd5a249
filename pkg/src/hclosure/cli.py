"""Command-line front end.

Exit status: 0 for an affirmative verdict, 1 for a negative verdict (the
report carries a re-checked witness), 2 for unusable input, 3 when a witness
fails its own re-check.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from typing import Any, Callable, Sequence

from hclosure.ramsey import (
    ColoringError,
    PairColoring,
    homogeneous_subset,
    homogeneous_via_star,
    is_homogeneous,
    read_coloring,
)
from hclosure.relations import (
    Certificate,
    CyclicRelationError,
    InconsistencyError,
    Relation,
    RelationError,
    check_disjunctive_termination,
    check_h_closure,
    height_map,
    is_h_well_founded_finite,
    is_well_founded_finite,
    random_relation,
    read_relation,
    transitive_closure,
    union,
)
from hclosure.simulation import (
    LemmaReport,
    postcondition_failure,
    verify_covering_simulation,
    verify_pairing_simulation,
)
from hclosure.trees import NIL, BinaryTree, graft

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(Exception):
    """Bad command-line input; the message is shown to the user."""


# -- witness re-checks -------------------------------------------------------


def _recheck_cycle(r: Relation, cycle: Sequence[int]) -> None:
    if len(cycle) < 2 or cycle[0] != cycle[-1]:
        raise InconsistencyError(f"cycle witness {cycle} is not closed")
    for a, b in zip(cycle, cycle[1:]):
        if (a, b) not in r:
            raise InconsistencyError(f"cycle step ({a}, {b}) is not in the relation")


def _recheck_heights(r: Relation, heights: dict[int, int]) -> None:
    for y, x in r.pairs:
        if not heights[y] < heights[x]:
            raise InconsistencyError(f"heights do not decrease along ({y}, {x})")


def _recheck_loop(r: Relation, x: int) -> None:
    if (x, x) not in r:
        raise InconsistencyError(f"loop witness {x} is not a loop")


def _recheck_certificate(r: Relation, cert: Certificate) -> None:
    if cert.witness_kind == "cycle":
        _recheck_cycle(r, cert.witness)
    elif cert.witness_kind == "heights":
        _recheck_heights(r, cert.witness)
    elif cert.witness_kind == "loop":
        _recheck_loop(r, cert.witness)


def _recheck_termination(
    step: Relation, ts: Sequence[Relation], cert: Certificate
) -> None:
    closure = transitive_closure(step)
    if cert.witness_kind == "uncovered-pair":
        pair = tuple(cert.witness)
        if pair not in closure or any(pair in t for t in ts):
            raise InconsistencyError(f"pair {pair} is not an uncovered closure pair")
    elif cert.witness_kind == "component-loop":
        _recheck_loop(ts[cert.witness["index"]], cert.witness["element"])
    elif cert.witness_kind == "cover":
        covered = set()
        for a, b, i in cert.witness:
            if (a, b) not in ts[i]:
                raise InconsistencyError(f"({a}, {b}) is not in relation {i}")
            covered.add((a, b))
        if covered != set(closure.pairs):
            raise InconsistencyError("cover does not match the closure")
        for i, t in enumerate(ts):
            if any((x, x) in t for x in range(t.size)):
                raise InconsistencyError(f"relation {i} has a loop")


# -- reporting ----------------------------------------------------------------


def _emit(args: argparse.Namespace, payload: dict[str, Any], text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _certificate_text(cert: Certificate) -> str:
    lines = [f"verdict: {cert.verdict.value}"]
    if cert.witness_kind is not None:
        lines.append(f"witness ({cert.witness_kind}): {_plain(cert.to_json()['witness'])}")
    for key, value in cert.details.items():
        lines.append(f"{key}: {_plain(value)}")
    return "\n".join(lines)


def _plain(value: Any) -> str:
    return json.dumps(value, sort_keys=True)


def _finish_certificate(args: argparse.Namespace, command: str, cert: Certificate) -> int:
    _emit(args, {"command": command, **cert.to_json()}, _certificate_text(cert))
    return EXIT_OK if cert.verdict.affirmative else EXIT_NEGATIVE


# -- commands -----------------------------------------------------------------


def cmd_check_wf(args: argparse.Namespace) -> int:
    r = read_relation(args.relation)
    cert = is_well_founded_finite(r)
    _recheck_certificate(r, cert)
    return _finish_certificate(args, "check-wf", cert)


def cmd_check_hwf(args: argparse.Namespace) -> int:
    r = read_relation(args.relation)
    cert = is_h_well_founded_finite(r)
    _recheck_certificate(r, cert)
    return _finish_certificate(args, "check-hwf", cert)


def cmd_heights(args: argparse.Namespace) -> int:
    r = read_relation(args.relation)
    try:
        heights = height_map(r)
    except CyclicRelationError as exc:
        _recheck_cycle(r, exc.cycle)
        _emit(
            args,
            {"command": "heights", "error": "cyclic", "cycle": exc.cycle},
            f"no heights: relation is cyclic\ncycle: {exc.cycle}",
        )
        return EXIT_NEGATIVE
    _recheck_heights(r, heights)
    _emit(
        args,
        {"command": "heights", "heights": {str(k): v for k, v in heights.items()}},
        "\n".join(f"{x}: {h}" for x, h in heights.items()),
    )
    return EXIT_OK


def cmd_h_closure(args: argparse.Namespace) -> int:
    ts = [read_relation(p) for p in args.relations]
    _shared_size(ts)
    cert = check_h_closure(ts)
    joined = union(ts)
    _recheck_certificate(joined, cert)
    return _finish_certificate(args, "h-closure", cert)


def cmd_termination(args: argparse.Namespace) -> int:
    step = read_relation(args.step)
    ts = [read_relation(p) for p in args.invariants]
    _shared_size([step, *ts])
    cert = check_disjunctive_termination(step, ts)
    _recheck_termination(step, ts, cert)
    return _finish_certificate(args, "termination", cert)


def cmd_graft_demo(args: argparse.Namespace) -> int:
    t1, t2 = read_relation(args.t1), read_relation(args.t2)
    _shared_size([t1, t2])
    chain = list(args.chain)
    joined = union([t1, t2])
    for x in chain:
        if not 0 <= x < joined.size:
            raise InputError(f"chain element {x} outside [0, {joined.size})")
    for j, i in ((j, i) for j in range(len(chain)) for i in range(j)):
        if (chain[j], chain[i]) not in joined:
            raise InputError(
                f"chain is not decreasing transitive for t1 | t2: position {j} "
                f"({chain[j]}) is not below position {i} ({chain[i]})"
            )
    tree: BinaryTree = NIL
    steps = [{"step": 0, "added": None, "tree": tree.to_json()}]
    lines = [f"step 0: {tree}"]
    for n, y in enumerate(chain, start=1):
        grown = graft(t1, t2, tree, chain[: n - 1], y)
        reason = postcondition_failure(t1, t2, tree, grown, chain[:n])
        if reason is not None:
            raise InconsistencyError(f"graft step {n}: {reason}")
        (new,) = grown.branches - tree.branches
        tree = grown
        steps.append({"step": n, "added": str(new), "tree": tree.to_json()})
        lines.append(f"step {n}: add {new} -> {tree}")
    _emit(args, {"command": "graft-demo", "chain": chain, "steps": steps}, "\n".join(lines))
    return EXIT_OK


def _lemma_command(
    name: str, verify: Callable[[Relation, Relation, argparse.Namespace], LemmaReport]
) -> Callable[[argparse.Namespace], int]:
    def run(args: argparse.Namespace) -> int:
        if args.random is not None:
            rng = random.Random(args.seed)
            instances = []
            for _ in range(args.random):
                n = rng.randint(1, args.size)
                density = rng.random()
                instances.append(
                    (random_relation(n, rng, density), random_relation(n, rng, density))
                )
        else:
            if args.t1 is None or args.t2 is None:
                raise InputError("give two relation files or --random N")
            t1, t2 = read_relation(args.t1), read_relation(args.t2)
            _shared_size([t1, t2])
            instances = [(t1, t2)]
        reports = []
        for t1, t2 in instances:
            report = verify(t1, t2, args)
            reports.append(report)
            if not report.passed:
                break
        failed = [r for r in reports if not r.passed]
        if args.json:
            payload: dict[str, Any] = {"command": name, "checked": len(reports)}
            if len(instances) == 1:
                payload.update(reports[0].to_json())
            else:
                payload["pass"] = not failed
                if failed:
                    payload["failure"] = failed[0].to_json()
            print(json.dumps(payload, indent=2, sort_keys=True))
        else:
            status = "FAIL" if failed else "pass"
            print(f"{reports[0].lemma}: {status} ({len(reports)} instance(s), bound {_plain(reports[0].bound)})")
            if failed:
                print(f"instance: {_plain(failed[0].instance)}")
                print(f"counterexample: {_plain(failed[0].counterexample)}")
        return EXIT_NEGATIVE if failed else EXIT_OK

    return run


cmd_verify_pairing = _lemma_command(
    "verify-pairing",
    lambda t1, t2, args: verify_pairing_simulation(
        t1, t2, args.max_len, transitive=args.transitive
    ),
)
cmd_verify_covering = _lemma_command(
    "verify-covering",
    lambda t1, t2, args: verify_covering_simulation(
        t1, t2, args.max_len, max_branches=args.max_branches, every_tree=args.every_tree
    ),
)


def cmd_ramsey(args: argparse.Namespace) -> int:
    col = read_coloring(args.coloring)
    if args.k < 2:
        raise InputError("-k must be at least 2")
    found = homogeneous_subset(col, args.k)
    via_chain = homogeneous_via_star(col, args.k) if args.k <= col.n else None
    if (found is None) != (via_chain is None):
        raise InconsistencyError("direct search and chain extraction disagree")
    if found is not None:
        vertices, shade = found
        if is_homogeneous(col, vertices) != shade:
            raise InconsistencyError(f"{vertices} is not homogeneous")
        if is_homogeneous(col, via_chain[0]) != via_chain[1]:
            raise InconsistencyError(f"{via_chain[0]} is not homogeneous")
        _emit(
            args,
            {
                "command": "ramsey",
                "verdict": "homogeneous",
                "k": args.k,
                "vertices": list(vertices),
                "color": shade,
                "via_chain": {"vertices": list(via_chain[0]), "color": via_chain[1]},
            },
            f"homogeneous {args.k}-set {list(vertices)} in color {shade}\n"
            f"via chain extraction: {list(via_chain[0])} in color {via_chain[1]}",
        )
        return EXIT_OK
    witness = _split_pairs(col, args.k)
    _emit(
        args,
        {"command": "ramsey", "verdict": "none", "k": args.k, "witness": witness},
        f"no homogeneous {args.k}-set; each {args.k}-set has two pairs of different colors"
        + "".join(f"\n  {w['subset']}: {w['pairs']}" for w in witness),
    )
    return EXIT_NEGATIVE


def _split_pairs(col: PairColoring, k: int) -> list[dict[str, Any]]:
    """For every k-subset, one pair of each color, re-checked."""
    out = []
    for subset in itertools.combinations(range(col.n), k):
        by_color: dict[int, tuple[int, int]] = {}
        for i, j in itertools.combinations(subset, 2):
            by_color.setdefault(col.color(i, j), (i, j))
        if len(by_color) != 2:
            raise InconsistencyError(f"{subset} is homogeneous after all")
        out.append({"subset": list(subset), "pairs": [list(by_color[1]), list(by_color[2])]})
    return out


def _shared_size(rs: Sequence[Relation]) -> None:
    sizes = sorted({r.size for r in rs})
    if len(sizes) > 1:
        raise InputError(f"relations must share one universe size, got {sizes}")


# -- argument parsing -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--max-len", type=int, default=4, metavar="N")
    common.add_argument("--max-branches", type=int, default=8, metavar="N")
    common.add_argument("-k", type=int, default=3, metavar="N")
    common.add_argument("--seed", type=int, default=0, metavar="N")

    parser = argparse.ArgumentParser(
        prog="hclosure",
        description="Finite well-foundedness checks, tree grafting and simulation sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, func: Callable, help: str, aliases: Sequence[str] = ()) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help, aliases=list(aliases))
        p.set_defaults(func=func)
        return p

    add("check-wf", cmd_check_wf, "decide well-foundedness (no cycle)").add_argument("relation")
    add("check-hwf", cmd_check_hwf, "decide H-well-foundedness (no loop)").add_argument("relation")
    add("heights", cmd_heights, "longest descending chain from each element").add_argument("relation")
    add("h-closure", cmd_h_closure, "compare loop-freeness of relations and their union").add_argument(
        "relations", nargs="+"
    )
    p = add("termination", cmd_termination, "disjunctive termination check")
    p.add_argument("step")
    p.add_argument("invariants", nargs="*")
    p = add("graft-demo", cmd_graft_demo, "graft a chain into a tree one element at a time")
    p.add_argument("t1")
    p.add_argument("t2")
    p.add_argument("chain", nargs="*", type=int)
    for name, func, help, alias in (
        ("verify-pairing", cmd_verify_pairing, "check the color-split simulation", "verify-lemma31"),
        ("verify-covering", cmd_verify_covering, "check the grafting simulation", "verify-lemma32"),
    ):
        p = add(name, func, help, aliases=[alias])
        p.add_argument("t1", nargs="?")
        p.add_argument("t2", nargs="?")
        p.add_argument("--random", type=int, metavar="N", help="check N random instances instead")
        p.add_argument("--size", type=int, default=4, metavar="N", help="largest random universe")
        if func is cmd_verify_pairing:
            p.add_argument(
                "--transitive", action="store_true",
                help="use proper extension and closed component orders",
            )
        else:
            p.add_argument(
                "--every-tree", action="store_true",
                help="try every covering tree up to --max-branches nodes",
            )
    add("ramsey", cmd_ramsey, "find a homogeneous k-set in a 2-coloring").add_argument("coloring")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (RelationError, ColoringError, InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
