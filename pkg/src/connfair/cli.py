"""Command-line front end.

Subcommands:

- solve:      run a solver on an instance and audit the result.
- check:      audit a given allocation (PO, EF1, MMS, alpha level).
- exists:     exhaustive existence scan for PO / EF1 / MMS combinations.
- mms:        per-agent maximin shares (polynomial on paths, else brute force).
- enumerate:  count (or list) all connected allocations.
- x3c:        exact-3-cover gadgets: gen, solve, random.
- vc:         vertex cover star gadget: gen-star, solve.

Exit codes: 0 success (including "NONE" answers), 2 input or precondition
errors, 3 enumeration budget exceeded.  Output is deterministic: identical
inputs and flags produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .algorithms import (
    mms_value_path,
    moving_knife_po_mms,
    po_path_additive,
    po_star_additive,
)
from .enumeration import Budget, build_allocation, iter_partition_assignments
from .errors import (
    BudgetExceededError,
    InternalCheckError,
    PreconditionError,
    ValidationError,
)
from .model import (
    MmsProfile,
    is_additive_like,
    load_allocation,
    load_instance,
    rational_to_json,
)
from .oracle import (
    fairness_report,
    max_welfare_allocation,
    mms_profile_bruteforce,
    scan_for_allocation,
)
from .reductions import (
    GADGET_BUILDERS,
    gen_vc_star_gadget,
    random_x3c,
    solve_vc_bruteforce,
    solve_vc_via_po,
    solve_x3c_bruteforce,
    solve_x3c_via_po,
    vc_from_json_dict,
    x3c_from_json_dict,
)


def _budget(args: argparse.Namespace) -> Budget:
    return Budget(max_items=args.budget_items, max_agents=args.budget_agents)


def _json_safe(obj):
    """Recursively convert Fractions to the JSON rational encoding."""
    if isinstance(obj, Fraction):
        return rational_to_json(obj)
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _flatten(prefix: str, obj, out: list) -> None:
    if isinstance(obj, dict):
        for key in sorted(obj):
            _flatten(f"{prefix}.{key}" if prefix else str(key), obj[key], out)
    elif obj is None:
        out.append((prefix, "NONE"))
    else:
        out.append((prefix, json.dumps(obj, sort_keys=True)))


def _emit(payload: dict, fmt: str) -> None:
    payload = _json_safe(payload)
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
        return
    lines: list = []
    _flatten("", payload, lines)
    for key, value in lines:
        print(f"{key} = {value}")


def _load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc})") from exc


def cmd_solve(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    budget = _budget(args)
    trace: list | None = [] if args.trace else None
    if args.algo == "path-po":
        allocation = po_path_additive(instance, trace=trace)
    elif args.algo == "star-po":
        allocation = po_star_additive(instance, trace=trace)
    elif args.algo == "moving-knife":
        allocation = moving_knife_po_mms(instance, force=args.force, trace=trace)
    else:
        allocation = max_welfare_allocation(instance, budget)
    payload: dict = {"algorithm": args.algo, "allocation": allocation.to_json_dict()}
    if trace is not None:
        payload["trace"] = trace
    try:
        payload["report"] = fairness_report(instance, allocation, budget).to_json_dict()
    except BudgetExceededError:
        payload["report"] = None
        payload["report_skipped"] = "budget"
    _emit(payload, args.format)
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    allocation = load_allocation(args.allocation, instance)
    report = fairness_report(instance, allocation, _budget(args))
    payload = {"allocation": allocation.to_json_dict(), "report": report.to_json_dict()}
    _emit(payload, args.format)
    return 0


def cmd_exists(args: argparse.Namespace) -> int:
    if not (args.po or args.ef1 or args.mms):
        raise PreconditionError("pass at least one of --po, --ef1, --mms")
    instance = load_instance(args.instance)
    scan = scan_for_allocation(
        instance,
        require_po=args.po,
        require_ef1=args.ef1,
        require_mms=args.mms,
        budget=_budget(args),
    )
    _emit(scan.to_json_dict(), args.format)
    return 0


def cmd_mms(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    budget = _budget(args)
    graph = instance.graph
    poly_profile: MmsProfile | None = None
    if graph.is_path() and all(is_additive_like(v) for v in instance.valuations):
        values = tuple(
            mms_value_path(graph, v, instance.num_agents) for v in instance.valuations
        )
        poly_profile = MmsProfile(
            values=values,
            graph=graph,
            method="poly",
            partition_set_empty=instance.num_agents > graph.num_items,
        )
    brute_profile: MmsProfile | None = None
    if poly_profile is None:
        brute_profile = mms_profile_bruteforce(instance, budget)
    else:
        try:
            brute_profile = mms_profile_bruteforce(instance, budget)
        except BudgetExceededError:
            brute_profile = None
    if poly_profile is not None and brute_profile is not None:
        if poly_profile.values != brute_profile.values:
            raise InternalCheckError(
                "path maximin shares disagree with brute force: %r vs %r"
                % (poly_profile.values, brute_profile.values)
            )
        method = "poly+brute"
        profile = poly_profile
    elif poly_profile is not None:
        method = "poly"
        profile = poly_profile
    else:
        method = "brute"
        assert brute_profile is not None
        profile = brute_profile
    payload = profile.to_json_dict()
    payload["method"] = method
    _emit(payload, args.format)
    return 0


def cmd_enumerate(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    budget = _budget(args)
    total = 0
    by_blocks: dict[str, int] = {}
    listed = []
    for blocks, chosen in iter_partition_assignments(
        instance.graph, instance.num_agents, budget
    ):
        total += 1
        key = str(len(blocks))
        by_blocks[key] = by_blocks.get(key, 0) + 1
        if args.list:
            allocation = build_allocation(instance.num_agents, blocks, chosen)
            listed.append(allocation.to_json_dict()["bundles"])
    payload: dict = {
        "num_items": instance.num_items,
        "num_agents": instance.num_agents,
        "total": total,
        "by_nonempty_blocks": by_blocks,
    }
    if args.list:
        payload["allocations"] = listed
    _emit(payload, args.format)
    return 0


def cmd_x3c_gen(args: argparse.Namespace) -> int:
    x3c = x3c_from_json_dict(_load_json(args.x3c))
    gadget = GADGET_BUILDERS[args.kind](x3c)
    data = gadget.to_json_dict()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(_json_safe(data), fh, indent=2, sort_keys=True)
            fh.write("\n")
        return 0
    _emit(data, args.format)
    return 0


def cmd_x3c_solve(args: argparse.Namespace) -> int:
    x3c = x3c_from_json_dict(_load_json(args.x3c))
    if args.via == "brute":
        cover = solve_x3c_bruteforce(x3c)
        payload: dict = {"via": "brute"}
    else:
        cover = solve_x3c_via_po(x3c, kind=args.kind, budget=_budget(args))
        payload = {"via": "po", "kind": args.kind}
    payload["solvable"] = cover is not None
    payload["cover"] = None if cover is None else list(cover)
    _emit(payload, args.format)
    return 0


def cmd_x3c_random(args: argparse.Namespace) -> int:
    rng = random.Random(args.seed)
    x3c = random_x3c(rng, args.elements, args.sets)
    _emit(x3c.to_json_dict(), args.format)
    return 0


def cmd_vc_gen_star(args: argparse.Namespace) -> int:
    vc = vc_from_json_dict(_load_json(args.vc))
    gadget = gen_vc_star_gadget(vc)
    data = gadget.to_json_dict()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(_json_safe(data), fh, indent=2, sort_keys=True)
            fh.write("\n")
        return 0
    _emit(data, args.format)
    return 0


def cmd_vc_solve(args: argparse.Namespace) -> int:
    vc = vc_from_json_dict(_load_json(args.vc))
    if args.via == "brute":
        cover = solve_vc_bruteforce(vc)
        payload: dict = {"via": "brute"}
    else:
        cover = solve_vc_via_po(vc, budget=_budget(args))
        payload = {"via": "po"}
    payload["solvable"] = cover is not None
    payload["cover"] = None if cover is None else list(cover)
    _emit(payload, args.format)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-items", type=int, default=None, metavar="N",
                        help="override the enumeration item limit")
    common.add_argument("--budget-agents", type=int, default=None, metavar="N",
                        help="override the enumeration agent limit")
    common.add_argument("--format", choices=("json", "table"), default="json",
                        help="output format (default json)")
    common.add_argument("--trace", action="store_true",
                        help="include a per-step trace where supported")
    common.add_argument("--seed", type=int, default=0,
                        help="random seed for generators (default 0)")

    parser = argparse.ArgumentParser(
        prog="connfair",
        description="Fair division of indivisible items into connected bundles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="run a solver on an instance")
    p.add_argument("instance", help="instance JSON path")
    p.add_argument("--algo", required=True,
                   choices=("path-po", "star-po", "moving-knife", "brute-welfare"))
    p.add_argument("--force", action="store_true",
                   help="run moving-knife even on nested interval structures")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", parents=[common], help="audit an allocation")
    p.add_argument("instance", help="instance JSON path")
    p.add_argument("allocation", help="allocation JSON path")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("exists", parents=[common],
                       help="scan for an allocation with the required properties")
    p.add_argument("instance", help="instance JSON path")
    p.add_argument("--po", action="store_true", help="require Pareto optimality")
    p.add_argument("--ef1", action="store_true", help="require EF1")
    p.add_argument("--mms", action="store_true", help="require the MMS guarantee")
    p.set_defaults(func=cmd_exists)

    p = sub.add_parser("mms", parents=[common], help="per-agent maximin shares")
    p.add_argument("instance", help="instance JSON path")
    p.set_defaults(func=cmd_mms)

    p = sub.add_parser("enumerate", parents=[common],
                       help="count or list all connected allocations")
    p.add_argument("instance", help="instance JSON path")
    p.add_argument("--list", action="store_true", help="include every allocation")
    p.set_defaults(func=cmd_enumerate)

    x3c = sub.add_parser("x3c", help="exact-3-cover reductions")
    x3c_sub = x3c.add_subparsers(dest="x3c_command", required=True)

    p = x3c_sub.add_parser("gen", parents=[common], help="build a gadget instance")
    p.add_argument("x3c", help="exact cover JSON path")
    p.add_argument("--kind", required=True, choices=sorted(GADGET_BUILDERS))
    p.add_argument("--out", default=None, help="write the gadget JSON here")
    p.set_defaults(func=cmd_x3c_gen)

    p = x3c_sub.add_parser("solve", parents=[common], help="decide exact 3-cover")
    p.add_argument("x3c", help="exact cover JSON path")
    p.add_argument("--via", required=True, choices=("po", "brute"))
    p.add_argument("--kind", default="forest", choices=sorted(GADGET_BUILDERS))
    p.set_defaults(func=cmd_x3c_solve)

    p = x3c_sub.add_parser("random", parents=[common],
                           help="generate a random exact cover instance")
    p.add_argument("--elements", type=int, required=True)
    p.add_argument("--sets", type=int, required=True)
    p.set_defaults(func=cmd_x3c_random)

    vc = sub.add_parser("vc", help="vertex cover reduction")
    vc_sub = vc.add_subparsers(dest="vc_command", required=True)

    p = vc_sub.add_parser("gen-star", parents=[common], help="build the star gadget")
    p.add_argument("vc", help="vertex cover JSON path")
    p.add_argument("--out", default=None, help="write the gadget JSON here")
    p.set_defaults(func=cmd_vc_gen_star)

    p = vc_sub.add_parser("solve", parents=[common], help="decide vertex cover")
    p.add_argument("vc", help="vertex cover JSON path")
    p.add_argument("--via", required=True, choices=("po", "brute"))
    p.set_defaults(func=cmd_vc_solve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (ValidationError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InternalCheckError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
