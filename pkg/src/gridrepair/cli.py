"""Command-line interface.

Exit codes: 0 on success, 2 on parse/validation errors, 3 on a violated
guarantee (which means an implementation bug, not a bad instance).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from gridrepair import algos, harness, oracle
from gridrepair.lp import format_model
from gridrepair.model import (
    ValidationError,
    build_precedence_graph,
    partition_islands,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_VIOLATION = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridrepair",
        description="Repair crew scheduling for damaged radial distribution feeders.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an instance file")
    p.add_argument("instance", type=Path)

    p = sub.add_parser("islands", help="print the island partition and precedence tree")
    p.add_argument("instance", type=Path)

    p = sub.add_parser("schedule", help="run a scheduling algorithm")
    p.add_argument("instance", type=Path)
    p.add_argument("--alg", choices=algos.ALGORITHMS, required=True)
    p.add_argument("--crews", type=int, default=None, help="override the instance crew count")
    p.add_argument("--dump-lp", type=Path, default=None, metavar="PATH",
                   help="write the final LP model and cut pool as text")
    p.add_argument("--within-island-order", choices=algos.WITHIN_ISLAND_ORDERS,
                   default="given", help="line order inside each island (convert only)")
    p.add_argument("--out", type=Path, default=None, help="write JSON here instead of stdout")

    p = sub.add_parser("oracle", help="brute-force optimum for desk-scale instances")
    p.add_argument("instance", type=Path)
    p.add_argument("--crews", type=int, default=None)
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("bench", help="benchmark random instances and write a CSV")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-lines", type=int, default=8)
    p.add_argument("--crews", type=str, default="2,3", help="comma-separated crew counts")
    p.add_argument("--switch-probability", type=float, default=0.4)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--jobs", type=int, default=1)
    return parser


def _emit(payload: dict | str, out: Path | None) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2)
    if out is None:
        print(text)
    else:
        out.write_text(text + ("\n" if not text.endswith("\n") else ""))


def _cmd_validate(args) -> int:
    instance = harness.load_instance(args.instance)
    islands = partition_islands(instance)
    print(
        f"OK: {len(instance.nodes)} nodes, {len(instance.lines)} lines, "
        f"{len(islands.islands)} islands, root {instance.root!r}"
    )
    return EXIT_OK


def _cmd_islands(args) -> int:
    instance = harness.load_instance(args.instance)
    islands = partition_islands(instance)
    precedence = build_precedence_graph(instance, islands)
    payload = {
        "islands": [
            {
                "id": isl.id,
                "lines": list(isl.line_ids),
                "nodes": list(isl.node_ids),
                "weight": isl.weight,
                "processing": isl.processing,
            }
            for isl in islands.islands
        ],
        "precedence": {
            "root": precedence.root,
            "edges": [list(edge) for edge in precedence.edges()],
        },
    }
    _emit(payload, None)
    return EXIT_OK


def _cmd_schedule(args) -> int:
    instance = harness.load_instance(args.instance)
    if args.alg == algos.LP_LIST:
        result = algos.lp_list_schedule(instance, crews=args.crews)
        if args.dump_lp is not None:
            args.dump_lp.write_text(format_model(result.lp.model))
    elif args.alg == algos.CONVERT:
        result = algos.convert_single_to_m(
            instance, crews=args.crews, within_island_order=args.within_island_order
        )
    else:
        result = algos.single_optimal(instance)
    _emit(harness.result_to_json(result), args.out)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    instance = harness.load_instance(args.instance)
    m = instance.crews if args.crews is None else args.crews
    result = oracle.brute_force_optimal(instance, m)
    _emit(harness.oracle_to_json(result, m), args.out)
    return EXIT_OK


def _cmd_bench(args) -> int:
    crews = tuple(int(tok) for tok in args.crews.split(",") if tok)
    params = harness.GenParams(
        seed=args.seed,
        nodes=(2, args.max_lines + 1),
        switch_probability=args.switch_probability,
        crews=crews,
    )
    rows = harness.run_bench(params, args.count, out_path=args.out, jobs=args.jobs)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "validate": _cmd_validate,
        "islands": _cmd_islands,
        "schedule": _cmd_schedule,
        "oracle": _cmd_oracle,
        "bench": _cmd_bench,
    }
    try:
        return handlers[args.command](args)
    except (ValidationError, harness.ParseError, harness.SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (oracle.TooLarge, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (oracle.BoundViolated, harness.InvariantViolation) as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
