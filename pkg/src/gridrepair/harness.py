"""Instance I/O, seeded random generation, and the benchmark runner.

Instance files are strict JSON: unknown fields are rejected so typos in
hand-written fixtures fail loudly.  Generated instances use integer
repair times and weights, which keeps every harm exactly representable;
only LP columns carry float noise.
"""

from __future__ import annotations

import csv
import io
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from gridrepair import algos, oracle
from gridrepair import schedule as sched
from gridrepair.lp import solve_relaxation
from gridrepair.model import (
    NetworkInstance,
    build_precedence_graph,
    partition_islands,
    validate,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class SchemaError(ValueError):
    def __init__(self, field: str, message: str | None = None):
        super().__init__(message or f"unexpected or invalid field {field!r}")
        self.field = field


class InvariantViolation(AssertionError):
    """A tested guarantee failed during a bench run."""


_INSTANCE_FIELDS = {"root", "crews", "nodes", "lines"}
_NODE_FIELDS = {"id", "weight"}
_LINE_FIELDS = {"id", "from", "to", "repair_time", "switch"}


def instance_from_json(obj: dict) -> NetworkInstance:
    """Schema-check a parsed JSON object and validate it into an instance."""
    if not isinstance(obj, dict):
        raise SchemaError("<root>", "instance must be a JSON object")
    for key in obj:
        if key not in _INSTANCE_FIELDS:
            raise SchemaError(key)
    for key in _INSTANCE_FIELDS:
        if key not in obj:
            raise SchemaError(key, f"missing required field {key!r}")
    if not isinstance(obj["nodes"], list) or not isinstance(obj["lines"], list):
        raise SchemaError("nodes", "nodes and lines must be arrays")
    for entry in obj["nodes"]:
        if not isinstance(entry, dict):
            raise SchemaError("nodes", "node entries must be objects")
        for key in entry:
            if key not in _NODE_FIELDS:
                raise SchemaError(key)
        for key in _NODE_FIELDS:
            if key not in entry:
                raise SchemaError(key, f"node missing field {key!r}")
        if not isinstance(entry["weight"], (int, float)) or isinstance(
            entry["weight"], bool
        ):
            raise SchemaError("weight", "node weight must be a number")
    for entry in obj["lines"]:
        if not isinstance(entry, dict):
            raise SchemaError("lines", "line entries must be objects")
        for key in entry:
            if key not in _LINE_FIELDS:
                raise SchemaError(key)
        for key in _LINE_FIELDS:
            if key not in entry:
                raise SchemaError(key, f"line missing field {key!r}")
        if not isinstance(entry["repair_time"], (int, float)) or isinstance(
            entry["repair_time"], bool
        ):
            raise SchemaError("repair_time", "repair time must be a number")
        if not isinstance(entry["switch"], bool):
            raise SchemaError("switch", "switch flag must be a boolean")
    if not isinstance(obj["crews"], int) or isinstance(obj["crews"], bool):
        raise SchemaError("crews", "crews must be an integer")
    return validate(obj)


def instance_to_json(instance: NetworkInstance) -> dict:
    return {
        "root": instance.root,
        "crews": instance.crews,
        "nodes": [{"id": n.id, "weight": n.weight} for n in instance.nodes],
        "lines": [
            {
                "id": ln.id,
                "from": ln.upstream,
                "to": ln.downstream,
                "repair_time": ln.repair_time,
                "switch": ln.is_switch,
            }
            for ln in instance.lines
        ],
    }


def load_instance(path: str | Path) -> NetworkInstance:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    return instance_from_json(obj)


def save_instance(path: str | Path, instance: NetworkInstance) -> None:
    Path(path).write_text(json.dumps(instance_to_json(instance), indent=2) + "\n")


def result_to_json(result: algos.AlgoResult) -> dict:
    return {
        "algorithm": result.algorithm,
        "crews": result.crews,
        "assignments": [
            [
                {"line": a.line, "start": a.start, "completion": a.completion}
                for a in crew
            ]
            for crew in result.schedule.crews
        ],
        "energization": {iid: result.energization[iid] for iid in sorted(result.energization)},
        "harm": result.report.harm,
    }


def oracle_to_json(result: oracle.OracleResult, crews: int) -> dict:
    return {
        "crews": crews,
        "optimum": result.harm,
        "priority_list": list(result.priority_list),
        "enumerated": result.enumerated,
    }


def rows_to_json(rows: "list[BenchRow]") -> list[dict]:
    """Machine-readable mirror of the CSV: same columns, same order."""
    return [
        {col: getattr(row, col) for col in BENCH_COLUMNS} for row in rows
    ]


def save_result(path: str | Path, payload) -> None:
    """Serialize an algorithm result, bench rows, or a plain payload to JSON."""
    if isinstance(payload, algos.AlgoResult):
        obj = result_to_json(payload)
    elif isinstance(payload, list) and payload and isinstance(payload[0], BenchRow):
        obj = rows_to_json(payload)
    else:
        obj = payload
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")


@dataclass(frozen=True)
class GenParams:
    """Knobs for the seeded instance generator; same seed, same bytes."""

    seed: int
    nodes: tuple[int, int] = (2, 9)
    switch_probability: float = 0.4
    repair_time: tuple[int, int] = (0, 10)
    weight: tuple[int, int] = (0, 10)
    crews: tuple[int, ...] = (2, 3)


def generate_random(params: GenParams) -> NetworkInstance:
    """Uniform random tree by random-parent attachment; always validates.

    Node weights are redrawn until at least one non-root weight is
    positive, so the result is a well-formed instance by construction.
    """
    rng = random.Random(params.seed)
    lo, hi = params.nodes
    count = rng.randint(lo, hi)
    width = len(str(count - 1)) if count > 1 else 1
    node_ids = [f"n{k:0{width}d}" for k in range(count)]
    while True:
        weights = [rng.randint(*params.weight) for _ in range(count)]
        if count == 1 or any(w > 0 for w in weights[1:]):
            break
    lines = []
    for k in range(1, count):
        parent = rng.randrange(k)
        lines.append(
            {
                "id": f"l{k:0{width}d}",
                "from": node_ids[parent],
                "to": node_ids[k],
                "repair_time": rng.randint(*params.repair_time),
                "switch": rng.random() < params.switch_probability,
            }
        )
    raw = {
        "root": node_ids[0],
        "crews": params.crews[0] if params.crews else 1,
        "nodes": [
            {"id": nid, "weight": w} for nid, w in zip(node_ids, weights)
        ],
        "lines": lines,
    }
    return validate(raw)


def generate_corpus(
    params: GenParams, count: int, max_islands: int | None = None
) -> list[tuple[str, NetworkInstance]]:
    """Deterministic stream of generated instances, optionally filtered.

    Seeds advance one by one from params.seed; instances with more
    islands than `max_islands` are skipped, not redrawn, so the corpus is
    reproducible from the base seed alone.
    """
    out: list[tuple[str, NetworkInstance]] = []
    trial = 0
    while len(out) < count:
        candidate = replace(params, seed=params.seed + trial)
        trial += 1
        instance = generate_random(candidate)
        if max_islands is not None:
            if len(partition_islands(instance).islands) > max_islands:
                continue
        out.append((f"gen-{candidate.seed}", instance))
    return out


BENCH_COLUMNS = [
    "instance",
    "lines",
    "islands",
    "crews",
    "h_lp",
    "h_alg1",
    "h_alg2",
    "h_single",
    "h_infinite",
    "h_opt",
    "ratio_alg1",
    "ratio_alg2",
    "ratio_lp",
    "t_lp",
    "t_alg1",
    "t_alg2",
    "t_oracle",
]

TIMING_COLUMNS = ("t_lp", "t_alg1", "t_alg2", "t_oracle")


@dataclass(frozen=True)
class BenchRow:
    instance: str
    lines: int
    islands: int
    crews: int
    h_lp: float
    h_alg1: float
    h_alg2: float
    h_single: float
    h_infinite: float
    h_opt: float | None
    ratio_alg1: float | None
    ratio_alg2: float | None
    ratio_lp: float | None
    t_lp: float
    t_alg1: float
    t_alg2: float
    t_oracle: float


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.10g}"


def rows_to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                row.instance,
                row.lines,
                row.islands,
                row.crews,
                _fmt(row.h_lp),
                _fmt(row.h_alg1),
                _fmt(row.h_alg2),
                _fmt(row.h_single),
                _fmt(row.h_infinite),
                _fmt(row.h_opt),
                _fmt(row.ratio_alg1),
                _fmt(row.ratio_alg2),
                _fmt(row.ratio_lp),
                _fmt(row.t_lp),
                _fmt(row.t_alg1),
                _fmt(row.t_alg2),
                _fmt(row.t_oracle),
            ]
        )
    return buf.getvalue()


def bench_instance(name: str, instance: NetworkInstance, m: int) -> BenchRow:
    """Run every algorithm on one instance and certify every guarantee.

    Raises InvariantViolation with the instance attached if any tested
    bound fails; the caller serializes the instance for replay.
    """
    islands = partition_islands(instance)
    precedence = build_precedence_graph(instance, islands)
    repair = instance.repair_times()

    t0 = time.perf_counter()
    relaxation = solve_relaxation(instance, islands, precedence, crews=m)
    t_lp = time.perf_counter() - t0

    t0 = time.perf_counter()
    alg1 = algos.lp_list_schedule(instance, crews=m, solution=relaxation)
    t_alg1 = time.perf_counter() - t0

    t0 = time.perf_counter()
    alg2 = algos.convert_single_to_m(instance, crews=m)
    t_alg2 = time.perf_counter() - t0

    single = alg2.single_crew.harm
    _, infinite = sched.infinite_crew_energization(islands, precedence, repair)

    damaged = sum(1 for lid in repair if repair[lid] > 0)
    h_opt = None
    t_oracle = 0.0
    if damaged <= oracle.MAX_BRUTE_FORCE_LINES:
        t0 = time.perf_counter()
        h_opt = oracle.brute_force_optimal(instance, m).harm
        t_oracle = time.perf_counter() - t0

    _certify(name, instance, m, alg1, alg2, single, infinite, h_opt)

    return BenchRow(
        instance=name,
        lines=len(repair),
        islands=len(islands.islands),
        crews=m,
        h_lp=alg1.lp.objective,
        h_alg1=alg1.report.harm,
        h_alg2=alg2.report.harm,
        h_single=single,
        h_infinite=infinite,
        h_opt=h_opt,
        ratio_alg1=None if h_opt in (None, 0) else alg1.report.harm / h_opt,
        ratio_alg2=None if h_opt in (None, 0) else alg2.report.harm / h_opt,
        ratio_lp=None if h_opt in (None, 0) else alg1.lp.objective / h_opt,
        t_lp=t_lp,
        t_alg1=t_alg1,
        t_alg2=t_alg2,
        t_oracle=t_oracle,
    )


def _certify(name, instance, m, alg1, alg2, single, infinite, h_opt) -> None:
    failures: list[str] = []
    repair = instance.repair_times()
    tol = 1e-6

    # per-job chain under midpoint list scheduling
    starts = alg1.schedule.starts()
    elapsed = 0.0
    for lid in alg1.schedule.priority:
        if starts[lid] > elapsed / m + 1e-9:
            failures.append(f"start bound broken for {lid}")
        elapsed += repair[lid]
    completions = alg1.schedule.completions()
    for lid in repair:
        if completions[lid] > 2.0 * alg1.lp.completion[lid] + tol:
            failures.append(f"2x completion bound broken for {lid}")
    for iid, e in alg1.energization.items():
        if e > 2.0 * alg1.lp.energization[iid] + tol:
            failures.append(f"2x energization bound broken for island {iid}")

    # per-island conversion bound
    single_plan = sched.list_schedule(
        list(alg2.single_crew.line_list), 1, repair
    )
    single_e = sched.energization_times(single_plan, alg2.islands, alg2.precedence)
    infinite_e, _ = sched.infinite_crew_energization(
        alg2.islands, alg2.precedence, repair
    )
    for iid, e in alg2.energization.items():
        bound = single_e[iid] / m + (m - 1) / m * infinite_e[iid]
        if e > bound + 1e-9:
            failures.append(f"conversion bound broken for island {iid}")

    if h_opt is not None:
        if alg1.report.harm > 2.0 * h_opt + tol:
            failures.append("2x harm guarantee broken")
        if alg2.report.harm > (2.0 - 1.0 / m) * h_opt + tol:
            failures.append("(2 - 1/m) harm guarantee broken")
        if alg1.lp.objective > h_opt + tol:
            failures.append("relaxation exceeds the optimum")
        if h_opt < single / m - tol:
            failures.append("optimum below single-crew bound")
        if h_opt < infinite - tol:
            failures.append("optimum below unlimited-crew bound")

    if failures:
        raise InvariantViolation(
            f"{name} (m={m}): " + "; ".join(failures),
        )


def _bench_task(args: tuple[str, dict, int]) -> BenchRow:
    name, raw, m = args
    return bench_instance(name, validate(raw), m)


def run_bench(
    params: GenParams,
    count: int,
    out_path: str | Path | None = None,
    jobs: int = 1,
) -> list[BenchRow]:
    """Benchmark generated instances across the configured crew counts.

    Rows come back ordered by instance id then crew count regardless of
    worker scheduling.  On an invariant violation the offending instance
    is written next to the output file for replay and the error re-raised.
    """
    corpus = generate_corpus(params, count)
    tasks = [
        (name, instance_to_json(instance), m)
        for name, instance in corpus
        for m in params.crews
    ]
    try:
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                rows = list(pool.map(_bench_task, tasks))
        else:
            rows = [_bench_task(t) for t in tasks]
    except InvariantViolation as exc:
        if out_path is not None:
            name = str(exc).split(" ", 1)[0]
            replay = {n: raw for n, raw, _ in tasks}.get(name)
            if replay is not None:
                Path(str(out_path) + ".violation.json").write_text(
                    json.dumps(replay, indent=2) + "\n"
                )
        raise
    if out_path is not None:
        Path(out_path).write_text(rows_to_csv(rows))
    return rows
