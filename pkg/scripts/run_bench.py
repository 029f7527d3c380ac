#!/usr/bin/env python3
"""Benchmark the algorithms over a seeded random corpus and write a CSV.

Defaults reproduce the standard verification run: 500 instances with at
most 8 lines, 2 and 3 crews, every guarantee re-checked per row.

    python scripts/run_bench.py --out bench.csv
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from gridrepair.harness import GenParams, run_bench  # noqa: E402


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=1000)
    parser.add_argument("--count", type=int, default=500)
    parser.add_argument("--max-lines", type=int, default=8)
    parser.add_argument("--crews", type=str, default="2,3")
    parser.add_argument("--switch-probability", type=float, default=0.4)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", type=Path, default=Path("bench.csv"))
    args = parser.parse_args()

    params = GenParams(
        seed=args.seed,
        nodes=(2, args.max_lines + 1),
        switch_probability=args.switch_probability,
        crews=tuple(int(tok) for tok in args.crews.split(",") if tok),
    )
    rows = run_bench(params, args.count, out_path=args.out, jobs=args.jobs)

    solved = [r for r in rows if r.h_opt]
    print(f"wrote {len(rows)} rows to {args.out}")
    if solved:
        worst1 = max(r.ratio_alg1 for r in solved)
        worst2 = max(r.ratio_alg2 for r in solved)
        gap = min(r.ratio_lp for r in solved)
        print(f"worst midpoint-list ratio:  {worst1:.4f}")
        print(f"worst conversion ratio:     {worst2:.4f}")
        print(f"smallest relaxation ratio:  {gap:.4f}")


if __name__ == "__main__":
    main()
