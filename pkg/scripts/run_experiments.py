#!/usr/bin/env python3
"""Run the full benchmark suite and drop one CSV per experiment.

Desk-scale full runs take minutes (the atomic reservation strategy pays
one Python-level counter operation per element by design); pass --quick
for a seconds-long smoke sweep with reduced sizes.
"""

import argparse
import sys
import time
from pathlib import Path

from growarray.bench_cli import main as bench_main

FULL = {
    "insert-algos": ["--structure", "static", "--initial-size", "100000",
                     "--iterations", "10", "--repetitions", "3"],
    "shard-sweep": ["--shards", "1,2,4,8,16,32,64,128,256,512,1024,2048,4096",
                    "--initial-size", "100000", "--iterations", "6",
                    "--repetitions", "3"],
    "grow-insert-rw": ["--structure", "ggarray", "--initial-size", "100000",
                       "--iterations", "10", "--repetitions", "5"],
    "two-phase": ["--initial-size", "1000", "--iterations", "10",
                  "--work-passes", "1000", "--repetitions", "5"],
    "memory-model": ["--samples", "1000000", "--base-size", "1000000"],
}

QUICK = {
    "insert-algos": ["--structure", "static", "--initial-size", "2048",
                     "--iterations", "4", "--repetitions", "1"],
    "shard-sweep": ["--shards", "1,8,32,128,512", "--initial-size", "4096",
                    "--iterations", "4", "--repetitions", "1"],
    "grow-insert-rw": ["--structure", "ggarray", "--initial-size", "4096",
                       "--iterations", "6", "--repetitions", "2"],
    "two-phase": ["--initial-size", "512", "--iterations", "4",
                  "--work-passes", "100", "--repetitions", "2"],
    "memory-model": ["--samples", "100000", "--base-size", "100000"],
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="reduced sizes")
    parser.add_argument("--out-dir", default="results", type=Path)
    parser.add_argument("--workers", type=int, default=4)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    plan = QUICK if args.quick else FULL
    for command, extra in plan.items():
        out = args.out_dir / f"{command}.csv"
        argv = [command, *extra, "--workers", str(args.workers),
                "--seed", str(args.seed), "--out", str(out)]
        print(f"== {command} -> {out}", flush=True)
        t0 = time.perf_counter()
        bench_main(argv)
        print(f"   done in {time.perf_counter() - t0:.1f}s", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
