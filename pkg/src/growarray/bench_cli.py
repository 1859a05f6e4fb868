"""Benchmark harness and CLI.

Five subcommands measure the desk-scale analogs of the structure's
design space: reservation-strategy comparison on a fixed array, a sweep
over the shard count, grow/insert/rw timings per structure, a two-phase
insert-then-work case study, and the capacity-planning model.  Every
benchmark doubles as a correctness test: end states are checked against
a sequential oracle before any timing row is emitted, and timing columns
are informational only.
"""

from __future__ import annotations

import argparse
import csv
import sys
import threading
import time
from dataclasses import dataclass, replace

import numpy as np

from .baselines import ChunkTableArray, DoublingArray, StaticArray
from .insert_index import DEFAULT_GROUP_SIZE
from .memory_model import DEFAULT_ELEMENT_SIZE, MemoryModelParams, run_model
from .sharded_array import GrowableArray, split_batches

__all__ = [
    "BenchConfig",
    "OracleMismatch",
    "CSV_COLUMNS",
    "DEFAULT_SHARD_SWEEP",
    "bench_insert_algos",
    "bench_shard_sweep",
    "bench_grow_insert_rw",
    "bench_two_phase",
    "write_rows",
    "main",
]

STRUCTURES = ("static", "doubling", "chunktable", "ggarray")
ALGOS = ("atomic", "scan")
RW_MODES = ("global", "per_shard")

BENCH_DTYPE = np.int32

CSV_COLUMNS = [
    "experiment", "structure", "shards", "first_bucket", "workers",
    "initial_size", "iterations", "algo", "rw_mode", "work_passes",
    "repetitions", "seed", "variant", "repetition", "iteration", "phase",
    "elapsed_ns", "size_after", "counter_ops", "copied_elements", "speedup",
]

DEFAULT_SHARD_SWEEP = tuple(2 ** i for i in range(13))  # 1 .. 4096
TWO_PHASE_MULTIPLIERS = (1, 3, 10)


class OracleMismatch(RuntimeError):
    """A benchmark end state disagreed with its sequential oracle."""


@dataclass
class BenchConfig:
    structure: str = "ggarray"
    shards: int = 32
    first_bucket: int = 32
    workers: int = 4
    initial_size: int = 100_000
    iterations: int = 10
    algo: str = "scan"
    rw_mode: str = "per_shard"
    work_passes: int = 30
    repetitions: int = 5
    seed: int = 0
    out: str = "-"
    csv_header: bool = True
    rw_grain: int = 65536

    def __post_init__(self):
        if self.structure not in STRUCTURES:
            raise ValueError(f"structure must be one of {STRUCTURES}, got {self.structure!r}")
        if self.algo not in ALGOS:
            raise ValueError(f"algo must be one of {ALGOS}, got {self.algo!r}")
        if self.rw_mode not in RW_MODES:
            raise ValueError(f"rw_mode must be one of {RW_MODES}, got {self.rw_mode!r}")
        for name in ("shards", "workers", "initial_size", "iterations",
                     "work_passes", "repetitions", "rw_grain"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")
        fb = self.first_bucket
        if fb < 1 or (fb & (fb - 1)) != 0:
            raise ValueError(f"first_bucket must be a positive power of two, got {fb}")


# ---------------------------------------------------------------------------
# harness plumbing


def _now() -> int:
    return time.perf_counter_ns()


def _check_final_size(config: BenchConfig) -> int:
    """Final element count of the doubling schedule; must fit the 32-bit
    bench element type with room for the rw increments."""
    final = config.initial_size << config.iterations
    if final + config.iterations * config.work_passes >= 2 ** 31:
        raise ValueError(
            f"schedule reaches {final} elements; too large for 32-bit bench values"
        )
    return final


def _run_threads(fns) -> None:
    """Run callables to completion on dedicated threads; reraise the first failure."""
    fns = list(fns)
    if not fns:
        return
    if len(fns) == 1:
        fns[0]()
        return
    errors: list[BaseException] = []
    lock = threading.Lock()

    def wrap(fn):
        try:
            fn()
        except BaseException as exc:
            with lock:
                errors.append(exc)

    threads = [threading.Thread(target=wrap, args=(fn,)) for fn in fns]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    if errors:
        raise errors[0]


def _slices(n: int, parts: int) -> list[tuple[int, int]]:
    """Balanced contiguous slices of range(n), at most ``parts`` of them."""
    if n <= 0:
        return []
    parts = max(1, min(parts, n))
    base, extra = divmod(n, parts)
    out = []
    lo = 0
    for i in range(parts):
        hi = lo + base + (1 if i < extra else 0)
        if hi > lo:
            out.append((lo, hi))
        lo = hi
    return out


def _aligned_slices(n: int, parts: int, align: int) -> list[tuple[int, int]]:
    """Contiguous slices whose boundaries are multiples of ``align``.

    Keeps scan groups whole across workers so the round still costs
    exactly ceil(n / align) counter operations.
    """
    if n <= 0:
        return []
    per = -(-n // max(1, parts))
    per = max(align, -(-per // align) * align)
    return [(lo, min(n, lo + per)) for lo in range(0, n, per)]


def _assert_multiset_equal(actual, expected, context: str) -> None:
    a = np.sort(np.asarray(actual, dtype=np.int64))
    b = np.sort(np.asarray(expected, dtype=np.int64))
    if len(a) != len(b) or not np.array_equal(a, b):
        raise OracleMismatch(
            f"{context}: end state disagrees with the sequential oracle "
            f"(got {len(a)} elements, expected {len(b)})"
        )


def _add_passes(views: list[np.ndarray], passes: int) -> None:
    for _ in range(passes):
        for v in views:
            v += 1


def _split_view_rows(views: list[np.ndarray], parts: int) -> list[list[np.ndarray]]:
    """Split views into ``parts`` lists of balanced element counts, cutting
    views at element boundaries where needed.

    Keeps the work-phase dispatch policy identical across structures, so
    timing differences come from the structures, not the thread layout.
    """
    total = sum(len(v) for v in views)
    if total == 0:
        return []
    out = []
    vi = 0
    off = 0
    for lo, hi in _slices(total, parts):
        need = hi - lo
        mine = []
        while need:
            view = views[vi]
            take = min(need, len(view) - off)
            mine.append(view[off : off + take])
            off += take
            need -= take
            if off == len(view):
                vi += 1
                off = 0
        out.append(mine)
    return out


def _parallel_passes(views, passes: int, workers: int) -> None:
    groups = _split_view_rows(list(views), workers)
    _run_threads((lambda g=g: _add_passes(g, passes)) for g in groups)


# ---------------------------------------------------------------------------
# structure-generic helpers


def _build_flat(kind: str, initial_values: np.ndarray, final_capacity: int):
    if kind == "static":
        store = StaticArray(final_capacity, dtype=BENCH_DTYPE)
    elif kind == "doubling":
        store = DoublingArray(max(1, len(initial_values)), dtype=BENCH_DTYPE)
    elif kind == "chunktable":
        store = ChunkTableArray(dtype=BENCH_DTYPE)
        store.resize(len(initial_values))
    else:
        raise ValueError(f"not a flat structure: {kind}")
    if len(initial_values):
        store.insert_batch(initial_values)
    return store


def _build_structure(config: BenchConfig, initial_values: np.ndarray, final_capacity: int):
    if config.structure == "ggarray":
        return GrowableArray.from_flat(
            initial_values, config.shards, config.first_bucket, dtype=BENCH_DTYPE
        )
    return _build_flat(config.structure, initial_values, final_capacity)


def _contents(store) -> np.ndarray:
    if isinstance(store, GrowableArray):
        return store.flatten()
    return store.to_numpy()


def _committed_size(store) -> int:
    if isinstance(store, GrowableArray):
        return store.committed_size
    return store.size


def _atomic_insert_flat(store, vals: np.ndarray, workers: int) -> None:
    """One shared-counter operation per element, then scatter the writes."""
    fetch_add = store.size_counter.fetch_add
    block = 65536

    def worker(lo: int, hi: int):
        for b0 in range(lo, hi, block):
            chunk = vals[b0 : min(hi, b0 + block)]
            starts = np.fromiter(
                (fetch_add(1) for _ in range(len(chunk))), dtype=np.int64, count=len(chunk)
            )
            store.view()[starts] = chunk

    _run_threads(lambda lo=lo, hi=hi: worker(lo, hi) for lo, hi in _slices(len(vals), workers))


def _scan_insert_flat(store, vals: np.ndarray, workers: int, group: int = DEFAULT_GROUP_SIZE) -> None:
    """Scan-style insertion: unit-count lanes combined per group of ``group``.

    Each group of elements costs one shared-counter operation and lands
    contiguously, exactly the prescan-within-group contract.
    """

    def worker(lo: int, hi: int):
        for g0 in range(lo, hi, group):
            store.insert_batch(vals[g0 : min(hi, g0 + group)])

    _run_threads(
        lambda lo=lo, hi=hi: worker(lo, hi) for lo, hi in _aligned_slices(len(vals), workers, group)
    )


def _insert_flat(store, vals: np.ndarray, algo: str, workers: int) -> None:
    if algo == "atomic":
        _atomic_insert_flat(store, vals, workers)
    else:
        _scan_insert_flat(store, vals, workers)


def _insert_duplicate(store, config: BenchConfig) -> None:
    """Insert one element per existing element (copies of the contents)."""
    if isinstance(store, GrowableArray):
        batches = [
            shard.to_numpy(store.committed_length(s))
            for s, shard in enumerate(store.shards)
        ]
        store.insert_parallel(batches, workers=config.workers)
    else:
        _insert_flat(store, store.to_numpy(), config.algo, config.workers)


def _grow(store, target_capacity: int) -> None:
    if isinstance(store, GrowableArray):
        store.grow(target_capacity)
    else:
        store.resize(target_capacity)


def _rw_flat_views(store) -> list[np.ndarray]:
    if isinstance(store, ChunkTableArray):
        return list(store.chunk_views())
    return [store.view()]


def _rw_per_shard(arr: GrowableArray, passes: int, workers: int) -> None:
    tasks = [
        list(arr.shards[s].iter_segments(arr.committed_length(s)))
        for s in range(arr.shard_count)
        if arr.committed_length(s)
    ]

    def worker(assigned):
        for views in assigned:
            _add_passes(views, passes)

    _run_threads(
        (lambda a=tasks[w::workers]: worker(a)) for w in range(min(workers, len(tasks)))
    )


def _rw_global(arr: GrowableArray, passes: int, workers: int, grain: int) -> None:
    """Treat the structure as one flat array: every element is located
    through the directory (vectorized binary search per index), then the
    resolved segments take the passes."""
    n = arr.committed_size
    spans = [(lo, min(n, lo + grain)) for lo in range(0, n, grain)]

    def task(lo: int, hi: int):
        idx = np.arange(lo, hi, dtype=np.int64)
        shard_ids, locals_ = arr.locate_shard_many(idx)
        views: list[np.ndarray] = []
        a = 0
        while a < len(idx):
            s = int(shard_ids[a])
            b = int(np.searchsorted(shard_ids, s, side="right"))
            views.extend(
                arr.shards[s].iter_segments(int(locals_[b - 1]) + 1, start=int(locals_[a]))
            )
            a = b
        _add_passes(views, passes)

    def worker(assigned):
        for lo, hi in assigned:
            task(lo, hi)

    _run_threads(
        (lambda a=spans[w::workers]: worker(a)) for w in range(min(workers, len(spans)))
    )


def _rw_structure(store, config: BenchConfig, passes: int, rw_mode: str) -> None:
    if isinstance(store, GrowableArray):
        if rw_mode == "global":
            _rw_global(store, passes, config.workers, config.rw_grain)
        else:
            _rw_per_shard(store, passes, config.workers)
        return
    _parallel_passes(_rw_flat_views(store), passes, config.workers)


# ---------------------------------------------------------------------------
# record plumbing


def _base_record(config: BenchConfig, experiment: str) -> dict:
    return {
        "experiment": experiment,
        "structure": config.structure,
        "shards": config.shards,
        "first_bucket": config.first_bucket,
        "workers": config.workers,
        "initial_size": config.initial_size,
        "iterations": config.iterations,
        "algo": config.algo,
        "rw_mode": config.rw_mode,
        "work_passes": config.work_passes,
        "repetitions": config.repetitions,
        "seed": config.seed,
    }


def write_rows(rows: list[dict], out, header: bool = True) -> None:
    """Emit benchmark records as CSV (UTF-8, LF line endings)."""

    def emit(fh):
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, restval="", lineterminator="\n")
        if header:
            writer.writeheader()
        writer.writerows(rows)

    if out == "-" or out is None:
        emit(sys.stdout)
    elif hasattr(out, "write"):
        emit(out)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            emit(fh)


# ---------------------------------------------------------------------------
# experiments


def bench_insert_algos(config: BenchConfig) -> list[dict]:
    """Duplication rounds on the fixed array under both reservation
    strategies, recording per-round time and shared-counter traffic.

    The atomic strategy pays one counter operation per element; the scan
    strategy prescans unit counts per group of 32 lanes and pays one per
    group.  Both must end with identical contents.
    """
    final = _check_final_size(config)
    rows = []
    end_states = {}
    for algo in ALGOS:
        for rep in range(config.repetitions):
            store = StaticArray(final, dtype=BENCH_DTYPE)
            store.insert_batch(np.arange(config.initial_size, dtype=BENCH_DTYPE))
            tag = config.initial_size
            for it in range(config.iterations):
                n = store.size
                vals = np.arange(tag, tag + n, dtype=BENCH_DTYPE)
                ops_before = store.size_counter.op_count
                t0 = _now()
                _insert_flat(store, vals, algo, config.workers)
                elapsed = _now() - t0
                tag += n
                record = _base_record(config, "insert-algos")
                record.update(
                    structure="static", algo=algo, variant=algo, repetition=rep,
                    iteration=it, phase="insert", elapsed_ns=elapsed,
                    size_after=store.size,
                    counter_ops=store.size_counter.op_count - ops_before,
                )
                rows.append(record)
            # every value 0..final-1 must appear exactly once
            _assert_multiset_equal(
                store.to_numpy(), np.arange(final), f"insert-algos[{algo}]"
            )
            if rep == 0:
                end_states[algo] = np.sort(store.to_numpy())
    if not np.array_equal(end_states["atomic"], end_states["scan"]):
        raise OracleMismatch("insert-algos: strategies disagree on final contents")
    return rows


def bench_shard_sweep(config: BenchConfig, s_list=None) -> list[dict]:
    """Grow+insert duplication rounds and rw in both modes for each shard
    count."""
    s_list = list(s_list if s_list is not None else DEFAULT_SHARD_SWEEP)
    if not s_list:
        raise ValueError("s_list must be non-empty")
    _check_final_size(config)
    rows = []
    for s_count in s_list:
        for rep in range(config.repetitions):
            initial = np.arange(config.initial_size, dtype=BENCH_DTYPE)
            arr = GrowableArray.from_flat(initial, s_count, config.first_bucket, dtype=BENCH_DTYPE)
            oracle = initial.astype(np.int64)
            for it in range(config.iterations):
                base = _base_record(config, "shard-sweep")
                base.update(structure="ggarray", shards=s_count,
                            variant=f"S={s_count}", repetition=rep, iteration=it)

                t0 = _now()
                arr.grow(2 * arr.committed_size)
                rows.append(dict(base, phase="grow", elapsed_ns=_now() - t0,
                                 size_after=arr.committed_size))

                t0 = _now()
                _insert_duplicate(arr, config)
                rows.append(dict(base, phase="insert", elapsed_ns=_now() - t0,
                                 size_after=arr.committed_size))
                oracle = np.concatenate([oracle, oracle])

                t0 = _now()
                _rw_structure(arr, config, config.work_passes, "global")
                rows.append(dict(base, phase="rw", rw_mode="global",
                                 elapsed_ns=_now() - t0, size_after=arr.committed_size))

                t0 = _now()
                _rw_structure(arr, config, config.work_passes, "per_shard")
                rows.append(dict(base, phase="rw", rw_mode="per_shard",
                                 elapsed_ns=_now() - t0, size_after=arr.committed_size))
                oracle += 2 * config.work_passes
            _assert_multiset_equal(arr.flatten(), oracle, f"shard-sweep[S={s_count}]")
    return rows


def bench_grow_insert_rw(config: BenchConfig) -> list[dict]:
    """Per duplication round: grow, insert one element per existing
    element, then run the rw passes, for the configured structure."""
    final = _check_final_size(config)
    rows = []
    for rep in range(config.repetitions):
        initial = np.arange(config.initial_size, dtype=BENCH_DTYPE)
        store = _build_structure(config, initial, final)
        oracle = initial.astype(np.int64)
        for it in range(config.iterations):
            base = _base_record(config, "grow-insert-rw")
            base.update(variant=config.structure, repetition=rep, iteration=it)
            size = _committed_size(store)

            if config.structure != "static":
                copied_before = getattr(store, "elements_copied", 0)
                t0 = _now()
                _grow(store, 2 * size)
                elapsed = _now() - t0
                copied = getattr(store, "elements_copied", 0) - copied_before
                rows.append(dict(base, phase="grow", elapsed_ns=elapsed,
                                 size_after=size, copied_elements=copied))

            t0 = _now()
            _insert_duplicate(store, config)
            rows.append(dict(base, phase="insert", elapsed_ns=_now() - t0,
                             size_after=_committed_size(store)))
            oracle = np.concatenate([oracle, oracle])

            t0 = _now()
            _rw_structure(store, config, config.work_passes, config.rw_mode)
            rows.append(dict(base, phase="rw", rw_mode=config.rw_mode,
                             elapsed_ns=_now() - t0, size_after=_committed_size(store)))
            oracle += config.work_passes
        _assert_multiset_equal(_contents(store), oracle, f"grow-insert-rw[{config.structure}]")
    return rows


def _two_phase_run(config: BenchConfig, kind: str, start: int, k: int, final: int):
    """One two-phase repetition; returns (phase rows sans record keys, total_ns, end size)."""
    initial = np.arange(start, dtype=BENCH_DTYPE)
    store = _build_structure(replace(config, structure=kind), initial, final)
    oracle = initial.astype(np.int64)
    tag = start
    phases = []
    total = 0
    for it in range(config.iterations):
        size = _committed_size(store)
        if it == config.iterations - 1:
            m = final - size
        else:
            m = min(k * size, final - size)  # tiny configs round the ramp up
        vals = np.arange(tag, tag + m, dtype=BENCH_DTYPE)
        tag += m

        t0 = _now()
        if isinstance(store, GrowableArray):
            store.insert_parallel(split_batches(vals, store.shard_count), workers=config.workers)
        else:
            if not isinstance(store, StaticArray):
                store.resize(size + m)
            _insert_flat(store, vals, config.algo, config.workers)
        elapsed = _now() - t0
        total += elapsed
        phases.append(dict(iteration=it, phase="insert", elapsed_ns=elapsed,
                           size_after=_committed_size(store)))
        oracle = np.concatenate([oracle, vals.astype(np.int64)])

        if isinstance(store, GrowableArray):
            t0 = _now()
            flat = store.flatten()
            flatten_ns = _now() - t0

            t0 = _now()
            _parallel_passes([flat], config.work_passes, config.workers)
            work_ns = _now() - t0

            t0 = _now()
            store = GrowableArray.from_flat(flat, config.shards, config.first_bucket, dtype=BENCH_DTYPE)
            flatten_ns += _now() - t0
            total += flatten_ns + work_ns
            phases.append(dict(iteration=it, phase="flatten", elapsed_ns=flatten_ns,
                               size_after=_committed_size(store)))
            phases.append(dict(iteration=it, phase="work", elapsed_ns=work_ns,
                               size_after=_committed_size(store)))
        else:
            t0 = _now()
            _rw_structure(store, config, config.work_passes, config.rw_mode)
            work_ns = _now() - t0
            total += work_ns
            phases.append(dict(iteration=it, phase="work", elapsed_ns=work_ns,
                               size_after=_committed_size(store)))
        oracle += config.work_passes

    end = _committed_size(store)
    if end != final:
        raise OracleMismatch(f"two-phase[{kind}, k={k}]: ended at {end}, expected {final}")
    _assert_multiset_equal(_contents(store), oracle, f"two-phase[{kind}, k={k}]")
    return phases, total, end


def bench_two_phase(config: BenchConfig) -> list[dict]:
    """Alternating insertion and work phases, the dynamic structure
    flattening before each work phase, compared against the chunk-table
    baseline.

    The starting size compensates the per-iteration insertion multiplier
    (1, 3 or 10 elements per existing element, the last round topped up
    exactly) so every variant ends at the same final size.
    """
    final = _check_final_size(config)
    kinds = ["chunktable"]
    if config.structure != "chunktable":
        kinds.append(config.structure)
    rows = []
    for k in TWO_PHASE_MULTIPLIERS:
        start = max(1, final // (1 + k) ** config.iterations)
        baseline_totals: dict[int, int] = {}
        for kind in kinds:
            role = "baseline" if kind == "chunktable" else "candidate"
            for rep in range(config.repetitions):
                phases, total, end = _two_phase_run(config, kind, start, k, final)
                base = _base_record(config, "two-phase")
                base.update(structure=kind, variant=f"mult={k}:{role}", repetition=rep)
                for ph in phases:
                    rows.append(dict(base, **ph))
                total_row = dict(base, iteration="", phase="total",
                                 elapsed_ns=total, size_after=end)
                if role == "baseline":
                    baseline_totals[rep] = total
                    if len(kinds) == 1:
                        total_row["speedup"] = 1.0
                else:
                    total_row["speedup"] = baseline_totals[rep] / total
                rows.append(total_row)
    return rows


# ---------------------------------------------------------------------------
# CLI


def _parse_shards(text: str) -> list[int]:
    try:
        values = [int(part) for part in str(text).split(",") if part.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad shard list {text!r}") from exc
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"shard counts must be >= 1, got {text!r}")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="growarray-bench",
        description="Desk-scale benchmark harness for the sharded growable array.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--structure", choices=STRUCTURES, default="ggarray")
    common.add_argument("--shards", type=_parse_shards, default=[32],
                        help="shard count (comma-separated list for shard-sweep)")
    common.add_argument("--first-bucket", type=int, default=32)
    common.add_argument("--workers", type=int, default=4)
    common.add_argument("--initial-size", type=int, default=100_000)
    common.add_argument("--iterations", type=int, default=10)
    common.add_argument("--algo", choices=ALGOS, default="scan")
    common.add_argument("--rw-mode", choices=RW_MODES, default="per_shard")
    common.add_argument("--work-passes", type=int, default=30)
    common.add_argument("--repetitions", type=int, default=5)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    common.add_argument("--csv-header", action=argparse.BooleanOptionalAction, default=True)
    common.add_argument("--rw-grain", type=int, default=65536,
                        help="elements per task in global rw mode")

    for name in ("insert-algos", "shard-sweep", "grow-insert-rw", "two-phase"):
        sub.add_parser(name, parents=[common])

    mm = sub.add_parser("memory-model", parents=[common])
    mm.add_argument("--samples", type=int, default=100_000)
    mm.add_argument("--base-size", type=int, default=1_000_000)
    mm.add_argument("--element-size", type=int, default=DEFAULT_ELEMENT_SIZE)
    return parser


def _config_from(args: argparse.Namespace, single_shard_count: bool) -> BenchConfig:
    shards = args.shards
    if single_shard_count:
        if len(shards) != 1:
            raise SystemExit(f"{args.command}: --shards takes a single value, got {shards}")
        shard_count = shards[0]
    else:
        shard_count = shards[0]
    return BenchConfig(
        structure=args.structure,
        shards=shard_count,
        first_bucket=args.first_bucket,
        workers=args.workers,
        initial_size=args.initial_size,
        iterations=args.iterations,
        algo=args.algo,
        rw_mode=args.rw_mode,
        work_passes=args.work_passes,
        repetitions=args.repetitions,
        seed=args.seed,
        out=args.out,
        csv_header=args.csv_header,
        rw_grain=args.rw_grain,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    command = args.command

    if command == "memory-model":
        params = MemoryModelParams(
            base_size=args.base_size, samples=args.samples, seed=args.seed
        )
        config = _config_from(args, single_shard_count=True)
        run_model(
            params,
            shards=config.shards,
            first_bucket_size=config.first_bucket,
            element_size=args.element_size,
            out=(sys.stdout if config.out == "-" else config.out),
            header=config.csv_header,
        )
        return 0

    config = _config_from(args, single_shard_count=(command != "shard-sweep"))
    if command == "insert-algos":
        rows = bench_insert_algos(config)
    elif command == "shard-sweep":
        rows = bench_shard_sweep(config, args.shards)
    elif command == "grow-insert-rw":
        rows = bench_grow_insert_rw(config)
    elif command == "two-phase":
        rows = bench_two_phase(config)
    else:  # pragma: no cover
        raise SystemExit(f"unknown command {command!r}")
    write_rows(rows, config.out, header=config.csv_header)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
