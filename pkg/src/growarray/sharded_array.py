"""Sharded growable array with a prefix-sum directory.

A fixed number of independent shards absorb concurrent insertions
without any cross-shard synchronization.  A commit (the epoch boundary)
rebuilds the exclusive prefix-sum of shard sizes; between commits the
directory stays frozen, so readers see a consistent snapshot while
shards keep growing underneath.  Global indices resolve to a
(shard, local) pair by binary search over the directory.
"""

from __future__ import annotations

import os
import threading
from bisect import bisect_right
from typing import Callable, Sequence

import numpy as np

from .bucket_vector import DEFAULT_FIRST_BUCKET_SIZE, MAX_BUCKETS, ShardVector
from .errors import ShardInsertError, TraversalError
from .insert_index import exclusive_scan

__all__ = ["GrowableArray", "split_batches"]

DEFAULT_SHARDS = 32


def split_batches(values, shards: int) -> list[np.ndarray]:
    """Partition a sequence into ``shards`` contiguous chunks of ceil(n/S).

    Chunk ``c`` is destined for shard ``c``; trailing shards may come up
    empty.  Concatenating the chunks reproduces the input order.
    """
    vals = np.asarray(values)
    n = len(vals)
    chunk = -(-n // shards) if n else 0
    return [vals[c * chunk : (c + 1) * chunk] for c in range(shards)]


def _run_tasks(tasks: list[tuple[int, Callable[[], None]]], workers: int | None):
    """Run (key, fn) tasks, round-robin across at most ``workers`` threads.

    Returns {key: exception} for the tasks that raised.
    """
    failures: dict[int, BaseException] = {}
    failure_lock = threading.Lock()

    def run_slice(assigned):
        for key, fn in assigned:
            try:
                fn()
            except BaseException as exc:
                with failure_lock:
                    failures[key] = exc

    if not workers:
        # thread-per-shard up to a sane cap; semantics don't depend on it
        workers = max(4, 2 * (os.cpu_count() or 4))
    workers = max(1, min(len(tasks), workers))
    if workers == 1 or len(tasks) <= 1:
        run_slice(tasks)
        return failures
    threads = [
        threading.Thread(target=run_slice, args=(tasks[w::workers],))
        for w in range(workers)
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    return failures


class GrowableArray:
    """S independent shards plus a committed prefix-sum directory.

    Between commits, distinct shards may be grown and filled from any
    number of actors; the committed view (``get_global``, traversal,
    ``flatten``) is read-only safe from any actor.  ``commit`` itself is
    a stop-the-world step: the caller must ensure no insertions are in
    flight.
    """

    def __init__(
        self,
        shards: int = DEFAULT_SHARDS,
        first_bucket_size: int = DEFAULT_FIRST_BUCKET_SIZE,
        dtype=np.int64,
        max_buckets: int = MAX_BUCKETS,
        allocator=None,
    ):
        if shards < 1:
            raise ValueError(f"shards must be >= 1, got {shards}")
        self.shards = [
            ShardVector(first_bucket_size, dtype=dtype, max_buckets=max_buckets, allocator=allocator)
            for _ in range(shards)
        ]
        self.prefix: list[int] = [0] * (shards + 1)
        self.dtype = np.dtype(dtype)

    @property
    def shard_count(self) -> int:
        return len(self.shards)

    @property
    def first_bucket_size(self) -> int:
        return self.shards[0].first_bucket_size

    @property
    def committed_size(self) -> int:
        return self.prefix[-1]

    @property
    def total_size(self) -> int:
        """Live total across shards, including uncommitted reservations."""
        return sum(s.size for s in self.shards)

    @property
    def total_capacity(self) -> int:
        return sum(s.capacity for s in self.shards)

    def __len__(self) -> int:
        return self.committed_size

    # -- directory ----------------------------------------------------

    def locate_shard(self, g: int) -> tuple[int, int]:
        """Resolve committed global index ``g`` to (shard, local index).

        Binary search over the directory; empty shards are skipped
        because their prefix interval is empty.
        """
        if not 0 <= g < self.committed_size:
            raise IndexError(f"global index {g} outside committed size {self.committed_size}")
        s = bisect_right(self.prefix, g) - 1
        return s, g - self.prefix[s]

    def locate_shard_many(self, indices) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized `locate_shard` for benchmark-sized index batches."""
        idx = np.asarray(indices, dtype=np.int64)
        if idx.size:
            lo, hi = int(idx.min()), int(idx.max())
            if lo < 0 or hi >= self.committed_size:
                raise IndexError(
                    f"indices [{lo}, {hi}] outside committed size {self.committed_size}"
                )
        prefix = np.asarray(self.prefix, dtype=np.int64)
        s = np.searchsorted(prefix, idx, side="right") - 1
        return s, idx - prefix[s]

    def get_global(self, g: int):
        s, local = self.locate_shard(g)
        return self.shards[s].get(local)

    def set_global(self, g: int, value) -> None:
        s, local = self.locate_shard(g)
        self.shards[s].set(local, value)

    # -- traversal ----------------------------------------------------

    def committed_length(self, s: int) -> int:
        return self.prefix[s + 1] - self.prefix[s]

    def for_each_shard(self, op: Callable[[np.ndarray], None], workers: int | None = 1) -> None:
        """Apply ``op`` to every committed element, shard by shard.

        ``op`` receives writable array views in ascending local order
        within each shard; there is no ordering guarantee across shards,
        which is what makes the visit parallelizable (pass ``workers``).
        Failures are collected per shard and raised together once every
        shard has been visited.
        """

        def visit(shard: ShardVector, stop: int):
            for view in shard.iter_segments(stop):
                op(view)

        tasks = [
            (s, (lambda sh=shard, n=self.committed_length(s): visit(sh, n)))
            for s, shard in enumerate(self.shards)
            if self.committed_length(s)
        ]
        failures = _run_tasks(tasks, workers)
        if failures:
            raise TraversalError(failures)

    # -- growth -------------------------------------------------------

    def insert_parallel(self, per_shard_batches: Sequence, reserver=None, workers: int | None = None) -> None:
        """Push one batch into each shard concurrently, then commit.

        ``per_shard_batches`` must hold exactly one (possibly empty)
        batch per shard.  If any shard fails, the commit is withheld and
        a `ShardInsertError` reports which shards succeeded; their
        elements stay reserved but uncommitted.
        """
        if len(per_shard_batches) != self.shard_count:
            raise ValueError(
                f"need {self.shard_count} batches, got {len(per_shard_batches)}"
            )
        tasks = [
            (s, (lambda sh=self.shards[s], b=batch: sh.push_back_batch(b, reserver)))
            for s, batch in enumerate(per_shard_batches)
            if len(batch)
        ]
        failures = _run_tasks(tasks, workers)
        if failures:
            succeeded = [s for s, _ in tasks if s not in failures]
            raise ShardInsertError(failures, succeeded)
        self.commit()

    def commit(self) -> None:
        """Rebuild the directory from shard sizes (epoch boundary).

        Must run with all inserters quiescent; afterwards every write
        made before the commit is visible to subsequent readers.
        """
        sizes = [s.size for s in self.shards]
        scan = exclusive_scan(sizes)
        scan.append(scan[-1] + sizes[-1])
        self.prefix = scan

    def grow(self, target_total_capacity: int, distribution: Sequence[int] | None = None) -> None:
        """Reserve capacity across shards without moving any element.

        The default distribution is even (ceil(target/S) per shard); a
        sequence of per-shard minimum capacities overrides it.  Shards
        whose capacity already suffices allocate nothing, so repeated
        doubling schedules often make a later grow a no-op.
        """
        if distribution is None:
            per_shard = -(-target_total_capacity // self.shard_count)
            distribution = [per_shard] * self.shard_count
        elif len(distribution) != self.shard_count:
            raise ValueError(
                f"distribution needs {self.shard_count} entries, got {len(distribution)}"
            )
        for shard, cap in zip(self.shards, distribution):
            shard.reserve(cap)

    # -- flattening ---------------------------------------------------

    def flatten(self) -> np.ndarray:
        """Copy the committed contents into one contiguous array.

        F[g] equals get_global(g) for every committed g: shards are
        concatenated in directory order.
        """
        parts = [
            shard.to_numpy(self.committed_length(s))
            for s, shard in enumerate(self.shards)
            if self.committed_length(s)
        ]
        if not parts:
            return np.empty(0, dtype=self.dtype)
        return np.concatenate(parts)

    @classmethod
    def from_flat(
        cls,
        values,
        shards: int = DEFAULT_SHARDS,
        first_bucket_size: int = DEFAULT_FIRST_BUCKET_SIZE,
        dtype=None,
        max_buckets: int = MAX_BUCKETS,
        allocator=None,
    ) -> "GrowableArray":
        """Distribute a flat array over ``shards`` contiguous chunks.

        Chunk c of size ceil(n/S) goes to shard c, so the committed
        global order reproduces the input and `flatten` round-trips.
        """
        vals = np.asarray(values)
        if dtype is None:
            dtype = vals.dtype if (vals.size or isinstance(values, np.ndarray)) else np.int64
        arr = cls(shards, first_bucket_size, dtype=dtype, max_buckets=max_buckets, allocator=allocator)
        for shard, chunk in zip(arr.shards, split_batches(vals, shards)):
            if len(chunk):
                shard.push_back_batch(chunk)
        arr.commit()
        return arr

    def __repr__(self) -> str:
        return (
            f"GrowableArray(shards={self.shard_count}, committed={self.committed_size}, "
            f"capacity={self.total_capacity})"
        )
