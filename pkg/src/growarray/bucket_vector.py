"""Growable per-shard vector backed by doubling buckets.

Elements live in separately allocated buckets where bucket ``b`` holds
``first_bucket_size * 2**b`` slots.  Growing means allocating another
bucket; committed elements never move, so readers holding an index keep
a stable address across any amount of growth.  Concurrent inserters
reserve disjoint index ranges through a shared size counter and race to
allocate the buckets their ranges land in; a once-flag per bucket slot
guarantees a single allocation per slot.
"""

from __future__ import annotations

import threading
import time
from typing import Callable, Iterator

import numpy as np

from .errors import CapacityError
from .insert_index import AtomicCounter, AtomicReserver, ReservedRange

__all__ = [
    "MAX_BUCKETS",
    "DEFAULT_FIRST_BUCKET_SIZE",
    "locate",
    "bucket_size",
    "min_buckets_for",
    "capacity_of",
    "BucketTable",
    "ShardVector",
]

# 58 slots with the default first bucket of 32 covers > 9e18 element
# slots; a fixed table never has to be reallocated, so growing the
# vector never touches the table itself.
MAX_BUCKETS = 58
DEFAULT_FIRST_BUCKET_SIZE = 32

_DEFAULT_RESERVER = AtomicReserver()


def _check_first_bucket_size(fb: int) -> None:
    if fb < 1 or (fb & (fb - 1)) != 0:
        raise ValueError(f"first_bucket_size must be a positive power of two, got {fb}")


def locate(i: int, first_bucket_size: int) -> tuple[int, int]:
    """Map local index ``i`` to ``(bucket, offset)`` under the doubling layout.

    With ``fb`` a power of two the bucket index is the highest set bit of
    ``i // fb + 1`` and the offset is what remains after the combined
    capacity of all earlier buckets, ``fb * (2**b - 1)``, is subtracted.
    Pure arithmetic; callers must range-check the bucket themselves.
    """
    if i < 0:
        raise ValueError(f"index must be non-negative, got {i}")
    b = (i // first_bucket_size + 1).bit_length() - 1
    return b, i - first_bucket_size * ((1 << b) - 1)


def bucket_size(b: int, first_bucket_size: int, max_buckets: int = MAX_BUCKETS) -> int:
    """Number of element slots in bucket ``b``: fb * 2**b."""
    if not 0 <= b < max_buckets:
        raise ValueError(f"bucket index {b} outside [0, {max_buckets})")
    return first_bucket_size << b


def capacity_of(bucket_count: int, first_bucket_size: int) -> int:
    """Total slots in the first ``bucket_count`` buckets: fb * (2**k - 1)."""
    return first_bucket_size * ((1 << bucket_count) - 1)


def min_buckets_for(n: int, first_bucket_size: int) -> int:
    """Smallest bucket count whose combined capacity reaches ``n`` slots."""
    if n <= 0:
        return 0
    # minimal k with fb * (2**k - 1) >= n, i.e. 2**k >= ceil(n / fb) + 1
    return (-(-n // first_bucket_size)).bit_length()


class BucketTable:
    """Fixed table of optional bucket storages plus allocation once-flags."""

    __slots__ = ("first_bucket_size", "buckets", "allocated_flags", "flag_lock")

    def __init__(self, first_bucket_size: int, max_buckets: int = MAX_BUCKETS):
        _check_first_bucket_size(first_bucket_size)
        if max_buckets < 1:
            raise ValueError("max_buckets must be >= 1")
        self.first_bucket_size = first_bucket_size
        self.buckets: list[np.ndarray | None] = [None] * max_buckets
        self.allocated_flags = [False] * max_buckets
        self.flag_lock = threading.Lock()

    @property
    def max_buckets(self) -> int:
        return len(self.buckets)

    def allocated_count(self) -> int:
        return sum(self.allocated_flags)


def _publication_backoff(attempt: int) -> None:
    # Allocation is rare and short: yield first, then sleep in small
    # bounded steps so a loser never burns a core for long.
    if attempt < 64:
        time.sleep(0)
    else:
        time.sleep(min(1e-3, 1e-5 * (attempt - 63)))


class ShardVector:
    """One shard: a bucket table, an atomic size and allocation machinery.

    Safe for many concurrent actors: `push_back_batch`, `new_bucket` and
    `reserve` may race freely.  `get`/`set` on distinct committed indices
    are safe; reading an index that was reserved but not yet written is a
    caller bug until the caller-side epoch barrier has passed.

    ``allocator`` maps a slot count to fresh storage and exists so tests
    and benchmarks can count or fail allocations.
    """

    def __init__(
        self,
        first_bucket_size: int = DEFAULT_FIRST_BUCKET_SIZE,
        dtype=np.int64,
        max_buckets: int = MAX_BUCKETS,
        allocator: Callable[[int], np.ndarray] | None = None,
    ):
        self.table = BucketTable(first_bucket_size, max_buckets)
        self.dtype = np.dtype(dtype)
        self._allocator = allocator or (lambda n: np.zeros(n, self.dtype))
        self._size = AtomicCounter(0)
        self._capacity = 0
        self._capacity_lock = threading.Lock()

    @property
    def first_bucket_size(self) -> int:
        return self.table.first_bucket_size

    @property
    def max_buckets(self) -> int:
        return self.table.max_buckets

    @property
    def size(self) -> int:
        """Committed-or-reserved element count."""
        return self._size.value

    def __len__(self) -> int:
        return self.size

    @property
    def capacity(self) -> int:
        """Sum of allocated bucket sizes."""
        return self._capacity

    @property
    def size_counter(self) -> AtomicCounter:
        return self._size

    def locate(self, i: int) -> tuple[int, int]:
        return locate(i, self.table.first_bucket_size)

    def bucket_size(self, b: int) -> int:
        return bucket_size(b, self.table.first_bucket_size, self.table.max_buckets)

    def new_bucket(self, b: int) -> bool:
        """Allocate bucket ``b`` exactly once across concurrent callers.

        Returns True for the single caller that performed the allocation
        and False for everyone else.  Losers of the once-flag race wait
        (bounded backoff) until the winner publishes the storage, so the
        bucket is usable whenever this returns.  If allocation fails the
        flag is rolled back and the error propagates; any caller may
        retry.
        """
        table = self.table
        if not 0 <= b < table.max_buckets:
            raise CapacityError(
                f"bucket {b} outside the table of {table.max_buckets} slots"
            )
        attempt = 0
        while True:
            if table.buckets[b] is not None:
                return False
            with table.flag_lock:
                if not table.allocated_flags[b]:
                    table.allocated_flags[b] = True
                    break  # this caller won the allocation
            # someone else holds the flag: wait for publication or rollback
            _publication_backoff(attempt)
            attempt += 1
        try:
            storage = self._allocator(bucket_size(b, table.first_bucket_size, table.max_buckets))
        except BaseException:
            with table.flag_lock:
                table.allocated_flags[b] = False
            raise
        with self._capacity_lock:
            table.buckets[b] = storage
            self._capacity += len(storage)
        return True

    def _ensure_buckets(self, first_b: int, last_b: int) -> None:
        if last_b >= self.table.max_buckets:
            raise CapacityError(
                f"range needs bucket {last_b}, table holds {self.table.max_buckets}"
            )
        for b in range(first_b, last_b + 1):
            if self.table.buckets[b] is None:
                self.new_bucket(b)

    def push_back_batch(self, values, reserver=None) -> ReservedRange:
        """Append ``values`` at a freshly reserved contiguous range.

        The range is reserved through ``reserver`` (one shared-counter
        add by default), all buckets it touches are allocated before any
        write, and the values land at consecutive indices in argument
        order.  Concurrent batches never lose or duplicate elements; the
        inserted range becomes readable after the caller-side epoch
        barrier.
        """
        vals = np.asarray(values, dtype=self.dtype)
        if vals.ndim != 1:
            vals = vals.reshape(-1)
        rng = (reserver or _DEFAULT_RESERVER).reserve(self._size, len(vals))
        if rng.count:
            self._write_range(rng, vals)
        return rng

    def _write_range(self, rng: ReservedRange, vals: np.ndarray) -> None:
        fb = self.table.first_bucket_size
        first_b, _ = locate(rng.start, fb)
        last_b, _ = locate(rng.end - 1, fb)
        self._ensure_buckets(first_b, last_b)
        buckets = self.table.buckets
        pos = 0
        i = rng.start
        while i < rng.end:
            b, off = locate(i, fb)
            n = min((fb << b) - off, rng.end - i)
            buckets[b][off : off + n] = vals[pos : pos + n]
            pos += n
            i += n

    def reserve(self, min_capacity: int) -> None:
        """Pre-allocate the minimal set of buckets so capacity >= ``min_capacity``."""
        k = min_buckets_for(min_capacity, self.table.first_bucket_size)
        if k > self.table.max_buckets:
            raise CapacityError(
                f"capacity {min_capacity} needs {k} buckets, table holds {self.table.max_buckets}"
            )
        if k:
            self._ensure_buckets(0, k - 1)

    def _bucket_for_read(self, i: int) -> tuple[np.ndarray, int]:
        if not 0 <= i < self.size:
            raise IndexError(f"index {i} outside committed size {self.size}")
        b, off = locate(i, self.table.first_bucket_size)
        bucket = self.table.buckets[b]
        if bucket is None:
            raise RuntimeError(
                f"index {i} is reserved but bucket {b} is unpublished; "
                "synchronize at an epoch boundary before reading"
            )
        return bucket, off

    def get(self, i: int):
        bucket, off = self._bucket_for_read(i)
        return bucket[off]

    def set(self, i: int, value) -> None:
        bucket, off = self._bucket_for_read(i)
        bucket[off] = value

    def iter_segments(self, stop: int | None = None, start: int = 0) -> Iterator[np.ndarray]:
        """Yield writable storage views covering local indices [start, stop).

        Views are yielded in ascending index order, one per touched
        bucket, so iterating them is an in-order walk of the elements.
        """
        stop = self.size if stop is None else stop
        fb = self.table.first_bucket_size
        i = start
        while i < stop:
            b, off = locate(i, fb)
            bucket = self.table.buckets[b]
            if bucket is None:
                raise RuntimeError(f"bucket {b} unpublished while walking [{start}, {stop})")
            n = min((fb << b) - off, stop - i)
            yield bucket[off : off + n]
            i += n

    def to_numpy(self, stop: int | None = None) -> np.ndarray:
        """Copy local indices [0, stop) into one contiguous array."""
        segments = list(self.iter_segments(stop))
        if not segments:
            return np.empty(0, dtype=self.dtype)
        return np.concatenate(segments)

    def __repr__(self) -> str:
        return (
            f"ShardVector(size={self.size}, capacity={self.capacity}, "
            f"fb={self.table.first_bucket_size})"
        )
