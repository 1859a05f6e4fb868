"""Comparison structures the sharded array is measured against.

Three points on the resize-cost spectrum: a fixed pre-allocated array
that can only fail when it runs out, a contiguous doubling array that
copies everything on each resize (the host-driven resize analog), and a
chunk-table array whose growth appends fixed-size chunks behind a
contiguous virtual index, copying nothing (the address-remapping
analog).
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

from .errors import CapacityError
from .insert_index import AtomicCounter, AtomicReserver, ReservedRange

__all__ = ["StaticArray", "DoublingArray", "ChunkTableArray", "DEFAULT_CHUNK_SIZE"]

# Large power of two, echoing the 2 MiB granularity of real remapping
# APIs while staying desk-friendly.
DEFAULT_CHUNK_SIZE = 64 * 1024

_DEFAULT_RESERVER = AtomicReserver()


class StaticArray:
    """Pre-allocated fixed-capacity array with concurrent batch inserts.

    Never allocates after construction.  Overflow surfaces as a
    `CapacityError` instead of a wild write; after an overflow the
    array keeps rejecting inserts.
    """

    def __init__(self, capacity: int, dtype=np.int64):
        if capacity < 0:
            raise ValueError("capacity must be non-negative")
        self.dtype = np.dtype(dtype)
        self._storage = np.zeros(capacity, dtype=self.dtype)
        self._size = AtomicCounter(0)

    @property
    def capacity(self) -> int:
        return len(self._storage)

    @property
    def size(self) -> int:
        return min(self._size.value, len(self._storage))

    def __len__(self) -> int:
        return self.size

    @property
    def size_counter(self) -> AtomicCounter:
        return self._size

    def insert_batch(self, values, reserver=None) -> ReservedRange:
        """Reserve and write a contiguous range; no allocation ever."""
        vals = np.asarray(values, dtype=self.dtype)
        if self._size.value + len(vals) > len(self._storage):
            raise CapacityError(
                f"insert of {len(vals)} exceeds capacity {len(self._storage)}"
            )
        rng = (reserver or _DEFAULT_RESERVER).reserve(self._size, len(vals))
        if rng.end > len(self._storage):
            raise CapacityError(
                f"reservation [{rng.start}, {rng.end}) exceeds capacity {len(self._storage)}"
            )
        self._storage[rng.start : rng.end] = vals
        return rng

    def _check(self, i: int) -> None:
        if not 0 <= i < self.size:
            raise IndexError(f"index {i} outside size {self.size}")

    def get(self, i: int):
        self._check(i)
        return self._storage[i]

    def set(self, i: int, value) -> None:
        self._check(i)
        self._storage[i] = value

    def view(self) -> np.ndarray:
        """Writable view of the occupied prefix."""
        return self._storage[: self.size]

    def to_numpy(self) -> np.ndarray:
        return self._storage[: self.size].copy()


class DoublingArray:
    """Contiguous array that doubles and copies on resize.

    Resizing models a host-side stop-the-world step: it requires
    exclusive access and relocates every element, tallied in
    ``elements_copied``.  Inserts between resizes are concurrent-safe
    and never allocate.
    """

    def __init__(self, initial_capacity: int = 32, dtype=np.int64):
        if initial_capacity < 1:
            raise ValueError("initial_capacity must be >= 1")
        self.dtype = np.dtype(dtype)
        self._initial = initial_capacity
        self._storage = np.zeros(initial_capacity, dtype=self.dtype)
        self._size = AtomicCounter(0)
        self.elements_copied = 0

    @property
    def capacity(self) -> int:
        return len(self._storage)

    @property
    def size(self) -> int:
        return min(self._size.value, len(self._storage))

    def __len__(self) -> int:
        return self.size

    @property
    def size_counter(self) -> AtomicCounter:
        return self._size

    def resize(self, min_capacity: int) -> None:
        """Grow to the smallest doubling of the initial capacity covering
        ``min_capacity``; copies every element.  No-op when capacity
        already suffices.  Caller must hold exclusive access.
        """
        if min_capacity <= len(self._storage):
            return
        new_capacity = self._initial
        while new_capacity < min_capacity:
            new_capacity *= 2
        fresh = np.zeros(new_capacity, dtype=self.dtype)
        n = self.size
        fresh[:n] = self._storage[:n]
        self.elements_copied += n
        self._storage = fresh

    def insert_batch(self, values, reserver=None) -> ReservedRange:
        """As StaticArray.insert_batch; growth only happens via `resize`."""
        vals = np.asarray(values, dtype=self.dtype)
        if self._size.value + len(vals) > len(self._storage):
            raise CapacityError(
                f"insert of {len(vals)} exceeds capacity {len(self._storage)}; resize first"
            )
        rng = (reserver or _DEFAULT_RESERVER).reserve(self._size, len(vals))
        if rng.end > len(self._storage):
            raise CapacityError(
                f"reservation [{rng.start}, {rng.end}) exceeds capacity {len(self._storage)}"
            )
        self._storage[rng.start : rng.end] = vals
        return rng

    def push_back(self, value) -> int:
        """Sequential append that auto-doubles; for single-actor use."""
        n = self._size.value
        if n + 1 > len(self._storage):
            self.resize(n + 1)
        self._storage[n] = value
        self._size.fetch_add(1)
        return n

    def _check(self, i: int) -> None:
        if not 0 <= i < self.size:
            raise IndexError(f"index {i} outside size {self.size}")

    def get(self, i: int):
        self._check(i)
        return self._storage[i]

    def set(self, i: int, value) -> None:
        self._check(i)
        self._storage[i] = value

    def view(self) -> np.ndarray:
        return self._storage[: self.size]

    def to_numpy(self) -> np.ndarray:
        return self._storage[: self.size].copy()


class ChunkTableArray:
    """Equal-size chunk table behind a contiguous index space.

    Index g lives in chunk g // chunk_size at offset g % chunk_size.
    Growth appends chunks and never touches existing ones, so
    ``elements_copied`` stays zero by construction; it exists so the
    copy cost can be compared against `DoublingArray` directly.
    """

    def __init__(self, chunk_size: int = DEFAULT_CHUNK_SIZE, dtype=np.int64):
        if chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")
        self.chunk_size = chunk_size
        self.dtype = np.dtype(dtype)
        self._chunks: list[np.ndarray] = []
        self._size = AtomicCounter(0)
        self.elements_copied = 0

    @property
    def capacity(self) -> int:
        return len(self._chunks) * self.chunk_size

    @property
    def size(self) -> int:
        return min(self._size.value, self.capacity)

    def __len__(self) -> int:
        return self.size

    @property
    def size_counter(self) -> AtomicCounter:
        return self._size

    def resize(self, min_capacity: int) -> None:
        """Append chunks until capacity >= ``min_capacity``; copies nothing."""
        while self.capacity < min_capacity:
            self._chunks.append(np.zeros(self.chunk_size, dtype=self.dtype))

    def insert_batch(self, values, reserver=None) -> ReservedRange:
        vals = np.asarray(values, dtype=self.dtype)
        if self._size.value + len(vals) > self.capacity:
            raise CapacityError(
                f"insert of {len(vals)} exceeds capacity {self.capacity}; resize first"
            )
        rng = (reserver or _DEFAULT_RESERVER).reserve(self._size, len(vals))
        if rng.end > self.capacity:
            raise CapacityError(
                f"reservation [{rng.start}, {rng.end}) exceeds capacity {self.capacity}"
            )
        self._write_range(rng.start, vals)
        return rng

    def _write_range(self, start: int, vals: np.ndarray) -> None:
        cs = self.chunk_size
        pos = 0
        i = start
        end = start + len(vals)
        while i < end:
            c, off = divmod(i, cs)
            n = min(cs - off, end - i)
            self._chunks[c][off : off + n] = vals[pos : pos + n]
            pos += n
            i += n

    def _check(self, i: int) -> None:
        if not 0 <= i < self.size:
            raise IndexError(f"index {i} outside size {self.size}")

    def get(self, i: int):
        self._check(i)
        c, off = divmod(i, self.chunk_size)
        return self._chunks[c][off]

    def set(self, i: int, value) -> None:
        self._check(i)
        c, off = divmod(i, self.chunk_size)
        self._chunks[c][off] = value

    def chunk_views(self, stop: int | None = None) -> Iterator[np.ndarray]:
        """Yield writable per-chunk views covering [0, stop) in order."""
        stop = self.size if stop is None else stop
        cs = self.chunk_size
        i = 0
        while i < stop:
            c, off = divmod(i, cs)
            n = min(cs - off, stop - i)
            yield self._chunks[c][off : off + n]
            i += n

    def to_numpy(self) -> np.ndarray:
        views = list(self.chunk_views())
        if not views:
            return np.empty(0, dtype=self.dtype)
        return np.concatenate(views)
