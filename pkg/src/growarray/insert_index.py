"""Index-reservation strategies for concurrent inserters.

Every inserter needs a private, contiguous slice of indices past the
current size of the target structure.  Two ways to hand those out are
implemented here: hitting a shared counter once per reservation
(`atomic_reserve`), and combining the counts of a whole round of lanes
with an exclusive prefix-sum so the counter is only hit once per group
of lanes (`scan_reserve`).  Both hand back the same set of indices for
the same per-lane counts; they differ only in how much traffic the
shared counter sees.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

__all__ = [
    "DEFAULT_GROUP_SIZE",
    "AtomicCounter",
    "ReservedRange",
    "LanePlan",
    "exclusive_scan",
    "atomic_reserve",
    "scan_reserve",
    "AtomicReserver",
    "ScanReserver",
]

DEFAULT_GROUP_SIZE = 32


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


class AtomicCounter:
    """Lock-backed shared counter with fetch-and-add.

    ``op_count`` records how many times the counter was hit; it is the
    contention metric the reservation strategies are compared on, so
    every ``fetch_add`` counts, including zero-sized ones.
    """

    __slots__ = ("_value", "_lock", "op_count")

    def __init__(self, value: int = 0):
        self._value = value
        self.op_count = 0
        self._lock = threading.Lock()

    def fetch_add(self, amount: int) -> int:
        """Advance the counter by ``amount`` and return the prior value."""
        with self._lock:
            prev = self._value
            self._value += amount
            self.op_count += 1
            return prev

    @property
    def value(self) -> int:
        with self._lock:
            return self._value

    def __repr__(self) -> str:
        return f"AtomicCounter({self.value})"


@dataclass(frozen=True)
class ReservedRange:
    """Contiguous index interval [start, start+count) owned by one inserter."""

    start: int
    count: int

    @property
    def end(self) -> int:
        return self.start + self.count

    def indices(self) -> range:
        return range(self.start, self.start + self.count)


@dataclass(frozen=True)
class LanePlan:
    """Per-lane insertion counts for one reservation round.

    The classic form is a 0/1 vector (each lane inserts at most one
    element); arbitrary non-negative counts are allowed so one lane can
    reserve a whole batch.
    """

    counts: tuple[int, ...]
    group_size: int = DEFAULT_GROUP_SIZE

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if any(c < 0 for c in self.counts):
            raise ValueError("lane counts must be non-negative")
        if not _is_pow2(self.group_size):
            raise ValueError(f"group_size must be a power of two, got {self.group_size}")

    @property
    def lanes(self) -> int:
        return len(self.counts)


def exclusive_scan(counts) -> list[int]:
    """Exclusive prefix-sum: out[0] = 0, out[j] = out[j-1] + counts[j-1]."""
    out = []
    total = 0
    for c in counts:
        out.append(total)
        total += c
    return out


def atomic_reserve(counter: AtomicCounter, count: int) -> ReservedRange:
    """Reserve ``count`` indices with a single counter operation."""
    if count < 0:
        raise ValueError("count must be non-negative")
    return ReservedRange(counter.fetch_add(count), count)


def scan_reserve(plan: LanePlan, counter: AtomicCounter) -> list[ReservedRange]:
    """Reserve ranges for a whole round of lanes.

    Lane counts are prescanned group-locally; the shared counter is then
    advanced once per group by the group total, so a round costs exactly
    ceil(lanes / group_size) counter operations.  Lane j of a group gets
    [group_base + prescan(j), +counts[j]).  Concurrent rounds on the same
    counter interleave safely because each group claims its slice with a
    single fetch-and-add.
    """
    ranges: list[ReservedRange] = [None] * plan.lanes  # type: ignore[list-item]
    gs = plan.group_size
    for g0 in range(0, plan.lanes, gs):
        group = plan.counts[g0 : g0 + gs]
        offsets = exclusive_scan(group)
        base = counter.fetch_add(sum(group))
        for j, (off, c) in enumerate(zip(offsets, group)):
            ranges[g0 + j] = ReservedRange(base + off, c)
    return ranges


class AtomicReserver:
    """Strategy object: one counter operation per reservation."""

    def reserve(self, counter: AtomicCounter, count: int) -> ReservedRange:
        return atomic_reserve(counter, count)


class ScanReserver:
    """Strategy object: ``lanes`` concurrent callers form a scan round.

    Callers block until the round is full; the last arrival combines all
    counts with `scan_reserve` and every caller leaves with its own
    range.  Every round must be joined by exactly ``lanes`` callers
    passing the same counter; lanes that have nothing to insert still
    participate with a zero count.  Distinct rounds on the same counter
    (e.g. from two reserver instances) may overlap safely.
    """

    def __init__(self, lanes: int, group_size: int = DEFAULT_GROUP_SIZE):
        if lanes < 1:
            raise ValueError("lanes must be >= 1")
        if not _is_pow2(group_size):
            raise ValueError(f"group_size must be a power of two, got {group_size}")
        self._lanes = lanes
        self._group_size = group_size
        self._cv = threading.Condition()
        self._arrived = 0
        self._departed = lanes  # previous round fully drained
        self._counts = [0] * lanes
        self._ranges: list[ReservedRange] = []
        self._counter: AtomicCounter | None = None
        self._generation = 0

    @property
    def lanes(self) -> int:
        return self._lanes

    def reserve(self, counter: AtomicCounter, count: int) -> ReservedRange:
        if count < 0:
            raise ValueError("count must be non-negative")
        with self._cv:
            while self._departed < self._lanes:
                self._cv.wait()
            if self._counter is None:
                self._counter = counter
            elif counter is not self._counter:
                raise ValueError("all lanes of a round must share one counter")
            lane = self._arrived
            self._arrived += 1
            self._counts[lane] = count
            if self._arrived == self._lanes:
                plan = LanePlan(tuple(self._counts), self._group_size)
                self._ranges = scan_reserve(plan, counter)
                self._generation += 1
                self._departed = 0
                self._cv.notify_all()
            else:
                generation = self._generation
                while self._generation == generation:
                    self._cv.wait()
            rng = self._ranges[lane]
            self._departed += 1
            if self._departed == self._lanes:
                self._arrived = 0
                self._counter = None
                self._cv.notify_all()
            return rng
