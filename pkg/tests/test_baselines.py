"""Baseline structures: fixed array, copying doubling array, no-copy
chunk table, and cross-structure agreement."""

import threading

import numpy as np
import pytest

from growarray.baselines import ChunkTableArray, DoublingArray, StaticArray
from growarray.errors import CapacityError
from growarray.insert_index import AtomicReserver, LanePlan, scan_reserve
from growarray.sharded_array import GrowableArray, split_batches


def run_threads(fns):
    threads = [threading.Thread(target=fn) for fn in fns]
    for t in threads:
        t.start()
    for t in threads:
        t.join()


class TestStaticArray:
    def test_fill_to_capacity_then_overflow(self):
        arr = StaticArray(10, dtype=np.int64)
        arr.insert_batch(np.arange(10))
        assert arr.size == 10
        with pytest.raises(CapacityError):
            arr.insert_batch([99])

    def test_concurrent_inserts_conserve_values(self):
        arr = StaticArray(800, dtype=np.int64)
        batches = [1000 * t + np.arange(100) for t in range(8)]
        run_threads([lambda b=b: arr.insert_batch(b) for b in batches])
        assert arr.size == 800
        assert np.array_equal(np.sort(arr.to_numpy()), np.sort(np.concatenate(batches)))

    def test_reserver_choice_reaches_same_indices(self):
        flavors = []
        for flavor in ("atomic", "scan"):
            arr = StaticArray(30, dtype=np.int64)
            if flavor == "atomic":
                reserver = AtomicReserver()
                for batch in (np.arange(10), np.arange(10, 25), np.arange(25, 30)):
                    arr.insert_batch(batch, reserver=reserver)
            else:
                counts = (10, 15, 5)
                ranges = scan_reserve(LanePlan(counts, group_size=2), arr.size_counter)
                chunks = (np.arange(10), np.arange(10, 25), np.arange(25, 30))
                for rng, chunk in zip(ranges, chunks):
                    arr._storage[rng.start : rng.end] = chunk
            flavors.append(arr.to_numpy())
        assert np.array_equal(np.sort(flavors[0]), np.sort(flavors[1]))

    def test_never_allocates_after_construction(self):
        arr = StaticArray(16, dtype=np.int64)
        storage_id = id(arr._storage)
        arr.insert_batch(np.arange(16))
        assert id(arr._storage) == storage_id
        assert arr.capacity == 16

    def test_get_set_bounds(self):
        arr = StaticArray(4, dtype=np.int64)
        arr.insert_batch([1, 2])
        arr.set(0, 5)
        assert arr.get(0) == 5
        with pytest.raises(IndexError):
            arr.get(2)


class TestDoublingArray:
    def test_resize_doubles_and_preserves(self):
        arr = DoublingArray(initial_capacity=4, dtype=np.int64)
        arr.insert_batch([1, 2, 3, 4])
        arr.resize(5)
        assert arr.capacity == 8
        assert np.array_equal(arr.to_numpy(), [1, 2, 3, 4])
        assert arr.elements_copied == 4

    def test_resize_noop_when_capacity_suffices(self):
        arr = DoublingArray(initial_capacity=8, dtype=np.int64)
        arr.insert_batch([1])
        arr.resize(8)
        assert arr.elements_copied == 0

    def test_insert_without_resize_fails(self):
        arr = DoublingArray(initial_capacity=2, dtype=np.int64)
        with pytest.raises(CapacityError):
            arr.insert_batch([1, 2, 3])

    def test_sequential_push_amortization(self):
        n = 1000
        arr = DoublingArray(initial_capacity=1, dtype=np.int64)
        for v in range(n):
            arr.push_back(v)
        assert arr.size == n
        assert arr.elements_copied < 2 * n
        assert np.array_equal(arr.to_numpy(), np.arange(n))

    def test_capacity_is_doubling_multiple_of_initial(self):
        arr = DoublingArray(initial_capacity=3, dtype=np.int64)
        arr.resize(20)
        assert arr.capacity == 24  # 3 * 2**3


class TestChunkTableArray:
    def test_growth_appends_without_copying(self):
        arr = ChunkTableArray(chunk_size=4, dtype=np.int64)
        arr.resize(4)
        arr.insert_batch([1, 2, 3, 4])
        first_chunk = arr._chunks[0]
        arr.resize(12)
        assert len(arr._chunks) == 3
        assert arr._chunks[0] is first_chunk
        assert np.array_equal(arr.to_numpy(), [1, 2, 3, 4])
        assert arr.elements_copied == 0

    def test_insert_across_chunk_boundary(self):
        arr = ChunkTableArray(chunk_size=4, dtype=np.int64)
        arr.resize(10)
        arr.insert_batch(np.arange(10))
        assert np.array_equal(arr.to_numpy(), np.arange(10))
        assert [int(arr.get(i)) for i in (3, 4, 7, 8)] == [3, 4, 7, 8]

    def test_indexing_is_contiguous(self):
        arr = ChunkTableArray(chunk_size=3, dtype=np.int64)
        arr.resize(7)
        arr.insert_batch(np.arange(7))
        for i in range(7):
            arr.set(i, i * 10)
        assert np.array_equal(arr.to_numpy(), np.arange(7) * 10)

    def test_overflow_without_resize(self):
        arr = ChunkTableArray(chunk_size=4, dtype=np.int64)
        with pytest.raises(CapacityError):
            arr.insert_batch([1])

    def test_concurrent_inserts_conserve_values(self):
        arr = ChunkTableArray(chunk_size=64, dtype=np.int64)
        arr.resize(600)
        batches = [1000 * t + np.arange(100) for t in range(6)]
        run_threads([lambda b=b: arr.insert_batch(b) for b in batches])
        assert np.array_equal(np.sort(arr.to_numpy()), np.sort(np.concatenate(batches)))


class TestCrossStructureAgreement:
    def test_same_script_same_contents(self):
        """All four structures driven by one operation script end equal."""
        rng = np.random.default_rng(11)
        script = [rng.integers(-50, 50, size=rng.integers(0, 40)) for _ in range(10)]
        total = sum(len(b) for b in script)

        static = StaticArray(total, dtype=np.int64)
        doubling = DoublingArray(initial_capacity=1, dtype=np.int64)
        chunk = ChunkTableArray(chunk_size=16, dtype=np.int64)
        shard = GrowableArray(shards=4, first_bucket_size=2, dtype=np.int64)

        for batch in script:
            static.insert_batch(batch)
            doubling.resize(doubling.size + len(batch))
            doubling.insert_batch(batch)
            chunk.resize(chunk.size + len(batch))
            chunk.insert_batch(batch)
            shard.insert_parallel(split_batches(batch, 4))

        reference = np.sort(np.concatenate(script))
        for structure in (static, doubling, chunk):
            assert np.array_equal(np.sort(structure.to_numpy()), reference)
        assert np.array_equal(np.sort(shard.flatten()), reference)
