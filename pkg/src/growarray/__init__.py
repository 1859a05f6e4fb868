"""Concurrency-safe growable arrays built from sharded doubling-bucket
vectors, with baseline structures, a capacity-planning model and a
benchmark CLI."""

from .baselines import ChunkTableArray, DoublingArray, StaticArray
from .bucket_vector import (
    MAX_BUCKETS,
    BucketTable,
    ShardVector,
    bucket_size,
    capacity_of,
    locate,
    min_buckets_for,
)
from .errors import CapacityError, ShardInsertError, TraversalError
from .insert_index import (
    AtomicCounter,
    AtomicReserver,
    LanePlan,
    ReservedRange,
    ScanReserver,
    atomic_reserve,
    exclusive_scan,
    scan_reserve,
)
from .memory_model import (
    MemoryModelParams,
    MemoryReport,
    ggarray_capacity_for,
    normal_quantile,
    run_model,
    sharded_capacity_elements,
    static_requirement,
)
from .sharded_array import GrowableArray, split_batches

__all__ = [
    "AtomicCounter",
    "AtomicReserver",
    "BucketTable",
    "CapacityError",
    "ChunkTableArray",
    "DoublingArray",
    "GrowableArray",
    "LanePlan",
    "MAX_BUCKETS",
    "MemoryModelParams",
    "MemoryReport",
    "ReservedRange",
    "ScanReserver",
    "ShardInsertError",
    "ShardVector",
    "StaticArray",
    "TraversalError",
    "atomic_reserve",
    "bucket_size",
    "capacity_of",
    "exclusive_scan",
    "ggarray_capacity_for",
    "locate",
    "min_buckets_for",
    "normal_quantile",
    "run_model",
    "scan_reserve",
    "sharded_capacity_elements",
    "split_batches",
    "static_requirement",
]

__version__ = "0.1.0"
