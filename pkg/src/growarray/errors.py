"""Exception types shared across the structures."""


class CapacityError(RuntimeError):
    """A fixed capacity or the bucket table would be exceeded."""


class ShardInsertError(RuntimeError):
    """Some shards of a parallel insert failed; the commit was withheld.

    Elements pushed into the successful shards stay reserved in those
    shards but are not visible through the global directory.
    """

    def __init__(self, failures: dict[int, BaseException], succeeded: list[int]):
        self.failures = failures
        self.succeeded = succeeded
        names = ", ".join(f"{s}: {e!r}" for s, e in sorted(failures.items()))
        super().__init__(
            f"insert failed on {len(failures)} shard(s) ({names}); "
            f"{len(succeeded)} shard(s) succeeded; commit withheld"
        )


class TraversalError(RuntimeError):
    """A traversal visited every shard but the operation failed on some."""

    def __init__(self, failures: dict[int, BaseException]):
        self.failures = failures
        names = ", ".join(f"{s}: {e!r}" for s, e in sorted(failures.items()))
        super().__init__(f"traversal op failed on shard(s) {names}")
