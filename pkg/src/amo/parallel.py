"""Thread-pool helper shared by the sweeps (``AMO_THREADS`` caps the pool, 0 = auto)."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV_VAR = "AMO_THREADS"


def thread_count(requested: int | None = None) -> int:
    if requested is None:
        raw = os.environ.get(ENV_VAR, "1")
        try:
            requested = int(raw)
        except ValueError:
            raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
    if requested < 0:
        raise ValueError(f"thread count must be >= 0, got {requested}")
    return requested or (os.cpu_count() or 1)


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    """``[fn(x) for x in items]``, optionally on a thread pool; output order always follows input."""
    items = list(items)
    n = thread_count(workers)
    if n == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
