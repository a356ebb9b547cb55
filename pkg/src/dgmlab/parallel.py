"""Worker pool for the independent block/grid sweeps.

All lab operations are pure, so sweeps are embarrassingly parallel.  The
``DGM_THREADS`` environment variable caps the worker count; results keep
the input order, so reductions stay deterministic.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

_MAX_WORKERS = 32


def worker_count() -> int:
    raw = os.environ.get("DGM_THREADS", "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"DGM_THREADS must be an integer, got {raw!r}") from None
        return max(1, min(n, _MAX_WORKERS))
    return max(1, min(os.cpu_count() or 1, _MAX_WORKERS))


def pmap(fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """Map preserving order, threaded when it can pay off."""
    n = worker_count()
    if n <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
