"""Order-preserving parallel map capped by ``DIROPS_THREADS``."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count(requested: int | None = None) -> int:
    if requested is not None:
        return max(1, int(requested))
    raw = os.environ.get("DIROPS_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def ordered_map(fn, items, workers: int | None = None) -> list:
    items = list(items)
    n = worker_count(workers)
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
