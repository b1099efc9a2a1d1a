"""Process-pool helpers: deterministic parallel maps with pure per-item work."""

from __future__ import annotations

import multiprocessing as mp
import os
from typing import Callable, Iterable, Sequence


def cpu_jobs(jobs: int | None) -> int:
    if jobs is None or jobs <= 0:
        return os.cpu_count() or 1
    return jobs


def parallel_map(fn: Callable, items: Sequence, jobs: int | None = None, chunksize: int = 1):
    """Order-preserving map over a fork pool (falls back to serial)."""
    jobs = cpu_jobs(jobs)
    if jobs == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    ctx = mp.get_context("fork")
    with ctx.Pool(processes=min(jobs, len(items))) as pool:
        return pool.map(fn, items, chunksize=chunksize)


def parallel_any(fn: Callable, items: Sequence, jobs: int | None = None):
    """First truthy fn(item) (early exit), or None."""
    jobs = cpu_jobs(jobs)
    if jobs == 1 or len(items) <= 1:
        for x in items:
            r = fn(x)
            if r:
                return r
        return None
    ctx = mp.get_context("fork")
    with ctx.Pool(processes=min(jobs, len(items))) as pool:
        for r in pool.imap_unordered(fn, items):
            if r:
                pool.terminate()
                return r
    return None
