# this_file: src/fraccalc/parallel.py
"""Ordered thread-pool map sized by ``FRACCALC_THREADS``."""

import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from loguru import logger

from fraccalc.errors import SpecError

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "FRACCALC_THREADS"


def worker_count() -> int:
    """Worker threads to use; ``FRACCALC_THREADS`` unset or 0 means all cores.

    Raises:
        SpecError: If the variable is not a non-negative integer.
    """
    raw = os.environ.get(THREADS_ENV, "").strip()
    cores = os.cpu_count() or 1
    if not raw:
        return cores
    try:
        requested = int(raw)
    except ValueError as e:
        msg = f"{THREADS_ENV} must be a non-negative integer, got '{raw}'"
        raise SpecError(msg) from e
    if requested < 0:
        msg = f"{THREADS_ENV} must be a non-negative integer, got '{raw}'"
        raise SpecError(msg)
    return cores if requested == 0 else requested


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """``[fn(x) for x in items]``, spread over a thread pool; order is preserved.

    Runs inline with a single worker or a single item. The first exception
    raised by ``fn`` propagates.
    """
    work = list(items)
    workers = min(worker_count(), len(work))
    if workers <= 1:
        return [fn(item) for item in work]
    logger.debug("mapping {} items over {} threads", len(work), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, work))
