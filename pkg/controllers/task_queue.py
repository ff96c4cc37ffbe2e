from __future__ import annotations

import logging
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from typing import TypeVar

T = TypeVar("T")
R = TypeVar("R")


class TaskQueue:
    """Runs independent tasks on a process pool and returns results in submission order."""

    def __init__(self, jobs: int = 1, logger: logging.Logger | None = None) -> None:
        self.jobs = max(1, int(jobs))
        self._logger = logger or logging.getLogger("growth_lab.corpus")

    def map(self, target: Callable[[T], R], items: Iterable[T]) -> list[R]:
        """Apply ``target`` to every item; ``target`` must be a picklable module-level function."""
        work = list(items)
        if self.jobs == 1 or len(work) <= 1:
            return [target(item) for item in work]
        workers = min(self.jobs, len(work))
        self._logger.info("Dispatching %d tasks to %d worker processes", len(work), workers)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(target, work))
