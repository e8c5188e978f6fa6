from asyncio import Condition
import asyncio
from collections.abc import Callable, Sequence
from typing import TypeVar

from app.core.logging import get_logger

logger = get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class RowSemaphore:
    """Counting limiter on the rows in flight."""

    def __init__(self, total_limit: int) -> None:
        self.total_limit = total_limit
        self.total_tasks = 0
        self._condition = Condition()

    async def acquire(self):
        async with self._condition:
            while self.total_tasks >= self.total_limit:
                await self._condition.wait()
            self.total_tasks += 1

    async def release(self):
        async with self._condition:
            self.total_tasks -= 1
            self._condition.notify_all()

    async def __aenter__(self) -> "RowSemaphore":
        await self.acquire()
        return self

    async def __aexit__(self, *exc_info) -> None:
        await self.release()


class RowWorkerPool:
    """Evaluate independent rows of a scan, at most `threads` at a time.

    Results come back in submission order, so output stays row-major
    no matter how the rows were scheduled.
    """

    def __init__(self, threads: int = 1) -> None:
        if threads < 1:
            raise ValueError(f"threads must be positive, got {threads}")
        self.threads = threads

    def map(self, job: Callable[[T], R], rows: Sequence[T]) -> list[R]:
        if self.threads == 1 or len(rows) <= 1:
            return [job(row) for row in rows]
        return asyncio.run(self._gather(job, rows))

    async def _gather(self, job: Callable[[T], R], rows: Sequence[T]) -> list[R]:
        semaphore = RowSemaphore(self.threads)
        logger.debug("Start %d rows on %d threads", len(rows), self.threads)
        tasks = [asyncio.create_task(self.task_runner(semaphore, job, row)) for row in rows]
        return list(await asyncio.gather(*tasks))

    async def task_runner(self, semaphore: RowSemaphore, job: Callable[[T], R], row: T) -> R:
        async with semaphore:
            return await asyncio.to_thread(job, row)
