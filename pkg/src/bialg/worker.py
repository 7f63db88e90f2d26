"""Threaded enumeration runner with progress reporting and early cancellation."""

import logging
import threading
import time
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum, auto
from typing import Any, Callable, Dict, List, Optional

from tqdm import tqdm

logger = logging.getLogger(__name__)


class ChunkStatus(Enum):
    """Chunk status enumeration."""

    QUEUED = auto()
    RUNNING = auto()
    COMPLETED = auto()
    FAILED = auto()
    CANCELLED = auto()


@dataclass
class ChunkResult:
    """Result of one contiguous slice [start, stop) of an enumeration."""

    start: int
    stop: int
    status: ChunkStatus = ChunkStatus.QUEUED
    values: List[Any] = field(default_factory=list)
    error_message: str = ""
    duration: float = 0.0


class EnumerationError(Exception):
    """Raised when a chunk of an enumeration fails."""

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(self.message)


class EnumerationWorker:
    """
    Evaluate a function over candidate indices 0..total-1 on a thread pool.

    Results are merged back in index order, so the output never depends on
    scheduling.
    """

    def __init__(
        self,
        max_workers: int = 4,
        chunk_size: int = 1024,
        show_progress: bool = True,
    ) -> None:
        """Initialize worker with pool size and chunking."""
        self.max_workers = max(1, max_workers)
        self.chunk_size = max(1, chunk_size)
        self.show_progress = show_progress

        self._chunks: Dict[int, ChunkResult] = {}
        self._cancel_event = threading.Event()
        self._lock = threading.RLock()

    @classmethod
    def from_settings(cls) -> "EnumerationWorker":
        from .settings import get_settings

        search = get_settings().search
        return cls(search.max_workers, search.chunk_size, search.show_progress)

    def cancel(self) -> None:
        """Stop handing out work; running chunks finish their current candidate."""
        self._cancel_event.set()

    def get_stats(self) -> Dict[str, int]:
        """Get chunk statistics."""
        with self._lock:
            stats = {status.name.lower(): 0 for status in ChunkStatus}
            for chunk in self._chunks.values():
                stats[chunk.status.name.lower()] += 1
            stats["total"] = len(self._chunks)
            return stats

    def _run_chunk(
        self,
        chunk: ChunkResult,
        func: Callable[[int], Optional[Any]],
        progress: Optional[tqdm],
        stop_at_first: bool,
    ) -> ChunkResult:
        started = time.time()
        with self._lock:
            if chunk.status is ChunkStatus.CANCELLED:
                return chunk
            chunk.status = ChunkStatus.RUNNING
        try:
            for index in range(chunk.start, chunk.stop):
                if self._cancel_event.is_set():
                    with self._lock:
                        chunk.status = ChunkStatus.CANCELLED
                    return chunk
                value = func(index)
                if value is not None:
                    chunk.values.append(value)
                    if stop_at_first:
                        break
            if progress is not None:
                progress.update(chunk.stop - chunk.start)
            with self._lock:
                chunk.status = ChunkStatus.COMPLETED
        except Exception as e:
            logger.error(f"Chunk [{chunk.start}, {chunk.stop}) failed: {str(e)}")
            with self._lock:
                chunk.status = ChunkStatus.FAILED
                chunk.error_message = str(e)
        finally:
            chunk.duration = time.time() - started
        return chunk

    def _execute(
        self,
        func: Callable[[int], Optional[Any]],
        total: int,
        desc: str,
        stop_at_first: bool,
    ) -> List[ChunkResult]:
        self._cancel_event.clear()
        with self._lock:
            self._chunks = {
                start: ChunkResult(start, min(start + self.chunk_size, total))
                for start in range(0, total, self.chunk_size)
            }
            ordered = [self._chunks[start] for start in sorted(self._chunks)]

        logger.info(f"{desc}: {total} candidates in {len(ordered)} chunks on {self.max_workers} workers")
        progress = tqdm(total=total, desc=desc, unit="cand", leave=False) if self.show_progress else None
        try:
            with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                futures: List[Future[ChunkResult]] = [
                    executor.submit(self._run_chunk, chunk, func, progress, stop_at_first)
                    for chunk in ordered
                ]
                if stop_at_first:
                    # Lower chunks still run to completion so the earliest hit wins.
                    for position, future in enumerate(futures):
                        if future.result().values:
                            for later in ordered[position + 1 :]:
                                with self._lock:
                                    if later.status is ChunkStatus.QUEUED:
                                        later.status = ChunkStatus.CANCELLED
                            self.cancel()
                            break
                for future in futures:
                    future.result()
        finally:
            if progress is not None:
                progress.close()

        failed = [chunk for chunk in ordered if chunk.status is ChunkStatus.FAILED]
        if failed:
            raise EnumerationError(
                f"{desc}: chunk [{failed[0].start}, {failed[0].stop}) failed: {failed[0].error_message}"
            )
        return ordered

    def map_ordered(
        self,
        func: Callable[[int], Optional[Any]],
        total: int,
        desc: str = "enumerating",
    ) -> List[Any]:
        """Collect every non-None func(index), in index order."""
        if total <= 0:
            return []
        chunks = self._execute(func, total, desc, stop_at_first=False)
        return [value for chunk in chunks for value in chunk.values]

    def first(
        self,
        func: Callable[[int], Optional[Any]],
        total: int,
        desc: str = "searching",
    ) -> Optional[Any]:
        """The non-None func(index) with the smallest index, or None."""
        if total <= 0:
            return None
        chunks = self._execute(func, total, desc, stop_at_first=True)
        for chunk in chunks:
            if chunk.status is ChunkStatus.CANCELLED:
                continue
            if chunk.values:
                return chunk.values[0]
        return None
