"""Durable record storage: an append-only newline-delimited record file with
atomic rewrites plus a batching queue that a background worker drains."""

from __future__ import annotations

import threading
import time
from pathlib import Path
from typing import Callable

from ..core import GameRecord


class StoreUnavailable(Exception):
    """The store could not persist a batch; records stay queued."""


class RecordStore:
    """Newline-delimited GameRecord file, deduplicated by record_id.

    Writes go through a temp file and rename so a crash never leaves a
    half-written store; re-appending an already-persisted record_id is a
    no-op, which makes flush retries idempotent.
    """

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        self._lock = threading.Lock()
        self._ids: set[str] = set()
        if self.path.exists():
            for line in self.path.read_text().splitlines():
                if line.strip():
                    self._ids.add(GameRecord.from_json(line).record_id)

    def __len__(self) -> int:
        with self._lock:
            return len(self._ids)

    def has(self, record_id: str) -> bool:
        with self._lock:
            return record_id in self._ids

    def append_batch(self, records: list[GameRecord]) -> int:
        """Persist new records atomically; returns how many were new."""
        with self._lock:
            fresh: list[GameRecord] = []
            batch_ids: set[str] = set()
            for record in records:
                if record.record_id in self._ids or record.record_id in batch_ids:
                    continue
                batch_ids.add(record.record_id)
                fresh.append(record)
            if not fresh:
                return 0
            existing = self.path.read_text() if self.path.exists() else ""
            payload = existing + "".join(r.to_json() + "\n" for r in fresh)
            tmp = self.path.with_suffix(self.path.suffix + ".tmp")
            tmp.write_text(payload)
            tmp.replace(self.path)
            self._ids.update(r.record_id for r in fresh)
            return len(fresh)

    def all_records(self) -> list[GameRecord]:
        if not self.path.exists():
            return []
        return [GameRecord.from_json(line) for line in self.path.read_text().splitlines() if line.strip()]


class SyncQueue:
    """Pending records awaiting persistence, drained in arrival order."""

    def __init__(self, store: RecordStore, flush_interval: float = 5.0, batch_size: int = 50) -> None:
        self.store = store
        self.flush_interval = flush_interval
        self.batch_size = batch_size
        self._pending: list[GameRecord] = []
        self._lock = threading.Lock()

    def enqueue(self, record: GameRecord) -> None:
        with self._lock:
            self._pending.append(record)

    @property
    def pending_count(self) -> int:
        with self._lock:
            return len(self._pending)

    def flush(self) -> int:
        """Drain everything pending in batch_size chunks; returns records
        newly persisted.  On store failure the unpersisted tail is retained
        in order for the next attempt."""
        with self._lock:
            pending = self._pending
            self._pending = []
        persisted = 0
        index = 0
        try:
            while index < len(pending):
                batch = pending[index : index + self.batch_size]
                persisted += self.store.append_batch(batch)
                index += len(batch)
        except StoreUnavailable:
            with self._lock:
                self._pending = pending[index:] + self._pending
            raise
        return persisted


class FlushWorker(threading.Thread):
    """Background drain loop; ``stop()`` flushes whatever is left.

    ``flush`` may be the queue's own flush or a wrapper that also rewrites
    derived snapshots (the service passes its leaderboard-snapshotting
    flush here).
    """

    def __init__(self, queue: SyncQueue, flush: Callable[[], int] | None = None) -> None:
        super().__init__(daemon=True, name="record-flush")
        self.queue = queue
        self.flush = flush if flush is not None else queue.flush
        self._halt = threading.Event()

    def run(self) -> None:
        while not self._halt.wait(self.queue.flush_interval):
            try:
                self.flush()
            except StoreUnavailable:
                pass  # retained; retry next tick

    def stop(self, drain: bool = True) -> None:
        self._halt.set()
        if self.is_alive():
            self.join(timeout=self.queue.flush_interval + 5)
        if drain:
            deadline = time.monotonic() + 10
            while self.queue.pending_count and time.monotonic() < deadline:
                try:
                    self.flush()
                except StoreUnavailable:
                    time.sleep(0.2)
