"""Task assignment and submission state.

All mutations run under one lock and are written to the event log before
being applied, so concurrent annotator sessions serialize cleanly and a
restarted service rebuilds the identical state by replay.

Assignment policy: the first ``shared_pool_size`` items in the queue form
the shared agreement pool and are handed to up to ``rater_count``
distinct annotators each; every remaining item goes to exactly one
annotator. Hidden self-consistency probes are interleaved per annotator:
after every submitted real task the annotator accrues ``probe_rate`` of a
probe, and each whole probe re-issues the earliest of their own submitted
items not yet probed, under a fresh item id, linked by ``duplicate_of``.
An annotator only ever receives probes of items they themselves labelled.

A fetch with a submission still pending returns the same assignment
again instead of burning a new item, so clients can retry safely.
"""

from __future__ import annotations

import csv
import datetime
import io
import threading
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from ..collection import AnnotationRecord, serialize_collection
from ..errors import CollectionError
from ..taxonomy import CODE_ORDER, LabelVector, validate_label_vector
from .log import EventLog

ITEMS_HEADER = ("item_id", "source_id", "run_id", "source_text", "simplified_text")


@dataclass(frozen=True)
class Item:
    item_id: str
    source_id: str
    run_id: str
    source_text: str
    simplified_text: str


def parse_items(data: bytes | str, source: str = "items") -> list[Item]:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise CollectionError(["empty input: missing header row"], source=source) from None
    if tuple(header) != ITEMS_HEADER:
        raise CollectionError(
            [f"header must be {','.join(ITEMS_HEADER)}"], source=source
        )
    problems = []
    items = []
    seen = set()
    for row_num, row in enumerate(reader, start=1):
        if len(row) != len(ITEMS_HEADER):
            problems.append(f"row {row_num}: expected {len(ITEMS_HEADER)} fields, got {len(row)}")
            continue
        cells = dict(zip(ITEMS_HEADER, row))
        if not cells["item_id"]:
            problems.append(f"row {row_num}: empty item_id")
            continue
        if cells["item_id"] in seen:
            problems.append(f"row {row_num}: duplicate item_id {cells['item_id']!r}")
            continue
        seen.add(cells["item_id"])
        items.append(Item(**cells))
    if problems:
        raise CollectionError(problems, source=source)
    return items


def load_items(path: str | Path) -> list[Item]:
    return parse_items(Path(path).read_bytes(), source=str(path))


def serialize_items(items: list[Item]) -> bytes:
    def quote(text: str) -> str:
        return '"' + text.replace('"', '""') + '"'

    lines = [",".join(ITEMS_HEADER)]
    for item in items:
        lines.append(
            ",".join(
                [
                    item.item_id,
                    item.source_id,
                    item.run_id,
                    quote(item.source_text),
                    quote(item.simplified_text),
                ]
            )
        )
    return ("\n".join(lines) + "\n").encode("utf-8")


class UnknownAnnotatorError(LookupError):
    pass


class UnknownTaskError(LookupError):
    pass


class TaskOwnershipError(PermissionError):
    pass


class LabelValidationError(ValueError):
    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("invalid label vector: " + "; ".join(violations))


@dataclass(frozen=True)
class TaskAssignment:
    task_id: str
    item_id: str
    annotator_id: str
    source_text: str
    simplified_text: str
    issued_at: str
    is_probe: bool
    duplicate_of: str | None
    origin_item_id: str  # the queue item this task's texts come from

    def client_payload(self) -> dict:
        """What the annotator's client sees; probe identity stays hidden."""
        return {
            "task_id": self.task_id,
            "item_id": self.item_id,
            "annotator_id": self.annotator_id,
            "source_text": self.source_text,
            "simplified_text": self.simplified_text,
        }


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


class AnnotationStore:
    def __init__(
        self,
        items: list[Item],
        log: EventLog,
        probe_rate: float = 0.0,
        shared_pool_size: int = 0,
        rater_count: int = 1,
    ):
        self._lock = threading.Lock()
        self._items = list(items)
        self._item_index = {item.item_id: item for item in self._items}
        if len(self._item_index) != len(self._items):
            raise ValueError("duplicate item ids in the task queue")
        self._log = log
        self._probe_rate = Fraction(str(probe_rate))
        self._shared_pool_size = shared_pool_size
        self._rater_count = rater_count

        self._annotators: set[str] = set()
        self._assignees: dict[str, set[str]] = {item.item_id: set() for item in self._items}
        self._tasks: dict[str, TaskAssignment] = {}
        self._pending: dict[str, str | None] = {}
        self._latest_labels: dict[str, LabelVector] = {}
        self._submission_order: list[str] = []
        self._real_submitted: dict[str, int] = {}
        self._submitted_real_items: dict[str, list[str]] = {}
        self._probes_issued: dict[str, int] = {}
        self._probed_items: dict[str, set[str]] = {}
        self._task_seq = 0
        self._probe_seq = 0

        for event in log.replay():
            self._apply(event)

    # -- public API (each call: validate, log, apply) --------------------

    def register(self, annotator_id: str) -> bool:
        """Idempotently register an annotator; True when newly added."""
        if not annotator_id or annotator_id != annotator_id.strip():
            raise ValueError(f"bad annotator id: {annotator_id!r}")
        with self._lock:
            if annotator_id in self._annotators:
                return False
            event = {"type": "register", "annotator_id": annotator_id, "at": _now()}
            self._log.append(event)
            self._apply(event)
            return True

    def next_task(self, annotator_id: str) -> TaskAssignment | None:
        with self._lock:
            self._require_annotator(annotator_id)
            pending = self._pending.get(annotator_id)
            if pending is not None:
                return self._tasks[pending]
            event = self._plan_assignment(annotator_id)
            if event is None:
                return None
            self._log.append(event)
            self._apply(event)
            return self._tasks[event["task_id"]]

    def submit(self, task_id: str, annotator_id: str, labels: LabelVector) -> dict:
        with self._lock:
            self._require_annotator(annotator_id)
            task = self._tasks.get(task_id)
            if task is None:
                raise UnknownTaskError(f"unknown task: {task_id!r}")
            if task.annotator_id != annotator_id:
                raise TaskOwnershipError(
                    f"task {task_id!r} belongs to another annotator"
                )
            violations = validate_label_vector(labels)
            if violations:
                raise LabelValidationError(violations)
            superseding = task_id in self._latest_labels
            event = {
                "type": "submit",
                "task_id": task_id,
                "annotator_id": annotator_id,
                "labels": _labels_to_event(labels),
                "at": _now(),
            }
            self._log.append(event)
            self._apply(event)
            return {"accepted": True, "superseding": superseding}

    def export(self) -> bytes:
        """The collection format, one row per submitted task, latest labels."""
        with self._lock:
            records = []
            for task_id in self._submission_order:
                task = self._tasks[task_id]
                origin = self._item_index[task.origin_item_id]
                records.append(
                    AnnotationRecord(
                        item_id=task.item_id,
                        source_id=origin.source_id,
                        run_id=origin.run_id,
                        annotator_id=task.annotator_id,
                        labels=self._latest_labels[task_id],
                        source_text=task.source_text,
                        simplified_text=task.simplified_text,
                        duplicate_of=task.duplicate_of,
                    )
                )
            return serialize_collection(records)

    def progress(self, annotator_id: str | None = None) -> dict:
        with self._lock:
            if annotator_id is not None:
                self._require_annotator(annotator_id)
                assigned = [t for t in self._tasks.values() if t.annotator_id == annotator_id]
                submitted = [t for t in assigned if t.task_id in self._latest_labels]
                return {
                    "annotator_id": annotator_id,
                    "assigned": len(assigned),
                    "submitted": len(submitted),
                    "pending_task_id": self._pending.get(annotator_id),
                }
            return {
                "items": len(self._items),
                "annotators": sorted(self._annotators),
                "assigned": len(self._tasks),
                "submitted": len(self._latest_labels),
            }

    def annotators(self) -> list[str]:
        with self._lock:
            return sorted(self._annotators)

    # -- assignment planning (lock held) ---------------------------------

    def _require_annotator(self, annotator_id: str) -> None:
        if annotator_id not in self._annotators:
            raise UnknownAnnotatorError(f"unknown annotator: {annotator_id!r}")

    def _target_raters(self, item_index: int) -> int:
        return self._rater_count if item_index < self._shared_pool_size else 1

    def _probe_due(self, annotator_id: str) -> str | None:
        """Item id to probe next, or None when no probe is due."""
        owed = int(self._real_submitted.get(annotator_id, 0) * self._probe_rate)
        if self._probes_issued.get(annotator_id, 0) >= owed:
            return None
        probed = self._probed_items.get(annotator_id, set())
        for item_id in self._submitted_real_items.get(annotator_id, []):
            if item_id not in probed:
                return item_id
        return None

    def _plan_assignment(self, annotator_id: str) -> dict | None:
        probe_origin = self._probe_due(annotator_id)
        if probe_origin is not None:
            self._probe_seq += 1
            self._task_seq += 1
            return {
                "type": "assign",
                "task_id": f"t{self._task_seq:06d}",
                "item_id": f"{probe_origin}-probe{self._probe_seq:04d}",
                "origin_item_id": probe_origin,
                "annotator_id": annotator_id,
                "is_probe": True,
                "duplicate_of": probe_origin,
                "at": _now(),
            }
        for index, item in enumerate(self._items):
            assignees = self._assignees[item.item_id]
            if annotator_id in assignees:
                continue
            if len(assignees) >= self._target_raters(index):
                continue
            self._task_seq += 1
            return {
                "type": "assign",
                "task_id": f"t{self._task_seq:06d}",
                "item_id": item.item_id,
                "origin_item_id": item.item_id,
                "annotator_id": annotator_id,
                "is_probe": False,
                "duplicate_of": None,
                "at": _now(),
            }
        return None

    # -- event application (used both live and at replay) -----------------

    def _apply(self, event: dict) -> None:
        kind = event["type"]
        if kind == "register":
            self._annotators.add(event["annotator_id"])
            self._pending.setdefault(event["annotator_id"], None)
        elif kind == "assign":
            origin = self._item_index[event["origin_item_id"]]
            task = TaskAssignment(
                task_id=event["task_id"],
                item_id=event["item_id"],
                annotator_id=event["annotator_id"],
                source_text=origin.source_text,
                simplified_text=origin.simplified_text,
                issued_at=event["at"],
                is_probe=event["is_probe"],
                duplicate_of=event["duplicate_of"],
                origin_item_id=event["origin_item_id"],
            )
            self._tasks[task.task_id] = task
            self._pending[task.annotator_id] = task.task_id
            seq = int(task.task_id[1:])
            self._task_seq = max(self._task_seq, seq)
            if task.is_probe:
                self._probed_items.setdefault(task.annotator_id, set()).add(task.origin_item_id)
                self._probes_issued[task.annotator_id] = (
                    self._probes_issued.get(task.annotator_id, 0) + 1
                )
                probe_seq = int(task.item_id.rsplit("-probe", 1)[1])
                self._probe_seq = max(self._probe_seq, probe_seq)
            else:
                self._assignees[task.item_id].add(task.annotator_id)
        elif kind == "submit":
            task_id = event["task_id"]
            task = self._tasks[task_id]
            first = task_id not in self._latest_labels
            self._latest_labels[task_id] = _labels_from_event(event["labels"])
            if first:
                self._submission_order.append(task_id)
                if not task.is_probe:
                    self._real_submitted[task.annotator_id] = (
                        self._real_submitted.get(task.annotator_id, 0) + 1
                    )
                    self._submitted_real_items.setdefault(task.annotator_id, []).append(
                        task.item_id
                    )
            if self._pending.get(task.annotator_id) == task_id:
                self._pending[task.annotator_id] = None
        else:
            raise ValueError(f"unknown event type in log: {kind!r}")


def _labels_to_event(labels: LabelVector) -> dict:
    return {
        "no_error": labels.no_error,
        "flags": {code.value: labels.flags[code] for code in CODE_ORDER if labels.flags[code]},
    }


def _labels_from_event(payload: dict) -> LabelVector:
    flags = {code: bool(payload.get("flags", {}).get(code.value, False)) for code in CODE_ORDER}
    return LabelVector(no_error=bool(payload["no_error"]), flags=flags)
