"""Append-only JSONL event log.

Every state change of the annotation store is one JSON object per line.
Nothing is ever rewritten or deleted; the store is a deterministic fold
over the log, so replaying the file reproduces exactly the same state
(and therefore exactly the same export bytes).
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Iterator


class EventLog:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "a", encoding="utf-8")

    def append(self, event: dict) -> None:
        line = json.dumps(event, sort_keys=True, ensure_ascii=False)
        self._fh.write(line + "\n")
        self._fh.flush()
        os.fsync(self._fh.fileno())

    def replay(self) -> Iterator[dict]:
        if not self.path.exists():
            return
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    yield json.loads(line)

    def close(self) -> None:
        self._fh.close()
