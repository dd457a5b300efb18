"""Append-only run journal.

One JSON object per line. Each record is written with a single
``os.write`` on an ``O_APPEND`` descriptor, so concurrent workers never
interleave partial lines; a torn final line (crash mid-write) is skipped on
replay.
"""
from __future__ import annotations

import json
import os
import time
from pathlib import Path


def step_key(q: int, n: int, k: int, d: int) -> str:
    return f"q{q}_n{n}_k{k}_d{d}"


class RunJournal:
    def __init__(self, path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, event: str, **fields) -> dict:
        rec = {"event": event, **fields, "time": round(time.time(), 3)}
        line = (json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n").encode()
        fd = os.open(self.path, os.O_WRONLY | os.O_APPEND | os.O_CREAT, 0o644)
        try:
            os.write(fd, line)
        finally:
            os.close(fd)
        return rec

    def records(self, event: str | None = None, **match) -> list[dict]:
        if not self.path.exists():
            return []
        out = []
        with open(self.path, "rb") as fh:
            for raw in fh:
                if not raw.endswith(b"\n"):
                    break
                try:
                    rec = json.loads(raw)
                except ValueError:
                    continue
                if event is not None and rec.get("event") != event:
                    continue
                if all(rec.get(k) == v for k, v in match.items()):
                    out.append(rec)
        return out

    def last(self, event: str, **match) -> dict | None:
        recs = self.records(event, **match)
        return recs[-1] if recs else None

    def done_units(self, step: str) -> dict[str, dict]:
        """Completed work units of a step, keyed by shard descriptor."""
        return {r["unit"]: r for r in self.records("unit-done", step=step)}

    def seal(self, step: str) -> dict | None:
        return self.last("step-sealed", step=step)
