"""Append-only result catalogue: newline-delimited JSON records.

Each record stores a digest of the inputs, the computed result, the engine
version and the wall time.  Records are never overwritten; when the same
digest reappears with a different result under a different engine version,
the new record is appended with a conflict flag and a warning goes to stderr.
Corrupt lines are skipped with a warning, never a crash.
"""
from __future__ import annotations

import hashlib
import json
import os
import sys
from dataclasses import dataclass, field


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest_inputs(obj) -> str:
    """Content hash of the canonical JSON form of the inputs."""
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class CatalogEntry:
    input_digest: str
    result: object
    engine_version: str
    wall_time_s: float
    command: str = ""
    conflict: bool = field(default=False)

    def to_json_dict(self) -> dict:
        return {
            "input_digest": self.input_digest,
            "result": self.result,
            "engine_version": self.engine_version,
            "wall_time_s": self.wall_time_s,
            "command": self.command,
            "conflict": self.conflict,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "CatalogEntry":
        return cls(
            input_digest=data["input_digest"],
            result=data["result"],
            engine_version=data["engine_version"],
            wall_time_s=data["wall_time_s"],
            command=data.get("command", ""),
            conflict=data.get("conflict", False),
        )


def _iter_entries(path: str):
    if not os.path.exists(path):
        return
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
                yield CatalogEntry.from_json_dict(data)
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                print(f"warning: {path}:{lineno}: skipping corrupt catalogue line ({exc})", file=sys.stderr)


def catalog_append(entry: CatalogEntry, path: str) -> CatalogEntry:
    """Append an entry; flag it when an earlier record disagrees on the result."""
    conflict = entry.conflict
    for prior in _iter_entries(path):
        if prior.input_digest == entry.input_digest and prior.result != entry.result:
            conflict = True
            print(
                f"warning: catalogue digest {entry.input_digest[:12]} already has a different result "
                f"(engine {prior.engine_version}); keeping both",
                file=sys.stderr,
            )
            break
    flagged = CatalogEntry(
        entry.input_digest, entry.result, entry.engine_version, entry.wall_time_s, entry.command, conflict
    )
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(canonical_json(flagged.to_json_dict()) + "\n")
    return flagged


def catalog_query(digest: str, path: str) -> CatalogEntry | None:
    """Newest entry with the given digest, or None."""
    newest = None
    for entry in _iter_entries(path):
        if entry.input_digest == digest:
            newest = entry
    return newest
