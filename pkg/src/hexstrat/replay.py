"""Append-only JSONL replay log.

Line 1 is a header carrying the scenario spec, the run config and a
digest over both; every following line is one step record.  Loading
validates the digest and reports corrupt lines by line number.
"""

from __future__ import annotations

import hashlib
import json

SCHEMA_VERSION = 1


def _digest(scenario_doc: dict, config_doc: dict) -> str:
    blob = json.dumps([scenario_doc, config_doc], sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def make_header(scenario_doc: dict, config_doc: dict) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "header",
        "scenario": scenario_doc,
        "config": config_doc,
        "digest": _digest(scenario_doc, config_doc),
    }


class ReplayWriter:
    def __init__(self, path, scenario_doc: dict, config_doc: dict):
        self.path = path
        self._f = open(path, "w")
        self._write(make_header(scenario_doc, config_doc))

    def _write(self, doc: dict) -> None:
        self._f.write(json.dumps(doc, separators=(",", ":")) + "\n")

    def append(self, record: dict) -> None:
        self._write(record)

    def close(self) -> None:
        self._f.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class ReplayError(ValueError):
    pass


def load_replay(path) -> tuple[dict, list[dict]]:
    """Returns (header, records); raises ReplayError with the offending
    line number on corruption or digest mismatch."""
    with open(path) as f:
        lines = f.read().splitlines()
    if not lines:
        raise ReplayError(f"{path}: empty replay (no header line)")
    docs = []
    for i, line in enumerate(lines, start=1):
        try:
            docs.append(json.loads(line))
        except json.JSONDecodeError as e:
            raise ReplayError(
                f"{path}: corrupt record at line {i} "
                f"(last valid line: {i - 1}): {e}"
            ) from None
    header = docs[0]
    if header.get("kind") != "header":
        raise ReplayError(f"{path}: line 1 is not a header record")
    if header.get("schema") != SCHEMA_VERSION:
        raise ReplayError(
            f"{path}: schema {header.get('schema')} != supported {SCHEMA_VERSION}"
        )
    expect = _digest(header.get("scenario", {}), header.get("config", {}))
    if header.get("digest") != expect:
        raise ReplayError(f"{path}: header digest mismatch")
    return header, docs[1:]
