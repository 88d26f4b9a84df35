"""
Record Storage Module
Line-delimited JSON records with a schema version and a single locked writer per file
"""

import json
import logging
import threading
from pathlib import Path
from typing import Iterable, List, Optional, Set

from ..exceptions import SchemaVersionError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
INSTANCE_KIND = "instance"
TRIAL_KIND = "trial"


def dump_record(record: dict) -> str:
    return json.dumps(record, sort_keys=True, ensure_ascii=False)


def repair_tail(path) -> int:
    """
    Make an existing file end on a record boundary before appending

    A complete record missing its newline gets one; a partial last line left
    by an interrupted writer is cut off.

    Returns:
        Number of bytes dropped
    """
    path = Path(path)
    if not path.exists():
        return 0
    data = path.read_bytes()
    if not data or data.endswith(b"\n"):
        return 0
    keep = data.rfind(b"\n") + 1
    try:
        json.loads(data[keep:].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError):
        with open(path, "r+b") as handle:
            handle.truncate(keep)
        dropped = len(data) - keep
        logger.warning(f"Dropped {dropped} bytes of a truncated last line in {path}")
        return dropped
    with open(path, "ab") as handle:
        handle.write(b"\n")
    return 0


class JsonlWriter:
    """Appends versioned records to one file; safe to share between threads"""

    def __init__(self, path, append: bool = True):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        if append:
            repair_tail(self.path)
        self._handle = open(self.path, "a" if append else "w", encoding="utf-8")
        self.written = 0

    def write(self, kind: str, payload: dict, config: Optional[dict] = None):
        record = {"schema_version": SCHEMA_VERSION, "kind": kind, "payload": payload}
        if config is not None:
            record["config"] = config
        line = dump_record(record)
        with self._lock:
            self._handle.write(line + "\n")
            self._handle.flush()
            self.written += 1

    def close(self):
        with self._lock:
            self._handle.close()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        self.close()


def write_records(path, kind: str, payloads: Iterable[dict], config: Optional[dict] = None) -> int:
    """Overwrite path with one record per payload; returns the count"""
    with JsonlWriter(path, append=False) as writer:
        for payload in payloads:
            writer.write(kind, payload, config)
        count = writer.written
    logger.info(f"Wrote {count} {kind} records to {path}")
    return count


def read_records(path, kind: Optional[str] = None) -> List[dict]:
    """
    Read versioned records

    A truncated final line (interrupted run) is skipped with a warning.

    Args:
        path: JSONL file
        kind: Keep only records of this kind

    Returns:
        Full records (schema_version, kind, payload, config)

    Raises:
        SchemaVersionError: On a record with another schema version
    """
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    records = []
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError:
            if number == len(lines):
                logger.warning(f"Skipping truncated last line of {path}")
                continue
            raise
        version = record.get("schema_version")
        if version != SCHEMA_VERSION:
            raise SchemaVersionError(f"{path}:{number} has schema version {version}, expected {SCHEMA_VERSION}")
        if kind is None or record.get("kind") == kind:
            records.append(record)
    return records


def read_payloads(path, kind: str) -> List[dict]:
    return [record["payload"] for record in read_records(path, kind)]


def completed_ids(path) -> Set[str]:
    """Trial ids already present in a transcript file"""
    path = Path(path)
    if not path.exists():
        return set()
    return {payload["trial_id"] for payload in read_payloads(path, TRIAL_KIND)}
