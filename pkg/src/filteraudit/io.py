"""Streaming JSONL readers and writers.

All pipeline artifacts are JSON Lines: one object per line, UTF-8, sorted
keys on write so identical data always produces identical bytes.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Iterable, Iterator

from filteraudit.text import Document


class SchemaError(ValueError):
    """Raised when an input file violates its declared row schema."""


def iter_jsonl(path: str | Path) -> Iterator[dict]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}:{lineno}: invalid JSON ({exc})") from exc
            if not isinstance(row, dict):
                raise SchemaError(f"{path}:{lineno}: row is not an object")
            yield row


def write_jsonl(path: str | Path, rows: Iterable[dict]) -> int:
    """Write rows with sorted keys. Returns the number of rows written."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False))
            fh.write("\n")
            n += 1
    return n


def read_corpus(path: str | Path) -> Iterator[Document]:
    """Stream Document records, enforcing the corpus row schema."""
    seen: set[str] = set()
    for row in iter_jsonl(path):
        for key in ("id", "url", "text"):
            if key not in row:
                raise SchemaError(f"{path}: corpus row missing {key!r}")
            if not isinstance(row[key], str):
                raise SchemaError(f"{path}: corpus field {key!r} must be a string")
        if row["id"] in seen:
            raise SchemaError(f"{path}: duplicate document id {row['id']!r}")
        seen.add(row["id"])
        yield Document(id=row["id"], url=row["url"], text=row["text"], kind=row.get("kind"))


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def json_digest(obj: Any) -> str:
    return hashlib.sha256(
        json.dumps(obj, sort_keys=True, ensure_ascii=False).encode("utf-8")
    ).hexdigest()
