"""FilterScore, the shared currency between scorers and audits."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable

from .io import write_jsonl
from .linear_filters import ingest_external_scores


@dataclass(frozen=True)
class FilterScore:
    doc_id: str
    filter_name: str
    score: float


def write_scores(path, scores: Iterable[FilterScore]) -> int:
    """Write {"id","filter","score"} rows sorted by document id."""
    ordered = sorted(scores, key=lambda s: s.doc_id)
    rows = (
        {"id": s.doc_id, "filter": s.filter_name, "score": s.score} for s in ordered
    )
    return write_jsonl(path, rows)


def read_scores(path) -> Dict[str, float]:
    """Document id -> score from any {"id","score"} JSONL file."""
    return ingest_external_scores(path, probability=False).scores
