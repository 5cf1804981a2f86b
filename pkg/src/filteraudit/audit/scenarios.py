"""Filtering scenarios: nearest-rank cutoffs and per-group rates.

A scenario either retains the top ``percentile`` of scores or removes
the bottom ``percentile``.  Thresholds are nearest-rank order
statistics, so cutoffs land on actual score values and tie handling is
reproducible: retention keeps ``score >= threshold`` and removal drops
``score < threshold``, which means tied masses at the cutoff can push
the realized fraction past the nominal percentile.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Set

MODES = ("retain_top", "remove_bottom")


@dataclass(frozen=True)
class Scenario:
    mode: str
    percentile: float = 0.10


def compute_threshold(scores: Iterable[float], percentile: float, mode: str) -> float:
    """Nearest-rank cutoff: the ceil(p*n)-th largest (or smallest) score."""
    values = sorted(scores)
    if not values:
        raise ValueError("empty score list")
    if not 0.0 < percentile < 1.0:
        raise ValueError(f"percentile must be in (0, 1), got {percentile}")
    if mode not in MODES:
        raise ValueError(f"unknown scenario mode {mode!r}")
    k = math.ceil(percentile * len(values))
    return values[-k] if mode == "retain_top" else values[k - 1]


def surviving_ids(scores: Mapping[str, float], scenario: Scenario) -> Set[str]:
    """Document ids that survive the scenario (score >= threshold)."""
    threshold = compute_threshold(scores.values(), scenario.percentile, scenario.mode)
    return {doc_id for doc_id, s in scores.items() if s >= threshold}


@dataclass(frozen=True)
class GroupRateRow:
    group: str
    n: int
    rate: float
    composition_before: float
    composition_after: float


def group_rates(
    scores: Mapping[str, float],
    groups: Mapping[str, str],
    scenario: Scenario,
) -> List[GroupRateRow]:
    """Retention (retain_top) or removal (remove_bottom) rate per group.

    Only documents present in both mappings enter the audit; the
    threshold is computed over that joined set.  Compositions are
    percentages of the joined corpus before and after filtering.
    """
    joined = {doc_id: s for doc_id, s in scores.items() if doc_id in groups}
    if not joined:
        raise ValueError("no scored documents carry a group")
    threshold = compute_threshold(joined.values(), scenario.percentile, scenario.mode)
    survivors = {doc_id for doc_id, s in joined.items() if s >= threshold}

    per_n: Counter = Counter(groups[doc_id] for doc_id in joined)
    per_kept: Counter = Counter(groups[doc_id] for doc_id in survivors)
    total = len(joined)
    total_after = len(survivors)

    rows = []
    for group in sorted(per_n):
        n = per_n[group]
        kept = per_kept.get(group, 0)
        if scenario.mode == "remove_bottom":
            rate = (n - kept) / n
        else:
            rate = kept / n
        rows.append(
            GroupRateRow(
                group=group,
                n=n,
                rate=rate,
                composition_before=100.0 * n / total,
                composition_after=100.0 * kept / total_after if total_after else 0.0,
            )
        )
    return rows


def group_rates_multi(
    scores: Mapping[str, float],
    memberships: Mapping[str, Iterable[str]],
    scenario: Scenario,
) -> List[GroupRateRow]:
    """Per-group rates when a document can belong to several groups.

    The threshold comes from the joined documents themselves, counted
    once each; a document then contributes to every group it belongs
    to, so compositions are percentages of group memberships rather
    than of documents.
    """
    joined = {
        doc_id: s
        for doc_id, s in scores.items()
        if doc_id in memberships and tuple(memberships[doc_id])
    }
    if not joined:
        raise ValueError("no scored documents carry a group")
    threshold = compute_threshold(joined.values(), scenario.percentile, scenario.mode)
    survivors = {doc_id for doc_id, s in joined.items() if s >= threshold}

    per_n: Counter = Counter()
    per_kept: Counter = Counter()
    for doc_id in joined:
        for group in set(memberships[doc_id]):
            per_n[group] += 1
            if doc_id in survivors:
                per_kept[group] += 1
    total = sum(per_n.values())
    total_after = sum(per_kept.values())

    rows = []
    for group in sorted(per_n):
        n = per_n[group]
        kept = per_kept.get(group, 0)
        if scenario.mode == "remove_bottom":
            rate = (n - kept) / n
        else:
            rate = kept / n
        rows.append(
            GroupRateRow(
                group=group,
                n=n,
                rate=rate,
                composition_before=100.0 * n / total,
                composition_after=100.0 * kept / total_after if total_after else 0.0,
            )
        )
    return rows
