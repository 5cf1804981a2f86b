"""Group-specific vocabularies by NPMI, and the role tier analysis.

NPMI uses the joint normalization: npmi(w, g) = pmi(w, g) / -log p(w, g)
with probabilities read off the token-group co-occurrence table over
lowercased whitespace tokens.  Values live in [-1, 1]; a term reaches 1
only when it is the entire content of exactly one group.

The tier analysis buckets roles into terciles of their mean filter
score, then compares each tier's mean against the mean over only the
high-specificity pages (pages using more of the role's NPMI vocabulary
than that role's average page).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ..text import Document, tokenize


def _group_tokens(docs_by_group: Mapping[str, Sequence[Document]]) -> Dict[str, List[str]]:
    return {
        group: [tok.lower() for doc in docs for tok in tokenize(doc.text)]
        for group, docs in docs_by_group.items()
    }


def npmi_scores(
    docs_by_group: Mapping[str, Sequence[Document]], min_count: int = 1
) -> Dict[str, Dict[str, float]]:
    """npmi(w, g) for every term with joint count >= min_count."""
    tokens_by_group = _group_tokens(docs_by_group)
    joint: Dict[Tuple[str, str], int] = {}
    word_totals: Dict[str, int] = {}
    group_totals: Dict[str, int] = {}
    for group, tokens in tokens_by_group.items():
        group_totals[group] = len(tokens)
        for tok in tokens:
            joint[(group, tok)] = joint.get((group, tok), 0) + 1
            word_totals[tok] = word_totals.get(tok, 0) + 1
    total = sum(group_totals.values())

    out: Dict[str, Dict[str, float]] = {group: {} for group in docs_by_group}
    for (group, tok), count in joint.items():
        if count < min_count:
            continue
        p_joint = count / total
        if p_joint == 1.0:
            out[group][tok] = 1.0
            continue
        pmi = math.log(
            p_joint / ((word_totals[tok] / total) * (group_totals[group] / total))
        )
        out[group][tok] = pmi / -math.log(p_joint)
    return out


def npmi_vocab(
    docs_by_group: Mapping[str, Sequence[Document]],
    min_count: int = 1,
    threshold: float = 0.1,
) -> Dict[str, List[str]]:
    """Per group, the terms with npmi above threshold, strongest first."""
    scores = npmi_scores(docs_by_group, min_count)
    return {
        group: [
            tok
            for tok, value in sorted(per_term.items(), key=lambda kv: (-kv[1], kv[0]))
            if value > threshold
        ]
        for group, per_term in scores.items()
    }


@dataclass(frozen=True)
class TierRow:
    tier: str
    roles: Tuple[str, ...]
    n_roles: int
    mean_all: float
    ci95_all: float
    mean_subset: Optional[float]
    ci95_subset: Optional[float]
    flagged: Tuple[str, ...]


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values)


def _ci95(values: Sequence[float]) -> float:
    n = len(values)
    if n < 2:
        return 0.0
    mean = _mean(values)
    sd = math.sqrt(sum((v - mean) ** 2 for v in values) / (n - 1))
    return 1.96 * sd / math.sqrt(n)


def _specificity(doc: Document, vocab: frozenset) -> float:
    tokens = [t.lower() for t in tokenize(doc.text)]
    if not tokens:
        return 0.0
    return sum(1 for t in tokens if t in vocab) / len(tokens)


def role_tier_analysis(
    scores: Mapping[str, float],
    role_pages: Mapping[str, Sequence[Document]],
    role_vocab: Mapping[str, Sequence[str]],
) -> List[TierRow]:
    """Tercile tiers of role mean scores, with high-specificity subsets.

    A role's subset holds the pages whose specificity (fraction of
    tokens inside the role's vocabulary) is strictly above the role's
    mean specificity; roles where every page ties are flagged and
    excluded from the subset column.
    """
    mean_all: Dict[str, float] = {}
    mean_subset: Dict[str, Optional[float]] = {}
    for role, pages in role_pages.items():
        vocab = frozenset(role_vocab.get(role, ()))
        page_scores = []
        for page in pages:
            if page.id not in scores:
                raise ValueError(f"no score for page {page.id!r}")
            page_scores.append(scores[page.id])
        specificities = [_specificity(p, vocab) for p in pages]
        cut = _mean(specificities)
        subset = [s for s, spec in zip(page_scores, specificities) if spec > cut]
        mean_all[role] = _mean(page_scores)
        mean_subset[role] = _mean(subset) if subset else None

    ordered = sorted(role_pages, key=lambda r: (mean_all[r], r))
    n = len(ordered)
    lo_end = math.ceil(n / 3)
    mid_end = math.ceil(2 * n / 3)
    tiers = (
        ("low", ordered[:lo_end]),
        ("mid", ordered[lo_end:mid_end]),
        ("high", ordered[mid_end:]),
    )

    rows = []
    for tier, roles in tiers:
        if not roles:
            continue
        alls = [mean_all[r] for r in roles]
        subs = [mean_subset[r] for r in roles if mean_subset[r] is not None]
        flagged = tuple(r for r in roles if mean_subset[r] is None)
        rows.append(
            TierRow(
                tier=tier,
                roles=tuple(roles),
                n_roles=len(roles),
                mean_all=_mean(alls),
                ci95_all=_ci95(alls),
                mean_subset=_mean(subs) if subs else None,
                ci95_subset=_ci95(subs) if subs else None,
                flagged=flagged,
            )
        )
    return rows
