"""Heuristic document-quality rules with per-rule diagnostics.

Eight rule groups: document length, mean word length, symbol-to-word
ratio, bullet lines, ellipsis lines, alphabetic-word fraction, required
English words, and repetition (top n-gram and duplicate n-gram character
fractions plus duplicate lines).  A document passes only if every group
passes.

Two implementations back the same contract: a pure-Python path and a
compiled batch kernel.  Both compute identical integer numerators and
denominators, so their float results are bit-identical.
"""
from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from filteraudit import _fastgopher
from filteraudit.text import Document

REQUIRED_WORDS = ("the", "be", "to", "of", "and", "that", "have", "with")
BULLET_GLYPHS = ("•", "-", "*")

MEASUREMENT_NAMES = (
    "word_count",
    "mean_word_length",
    "symbol_to_word_ratio",
    "bullet_line_fraction",
    "ellipsis_line_fraction",
    "alpha_word_fraction",
    "required_word_hits",
    "top_2gram_char_fraction",
    "top_3gram_char_fraction",
    "top_4gram_char_fraction",
    "dup_5gram_char_fraction",
    "dup_6gram_char_fraction",
    "dup_7gram_char_fraction",
    "dup_8gram_char_fraction",
    "dup_9gram_char_fraction",
    "dup_10gram_char_fraction",
    "dup_line_fraction",
    "dup_line_char_fraction",
)

RULE_NAMES = (
    "doclen_ok",
    "wordlen_ok",
    "symbol_ok",
    "bullet_ok",
    "ellipsis_ok",
    "alpha_ok",
    "stopword_ok",
    "repetition_ok",
)


def _default_top_ngram() -> dict[int, float]:
    return {2: 0.20, 3: 0.18, 4: 0.16}


def _default_dup_ngram() -> dict[int, float]:
    return {5: 0.15, 6: 0.14, 7: 0.13, 8: 0.12, 9: 0.11, 10: 0.10}


@dataclass(frozen=True)
class GopherThresholds:
    min_words: int = 50
    max_words: int = 100_000
    min_mean_word_length: float = 3.0  # inclusive
    max_mean_word_length: float = 10.0  # inclusive
    max_symbol_ratio: float = 0.1  # strict <
    max_bullet_fraction: float = 0.9  # strict <
    max_ellipsis_fraction: float = 0.3  # strict <
    min_alpha_fraction: float = 0.8  # strict >
    min_required_words: int = 2
    top_ngram: dict[int, float] = field(default_factory=_default_top_ngram)
    dup_ngram: dict[int, float] = field(default_factory=_default_dup_ngram)
    max_dup_line_fraction: float = 0.30
    max_dup_line_char_fraction: float = 0.20


DEFAULT_THRESHOLDS = GopherThresholds()


@dataclass
class GopherReport:
    doclen_ok: bool
    wordlen_ok: bool
    symbol_ok: bool
    bullet_ok: bool
    ellipsis_ok: bool
    alpha_ok: bool
    stopword_ok: bool
    repetition_ok: bool
    measurements: dict[str, float]

    def rules(self) -> dict[str, bool]:
        return {name: getattr(self, name) for name in RULE_NAMES}

    @property
    def passed(self) -> bool:
        return all(getattr(self, name) for name in RULE_NAMES)


# ---------------------------------------------------------------------------
# repetition primitives (pure Python, also the no-numba fallback)


def top_ngram_char_fraction(tokens: list[str], n: int) -> float:
    """Characters claimed by the most frequent n-gram over total characters.

    count x n-gram characters / total token characters, whitespace
    excluded.  Ties break toward the earliest first occurrence.  The value
    is clamped at 1.0: overlapping occurrences of a self-similar n-gram
    can otherwise push the raw product past the denominator.
    """
    if len(tokens) < n:
        return 0.0
    total = sum(len(t) for t in tokens)
    counts: Counter = Counter()
    first: dict[tuple[str, ...], int] = {}
    for i in range(len(tokens) - n + 1):
        gram = tuple(tokens[i : i + n])
        counts[gram] += 1
        if gram not in first:
            first[gram] = i
    best = max(counts, key=lambda g: (counts[g], -first[g]))
    return min(1.0, counts[best] * sum(len(t) for t in best) / total)


def dup_ngram_char_fraction(tokens: list[str], n: int) -> float:
    """Fraction of characters covered by n-grams that occur at least twice."""
    if len(tokens) < n:
        return 0.0
    total = sum(len(t) for t in tokens)
    grams = [tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]
    counts = Counter(grams)
    marked = 0
    cover_end = 0
    for i, gram in enumerate(grams):
        if counts[gram] >= 2:
            s = max(i, cover_end)
            if i + n > s:
                marked += sum(len(t) for t in tokens[s : i + n])
            cover_end = i + n
    return marked / total


def _lines_of(text: str) -> list[str]:
    return [seg for seg in text.split("\n") if seg and not seg.isspace()]


def dup_line_fractions(text: str) -> tuple[float, float]:
    """(duplicate-line fraction, duplicate-line character fraction).

    Lines are non-blank newline-separated segments compared by exact
    string; blank segments carry no content and are ignored.
    """
    lines = _lines_of(text)
    if not lines:
        return 0.0, 0.0
    counts = Counter(lines)
    dup = 0
    dup_chars = 0
    total_chars = 0
    for ln in lines:
        total_chars += len(ln)
        if counts[ln] >= 2:
            dup += 1
            dup_chars += len(ln)
    return dup / len(lines), dup_chars / total_chars


def _measure_py(text: str) -> list[float]:
    tokens = text.split()
    w = len(tokens)
    if w == 0:
        return [0.0] * len(MEASUREMENT_NAMES)
    total_chars = sum(len(t) for t in tokens)
    lines = _lines_of(text)
    symbols = text.count("#") + text.count("...") + text.count("…")
    bullets = sum(1 for ln in lines if ln.lstrip().startswith(BULLET_GLYPHS))
    ellipses = sum(1 for ln in lines if ln.rstrip().endswith(("...", "…")))
    alpha_words = sum(1 for t in tokens if any(c.isalpha() for c in t))
    req_hits = len({t for t in tokens if t in REQUIRED_WORDS})
    row = [
        float(w),
        total_chars / w,
        symbols / w,
        bullets / len(lines) if lines else 0.0,
        ellipses / len(lines) if lines else 0.0,
        alpha_words / w,
        float(req_hits),
    ]
    row += [top_ngram_char_fraction(tokens, n) for n in (2, 3, 4)]
    row += [dup_ngram_char_fraction(tokens, n) for n in (5, 6, 7, 8, 9, 10)]
    row += list(dup_line_fractions(text))
    return row


# ---------------------------------------------------------------------------
# batch engine

_REQ_HASHES = np.array(
    [_fastgopher.word_hash(wrd) for wrd in REQUIRED_WORDS], dtype=np.uint64
)


# cap on code points per kernel batch, keeps the joined buffer modest
_CHUNK_CHARS = 1 << 25


def _measure_batch_fast(texts: list[str]) -> np.ndarray:
    from filteraudit._chartables import char_tables

    is_ws, is_alpha = char_tables()
    offsets = np.zeros(len(texts) + 1, dtype=np.int64)
    np.cumsum([len(t) for t in texts], out=offsets[1:])
    joined = "".join(texts).encode("utf-32-le")
    cp = np.frombuffer(joined, dtype=np.uint32) if joined else np.zeros(0, np.uint32)
    return _fastgopher.measure_batch(cp, offsets, is_ws, is_alpha, _REQ_HASHES)


def _chunks(texts: list[str], budget: int) -> list[list[str]]:
    parts: list[list[str]] = []
    cur: list[str] = []
    size = 0
    for t in texts:
        if cur and size + len(t) > budget:
            parts.append(cur)
            cur, size = [], 0
        cur.append(t)
        size += len(t)
    if cur:
        parts.append(cur)
    return parts


def measure_texts(texts: list[str], threads: int = 1) -> np.ndarray:
    """Measurement matrix (n_docs x 18) with MEASUREMENT_NAMES columns."""
    if not _fastgopher.HAVE_NUMBA:
        return np.array([_measure_py(t) for t in texts], dtype=np.float64).reshape(
            len(texts), len(MEASUREMENT_NAMES)
        )
    if not texts:
        return np.zeros((0, len(MEASUREMENT_NAMES)))
    budget = _CHUNK_CHARS
    if threads > 1:
        total = sum(len(t) for t in texts)
        budget = max(1, min(_CHUNK_CHARS, total // (threads * 4) + 1))
    parts = _chunks(texts, budget)
    if threads <= 1 or len(parts) < 2:
        results = [_measure_batch_fast(p) for p in parts]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_measure_batch_fast, parts))
    return np.vstack(results)


def evaluate_rules(
    matrix: np.ndarray, thresholds: GopherThresholds = DEFAULT_THRESHOLDS
) -> np.ndarray:
    """Rule booleans (n_docs x 8, RULE_NAMES order) from a measurement matrix."""
    t = thresholds
    m = {name: matrix[:, i] for i, name in enumerate(MEASUREMENT_NAMES)}
    has_words = m["word_count"] > 0
    rep_ok = np.ones(len(matrix), dtype=bool)
    for n, limit in t.top_ngram.items():
        rep_ok &= m[f"top_{n}gram_char_fraction"] <= limit
    for n, limit in t.dup_ngram.items():
        rep_ok &= m[f"dup_{n}gram_char_fraction"] <= limit
    rep_ok &= m["dup_line_fraction"] <= t.max_dup_line_fraction
    rep_ok &= m["dup_line_char_fraction"] <= t.max_dup_line_char_fraction
    cols = [
        (m["word_count"] >= t.min_words) & (m["word_count"] <= t.max_words),
        ~has_words
        | (
            (m["mean_word_length"] >= t.min_mean_word_length)
            & (m["mean_word_length"] <= t.max_mean_word_length)
        ),
        ~has_words | (m["symbol_to_word_ratio"] < t.max_symbol_ratio),
        m["bullet_line_fraction"] < t.max_bullet_fraction,
        m["ellipsis_line_fraction"] < t.max_ellipsis_fraction,
        ~has_words | (m["alpha_word_fraction"] > t.min_alpha_fraction),
        m["required_word_hits"] >= t.min_required_words,
        rep_ok,
    ]
    return np.column_stack(cols)


def _report_from_row(row: np.ndarray, rules_row: np.ndarray) -> GopherReport:
    values = row.tolist()
    return GopherReport(
        *(bool(b) for b in rules_row.tolist()),
        measurements=dict(zip(MEASUREMENT_NAMES, values)),
    )


def score_gopher_batch(
    texts: list[str],
    thresholds: GopherThresholds = DEFAULT_THRESHOLDS,
    threads: int = 1,
) -> list[GopherReport]:
    matrix = measure_texts(texts, threads=threads)
    rules = evaluate_rules(matrix, thresholds)
    return [_report_from_row(matrix[i], rules[i]) for i in range(len(texts))]


def apply_gopher(
    doc: Document | str, thresholds: GopherThresholds = DEFAULT_THRESHOLDS
) -> GopherReport:
    text = doc.text if isinstance(doc, Document) else doc
    return score_gopher_batch([text], thresholds=thresholds)[0]
