"""Tokenization and text segmentation primitives shared by every scorer.

Tokens are maximal runs of non-whitespace characters (Unicode whitespace,
same rule as ``str.split``).  Character counts always exclude whitespace so
that token lengths sum to the document character count.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources


@dataclass(frozen=True)
class Document:
    """One corpus record: stable id, source URL, raw page text."""

    id: str
    url: str
    text: str
    kind: str | None = None


def tokenize(text: str) -> list[str]:
    """Split on Unicode whitespace. Empty input gives an empty list."""
    return text.split()


def char_count(tokens: list[str]) -> int:
    """Total characters across tokens, whitespace excluded."""
    return sum(len(t) for t in tokens)


def split_paragraphs(text: str) -> list[tuple[int, int]]:
    """Spans of maximal newline-free runs that contain non-whitespace.

    Returns (start, end) offsets into ``text``.  Blank lines and runs of
    newlines produce no span, so every span is a non-blank physical line.
    """
    spans: list[tuple[int, int]] = []
    start = 0
    n = len(text)
    while start < n:
        end = text.find("\n", start)
        if end == -1:
            end = n
        if not text[start:end].isspace() and end > start:
            spans.append((start, end))
        start = end + 1
    return spans


def paragraph_texts(text: str) -> list[str]:
    return [text[a:b] for a, b in split_paragraphs(text)]


def _load_abbreviations() -> frozenset[str]:
    data = resources.files("filteraudit.data").joinpath("abbreviations.txt")
    out = set()
    for line in data.read_text(encoding="utf-8").splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            out.add(line)
    return frozenset(out)


_ABBREVIATIONS: frozenset[str] | None = None

# terminal punctuation followed by whitespace; the next character decides
# whether we actually break
_BOUNDARY_RE = re.compile(r"[.!?]+(?=\s)")
_OPENERS = "\"'“‘(["


def _abbreviations() -> frozenset[str]:
    global _ABBREVIATIONS
    if _ABBREVIATIONS is None:
        _ABBREVIATIONS = _load_abbreviations()
    return _ABBREVIATIONS


def split_sentences(text: str) -> list[str]:
    """Rule-based sentence splitting.

    A boundary is terminal punctuation followed by whitespace and an
    uppercase letter (or an opening quote/bracket before one), unless the
    token ending at the punctuation is a known abbreviation.  Newlines are
    always hard boundaries.  Returned sentences are stripped and non-empty.
    """
    abbrevs = _abbreviations()
    sentences: list[str] = []
    for a, b in split_paragraphs(text):
        line = text[a:b]
        start = 0
        for m in _BOUNDARY_RE.finditer(line):
            end = m.end()
            nxt = end
            while nxt < len(line) and line[nxt].isspace():
                nxt += 1
            while nxt < len(line) and line[nxt] in _OPENERS:
                nxt += 1
            if nxt >= len(line) or not line[nxt].isupper():
                continue
            if "." in m.group(0):
                tok = line[start:end].split()[-1].lower() if line[start:end].split() else ""
                if tok in abbrevs:
                    continue
            piece = line[start:end].strip()
            if piece:
                sentences.append(piece)
            start = end
        tail = line[start:].strip()
        if tail:
            sentences.append(tail)
    return sentences
