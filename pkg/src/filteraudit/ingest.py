"""Selection of self-description pages and their random same-host partners.

A page is an "about" candidate when the final segment of its URL path is
exactly one of about, about-me, about-us, or bio, optionally with a
trailing slash or a file extension.  A hostname contributes one record
when it has exactly one such candidate (http/https and trailing-slash
variants of one path count once, preferring the https document); hosts
with two or more distinct candidates are dropped entirely.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple
from urllib.parse import urlsplit

from .io import iter_jsonl, write_jsonl
from .seeds import derive_seed
from .text import Document

_KEYWORDS = {
    "about": "about",
    "about-me": "about_me",
    "about-us": "about_us",
    "bio": "bio",
}


def _split(url: str):
    try:
        parts = urlsplit(url)
    except ValueError:
        return None
    if parts.scheme not in ("http", "https") or not parts.hostname:
        return None
    return parts


def classify_about_url(url: str) -> Optional[str]:
    """Keyword name when the final path segment is an about keyword, else None.

    The segment may carry a trailing slash or an extension (about.html);
    matching is case-insensitive and ignores the query string.  Malformed
    or non-http(s) URLs return None.
    """
    parts = _split(url)
    if parts is None:
        return None
    segment = parts.path.rstrip("/").rsplit("/", 1)[-1].lower()
    if segment in _KEYWORDS:
        return _KEYWORDS[segment]
    stem, dot, _ext = segment.rpartition(".")
    if dot and stem in _KEYWORDS:
        return _KEYWORDS[stem]
    return None


@dataclass
class HostRecord:
    hostname: str
    about_page: Document
    sampled_page: Optional[Document]
    about_keyword: str


def _candidate_key(parts) -> Tuple[str, str]:
    # http/https and trailing-slash variants of one path are one candidate
    return (parts.path.rstrip("/"), parts.query)


def select_about_pages(corpus: Iterable[Document]) -> List[HostRecord]:
    """One HostRecord per hostname that has exactly one about candidate.

    Duplicate URLs keep their first occurrence.  Output is sorted by
    hostname and does not depend on input order.
    """
    seen_urls: set = set()
    # hostname -> candidate key -> list of candidate docs
    hosts: Dict[str, Dict[Tuple[str, str], List[Document]]] = {}
    for doc in corpus:
        if doc.url in seen_urls:
            continue
        seen_urls.add(doc.url)
        keyword = classify_about_url(doc.url)
        if keyword is None:
            continue
        parts = _split(doc.url)
        hosts.setdefault(parts.hostname, {}).setdefault(_candidate_key(parts), []).append(doc)

    records = []
    for hostname in sorted(hosts):
        candidates = hosts[hostname]
        if len(candidates) != 1:
            continue
        (variants,) = candidates.values()
        best = min(variants, key=lambda d: (not d.url.startswith("https:"), d.url))
        records.append(
            HostRecord(hostname, best, None, classify_about_url(best.url))
        )
    return records


def pair_random_page(host: HostRecord, candidates: List[Document], seed: int) -> HostRecord:
    """Fill sampled_page with a seeded uniform pick from the candidates.

    Candidates are sorted by URL first so the pick does not depend on
    their order.  An empty candidate list leaves sampled_page absent.
    """
    if any(c.url == host.about_page.url for c in candidates):
        raise ValueError(f"candidates for {host.hostname} include the about page")
    if not candidates:
        return HostRecord(host.hostname, host.about_page, None, host.about_keyword)
    ordered = sorted(candidates, key=lambda d: d.url)
    rng = random.Random(derive_seed(seed, f"pair:{host.hostname}"))
    pick = ordered[rng.randrange(len(ordered))]
    return HostRecord(host.hostname, host.about_page, pick, host.about_keyword)


def extract_host_records(corpus: Iterable[Document], seed: int) -> List[HostRecord]:
    """select_about_pages plus a random same-host partner for each record."""
    docs = list(corpus)
    records = select_about_pages(docs)
    by_host: Dict[str, List[Document]] = {}
    for doc in docs:
        parts = _split(doc.url)
        if parts is not None:
            by_host.setdefault(parts.hostname, []).append(doc)
    out = []
    for rec in records:
        candidates = [
            d for d in by_host[rec.hostname] if d.url != rec.about_page.url
        ]
        out.append(pair_random_page(rec, candidates, seed))
    return out


def _doc_row(doc: Optional[Document]):
    if doc is None:
        return None
    row = {"id": doc.id, "url": doc.url, "text": doc.text}
    if doc.kind is not None:
        row["kind"] = doc.kind
    return row


def _row_doc(row) -> Optional[Document]:
    if row is None:
        return None
    return Document(id=row["id"], url=row["url"], text=row["text"], kind=row.get("kind"))


def write_host_records(path, records: Iterable[HostRecord]) -> int:
    return write_jsonl(
        path,
        (
            {
                "hostname": r.hostname,
                "about_keyword": r.about_keyword,
                "about_page": _doc_row(r.about_page),
                "sampled_page": _doc_row(r.sampled_page),
            }
            for r in records
        ),
    )


def read_host_records(path) -> List[HostRecord]:
    return [
        HostRecord(
            hostname=row["hostname"],
            about_page=_row_doc(row["about_page"]),
            sampled_page=_row_doc(row["sampled_page"]),
            about_keyword=row["about_keyword"],
        )
        for row in iter_jsonl(path)
    ]
