"""Gazetteer geoparsing: country mentions, page label, region rollup.

Location surface forms (countries, major cities, admin regions) are
matched case-sensitively against the text, longest surface first, so
"Papua New Guinea" never decays into a Guinea mention and the compound
row "Alexandria, Virginia" outranks the Egyptian city.  A surface
claimed by several countries goes to the highest-population candidate.
The page is labeled with its most frequent country (ties break to the
alphabetically first ISO code), then rolled up to one of the 15 UN
subregions and 5 regions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Dict, Iterable, Optional, Tuple

from ..text import Document

_TOKEN = re.compile(r"[^\s,]+|,")
_STRIP = ".;:!?()[]{}\"'`“”‘’"


def _tokens(text: str) -> list:
    out = []
    for raw in _TOKEN.findall(text):
        if raw == ",":
            out.append(raw)
            continue
        tok = raw.replace("’", "'").strip(_STRIP)
        if tok.endswith("'s"):
            tok = tok[:-2]
        out.append(tok)
    return out


@dataclass
class Gazetteer:
    """Token-tuple surface forms mapped to their best (iso, population)."""

    surfaces: Dict[Tuple[str, ...], Tuple[str, int]]
    max_len: int

    @classmethod
    def from_rows(cls, rows: Iterable[Tuple[str, str, int]]) -> "Gazetteer":
        candidates: Dict[Tuple[str, ...], list] = {}
        for surface, iso, population in rows:
            key = tuple(_tokens(surface))
            if not key:
                raise ValueError(f"empty gazetteer surface for {iso!r}")
            candidates.setdefault(key, []).append((iso, int(population)))
        surfaces = {
            key: min(options, key=lambda o: (-o[1], o[0]))
            for key, options in candidates.items()
        }
        max_len = max(len(key) for key in surfaces)
        return cls(surfaces=surfaces, max_len=max_len)

    def countries(self) -> set:
        return {iso for iso, _ in self.surfaces.values()}


@lru_cache(maxsize=None)
def load_gazetteer() -> Gazetteer:
    rows = []
    text = resources.files("filteraudit.data").joinpath("gazetteer.tsv").read_text("utf-8")
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        surface, iso, population = line.split("\t")
        rows.append((surface, iso, int(population)))
    return Gazetteer.from_rows(rows)


@lru_cache(maxsize=None)
def load_regions() -> Dict[str, Tuple[str, str]]:
    """ISO country code -> (subregion, region)."""
    table: Dict[str, Tuple[str, str]] = {}
    text = resources.files("filteraudit.data").joinpath("regions.tsv").read_text("utf-8")
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        iso, subregion, region = line.split("\t")
        table[iso] = (subregion, region)
    return table


def map_region(country: str) -> Tuple[str, str]:
    """Roll an ISO country code up to its (subregion, region)."""
    try:
        return load_regions()[country]
    except KeyError:
        raise ValueError(f"unknown country code {country!r}") from None


@dataclass(frozen=True)
class GeoLabel:
    country: Optional[str]
    subregion: Optional[str]
    region: Optional[str]
    mention_counts: Dict[str, int] = field(default_factory=dict)


def tag_geography(about_page: Document, gazetteer: Optional[Gazetteer] = None) -> GeoLabel:
    """Label a page with its most frequent country, or absent fields."""
    gaz = gazetteer if gazetteer is not None else load_gazetteer()
    tokens = _tokens(about_page.text)
    counts: Dict[str, int] = {}
    i = 0
    while i < len(tokens):
        matched = False
        for n in range(min(gaz.max_len, len(tokens) - i), 0, -1):
            hit = gaz.surfaces.get(tuple(tokens[i : i + n]))
            if hit is not None:
                counts[hit[0]] = counts.get(hit[0], 0) + 1
                i += n
                matched = True
                break
        if not matched:
            i += 1
    if not counts:
        return GeoLabel(country=None, subregion=None, region=None, mention_counts={})
    country = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]
    subregion, region = load_regions().get(country, (None, None))
    return GeoLabel(
        country=country, subregion=subregion, region=region, mention_counts=counts
    )
