"""Template-based extraction of self-identified roles and occupation mapping.

Sentences are matched against first-person self-identification triggers
("I am a …", "I work as a …"), shipped as regex patterns in a data file.
The phrase after a trigger is read as a coordinated list; each list item
contributes the shortest token prefix that ends in a role-lexicon word,
so "floral designer" keeps its modifier while "mother of a designer"
yields only "mother".  Function words end the scan, which keeps prose
like "a big fan of the pottery designer" out of the role list.

Occupation attachment is head-final: an item maps to an occupation when
its full surface matches a title, or when every title sharing its head
token agrees on one occupation.  Heads claimed by several occupations
(researcher, engineer, designer) stay as standalone roles.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from ..text import Document, split_sentences

EXCLUDED_PREFIXES = ("vice-", "ex-")
EXCLUDED_SUFFIXES = ("-elect", "-in-law")

_ARTICLES = ("a", "an", "the")
_SCAN_BARRIER = frozenset(
    "of in at on for with from by to who that which whose where when while".split()
)
_STRIP = ".,;:!?()[]{}\"'`“”‘’"
_SPLIT_ITEMS = re.compile(r"\s*(?:,|;|\band\b|\bor\b|&)\s*", re.IGNORECASE)


def _data_text(name: str) -> str:
    return resources.files("filteraudit.data").joinpath(name).read_text("utf-8")


@lru_cache(maxsize=1)
def load_role_lexicon() -> FrozenSet[str]:
    return frozenset(
        line.strip() for line in _data_text("role_lexicon.txt").splitlines() if line.strip()
    )


@lru_cache(maxsize=1)
def load_role_patterns() -> Tuple[re.Pattern, ...]:
    patterns = []
    for line in _data_text("role_patterns.txt").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        patterns.append(re.compile(line, re.IGNORECASE))
    return tuple(patterns)


@dataclass
class OnetLexicon:
    # title -> set of (occupation, family); head token -> same
    titles: Dict[str, Set[Tuple[str, str]]]
    heads: Dict[str, Set[Tuple[str, str]]]


@lru_cache(maxsize=1)
def load_onet_lexicon() -> OnetLexicon:
    titles: Dict[str, Set[Tuple[str, str]]] = {}
    heads: Dict[str, Set[Tuple[str, str]]] = {}
    for line in _data_text("onet_titles.tsv").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        title, occupation, family = line.split("\t")
        titles.setdefault(title, set()).add((occupation, family))
        heads.setdefault(title.split()[-1], set()).add((occupation, family))
    return OnetLexicon(titles, heads)


@dataclass
class RoleSet:
    roles: List[Tuple[str, int]] = field(default_factory=list)
    occupations: List[Tuple[str, str]] = field(default_factory=list)


def _excluded(token: str) -> bool:
    return token.startswith(EXCLUDED_PREFIXES) or token.endswith(EXCLUDED_SUFFIXES)


def _item_role(item: str, lexicon: FrozenSet[str]) -> Optional[str]:
    tokens = [t.strip(_STRIP).lower() for t in item.split()]
    tokens = [t for t in tokens if t]
    while tokens and tokens[0] in _ARTICLES:
        tokens = tokens[1:]
    for j, tok in enumerate(tokens):
        if j > 0 and (tok in _SCAN_BARRIER or tok in _ARTICLES):
            return None
        if tok in lexicon and not _excluded(tok):
            return " ".join(tokens[: j + 1])
    return None


def extract_roles(
    about_page: Document,
    lexicon: Optional[FrozenSet[str]] = None,
    patterns: Optional[Tuple[re.Pattern, ...]] = None,
) -> RoleSet:
    """Roles self-identified in the page, with their sentence indices."""
    lexicon = lexicon if lexicon is not None else load_role_lexicon()
    patterns = patterns if patterns is not None else load_role_patterns()
    roles: List[Tuple[str, int]] = []
    seen = set()
    for idx, sentence in enumerate(split_sentences(about_page.text)):
        normalized = sentence.replace("’", "'")
        for pattern in patterns:
            match = pattern.search(normalized)
            if not match:
                continue
            for item in _SPLIT_ITEMS.split(match.group("tail")):
                if not item.strip():
                    continue
                surface = _item_role(item, lexicon)
                if surface is None:
                    break
                if (surface, idx) not in seen:
                    seen.add((surface, idx))
                    roles.append((surface, idx))
    return RoleSet(roles=roles)


def map_occupations(roles: RoleSet, onet: Optional[OnetLexicon] = None) -> RoleSet:
    """Attach O*NET occupations; ambiguous heads stay standalone roles."""
    onet = onet if onet is not None else load_onet_lexicon()
    out_roles = list(roles.roles)
    role_keys = set(out_roles)
    occupations: List[Tuple[str, str]] = []
    occ_seen = set()

    def _attach(surface: str) -> Optional[Tuple[str, str]]:
        exact = onet.titles.get(surface, set())
        if len(exact) == 1:
            return next(iter(exact))
        if exact:
            return None  # the surface itself is claimed by several occupations
        by_head = onet.heads.get(surface.split()[-1], set())
        if len(by_head) == 1:
            return next(iter(by_head))
        return None

    for surface, idx in roles.roles:
        occupation = _attach(surface)
        if occupation is not None and occupation not in occ_seen:
            occ_seen.add(occupation)
            occupations.append(occupation)
        head = surface.split()[-1]
        if head != surface and (head, idx) not in role_keys:
            role_keys.add((head, idx))
            out_roles.append((head, idx))
    return RoleSet(roles=out_roles, occupations=occupations)
