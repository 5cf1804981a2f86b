"""Individual-vs-organization classification from pronoun and name features.

The feature set is agnostic to topical content: five pronoun-series
shares, the share of tokens inside person-name mentions, and the number
of distinct first name tokens.  Person mentions are approximated without
a neural tagger: a run of capitalized tokens counts when it is anchored
by a known given name or an honorific (Dr. Chen), so bare proper nouns
like London never count.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Iterable, List, Optional, Tuple

import numpy as np
from sklearn.ensemble import RandomForestClassifier

from ..seeds import derive_seed
from ..text import Document, tokenize

PRONOUN_SERIES = {
    "i": ("i", "me", "my", "mine", "myself"),
    "we": ("we", "us", "our", "ours", "ourselves"),
    "she": ("she", "her", "hers", "herself"),
    "he": ("he", "him", "his", "himself"),
    "they": ("they", "them", "their", "theirs", "themselves"),
}

_STRIP = ".,;:!?()[]{}\"'`“”‘’"


def _lexicon(name: str) -> frozenset:
    text = resources.files("filteraudit.data").joinpath(name).read_text("utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())

_given_names: Optional[frozenset] = None
_honorifics: Optional[frozenset] = None


def _lexicons() -> Tuple[frozenset, frozenset]:
    global _given_names, _honorifics
    if _given_names is None:
        _given_names = _lexicon("given_names.txt")
        _honorifics = _lexicon("honorifics.txt")
    return _given_names, _honorifics


def person_entity_proxy(text: str) -> Tuple[float, int]:
    """(share of tokens inside person mentions, distinct first name tokens).

    A mention is a maximal run of capitalized tokens whose first token is
    a known given name, or an honorific followed by capitalized tokens.
    A sentence-final token ends its run.
    """
    names, honorifics = _lexicons()
    tokens = tokenize(text)
    if not tokens:
        return 0.0, 0
    stripped = [t.strip(_STRIP) for t in tokens]
    is_cap = [bool(s) and s[0].isupper() for s in stripped]
    ends_sentence = [t.rstrip(")\"'”’")[-1:] in (".", "!", "?") for t in tokens]

    in_mention = 0
    first_tokens = set()
    i = 0
    while i < len(tokens):
        s = stripped[i]
        is_honorific = is_cap[i] and s.rstrip(".").lower() in honorifics
        anchored = is_cap[i] and (
            s.lower() in names or (is_honorific and i + 1 < len(tokens) and is_cap[i + 1])
        )
        if not anchored:
            i += 1
            continue
        run_start = i
        if is_honorific:
            i += 1  # the anchor guarantees a capitalized token follows
        while not ends_sentence[i] and i + 1 < len(tokens) and is_cap[i + 1]:
            i += 1
        i += 1  # include the final capitalized token of the run
        in_mention += i - run_start
        first = run_start + 1 if is_honorific else run_start
        first_tokens.add(stripped[first])
    return in_mention / len(tokens), len(first_tokens)


@dataclass(frozen=True)
class IndOrgFeatures:
    i_share: float
    we_share: float
    she_share: float
    he_share: float
    they_share: float
    person_entity_share: float
    unique_person_first_tokens: int

    def to_vector(self) -> np.ndarray:
        return np.array(
            [
                self.i_share,
                self.we_share,
                self.she_share,
                self.he_share,
                self.they_share,
                self.person_entity_share,
                float(self.unique_person_first_tokens),
            ]
        )


def compute_ind_org_features(text: str) -> IndOrgFeatures:
    tokens = tokenize(text)
    shares = dict.fromkeys(PRONOUN_SERIES, 0)
    for tok in tokens:
        w = tok.strip(_STRIP).lower()
        for series, members in PRONOUN_SERIES.items():
            if w in members:
                shares[series] += 1
                break
    n = len(tokens) or 1
    entity_share, unique_first = person_entity_proxy(text)
    return IndOrgFeatures(
        shares["i"] / n,
        shares["we"] / n,
        shares["she"] / n,
        shares["he"] / n,
        shares["they"] / n,
        entity_share,
        unique_first,
    )


LABELS = ("individual", "organization")


def training_label(about_keyword: str) -> Optional[str]:
    """Map a URL keyword to a training label; plain "about" is ambiguous."""
    if about_keyword in ("about_me", "bio"):
        return "individual"
    if about_keyword == "about_us":
        return "organization"
    return None


@dataclass
class IndOrgModel:
    forest: RandomForestClassifier
    n_training_pages: int


@dataclass(frozen=True)
class IndOrgDecision:
    label: str
    confidence: float


def train_ind_org(
    pages: Iterable[Tuple[Document, str]], seed: int = 0
) -> IndOrgModel:
    """Fit the random forest on URL-keyword-labeled pages."""
    X: List[np.ndarray] = []
    y: List[int] = []
    for doc, keyword in pages:
        label = training_label(keyword)
        if label is None:
            continue
        X.append(compute_ind_org_features(doc.text).to_vector())
        y.append(LABELS.index(label))
    if len(set(y)) < 2:
        raise ValueError("training pages must include both individuals and organizations")
    forest = RandomForestClassifier(
        n_estimators=200,
        max_depth=70,
        min_samples_split=20,
        min_samples_leaf=2,
        criterion="gini",
        random_state=derive_seed(seed, "indorg-forest") % 2**32,
    )
    forest.fit(np.vstack(X), np.array(y))
    return IndOrgModel(forest, len(y))


def classify_ind_org(features: IndOrgFeatures, model: IndOrgModel) -> IndOrgDecision:
    """Label plus tree-vote share for the winning class."""
    proba = model.forest.predict_proba(features.to_vector().reshape(1, -1))[0]
    idx = int(np.argmax(proba))
    return IndOrgDecision(LABELS[model.forest.classes_[idx]], float(proba[idx]))
