"""Hashed-feature logistic classifiers for quality and language scoring.

Two linear architectures cover all the trainable filters:

* a binary quality classifier (one per reference corpus, differing only in
  the positive training set), and
* a multinomial language scorer over character n-grams.

Features are hashed into a fixed power-of-two dimension with a keyed
blake2b digest, so vectors are stable across runs and platforms for a
given seed.  Scores produced by external language identifiers are not
recomputed here; they enter through ``ingest_external_scores``.
"""

from __future__ import annotations

import hashlib
import logging
import math
import pickle
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from .io import SchemaError, iter_jsonl
from .seeds import derive_seed
from .text import Document, paragraph_texts, split_paragraphs, tokenize

log = logging.getLogger(__name__)

MODES = ("word_unigram_bigram", "char_ngram_1_to_5")


class HashedFeaturizer:
    """Maps text to an L2-normalized sparse count vector of hashed features."""

    def __init__(self, mode: str, dimension: int = 2**20, seed: int = 0):
        if mode not in MODES:
            raise ValueError(f"unknown featurizer mode {mode!r}; expected one of {MODES}")
        if dimension <= 0 or dimension & (dimension - 1):
            raise ValueError(f"dimension must be a power of two, got {dimension}")
        self.mode = mode
        self.dimension = dimension
        self.seed = seed
        self._key = seed.to_bytes(8, "little", signed=False)

    def _index(self, data: str) -> int:
        h = hashlib.blake2b(data.encode("utf-8"), digest_size=8, key=self._key)
        return int.from_bytes(h.digest(), "little") & (self.dimension - 1)

    def _grams(self, text: str) -> Iterable[str]:
        if self.mode == "word_unigram_bigram":
            toks = tokenize(text)
            for t in toks:
                yield "u\x00" + t
            for a, b in zip(toks, toks[1:]):
                yield "b\x00" + a + "\x00" + b
        else:
            for n in range(1, 6):
                for i in range(len(text) - n + 1):
                    yield f"c{n}\x00" + text[i : i + n]

    def featurize(self, text: str) -> Dict[int, float]:
        counts: Dict[int, float] = {}
        for gram in self._grams(text):
            idx = self._index(gram)
            counts[idx] = counts.get(idx, 0.0) + 1.0
        if not counts:
            return counts
        norm = math.sqrt(math.fsum(v * v for v in counts.values()))
        return {i: v / norm for i, v in counts.items()}


def _sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-min(z, 700.0)))
    e = math.exp(max(z, -700.0))
    return e / (1.0 + e)


def _dot(weights: np.ndarray, vec: Dict[int, float]) -> float:
    return math.fsum(weights[i] * v for i, v in vec.items())


@dataclass
class QualityModel:
    featurizer: HashedFeaturizer
    weights: np.ndarray
    bias: float
    positive_corpus_name: str
    training_accuracy: Optional[float] = None


def train_quality(
    pos: Iterable[Document],
    neg: Iterable[Document],
    featurizer: HashedFeaturizer,
    epochs: int = 3,
    learning_rate: float = 0.1,
    seed: int = 0,
    positive_corpus_name: str = "custom",
) -> QualityModel:
    """Fit a binary logistic model by seeded SGD over shuffled examples.

    Both streams must be non-empty.  Identical inputs and seed give
    bit-identical weights.
    """
    pos_vecs = [featurizer.featurize(d.text) for d in pos]
    neg_vecs = [featurizer.featurize(d.text) for d in neg]
    if not pos_vecs:
        raise ValueError("empty positive class")
    if not neg_vecs:
        raise ValueError("empty negative class")

    examples = [(v, 1.0) for v in pos_vecs] + [(v, 0.0) for v in neg_vecs]
    rng = np.random.default_rng(derive_seed(seed, "train-quality"))
    weights = np.zeros(featurizer.dimension)
    bias = 0.0
    for _ in range(epochs):
        for j in rng.permutation(len(examples)):
            vec, y = examples[j]
            g = learning_rate * (_sigmoid(_dot(weights, vec) + bias) - y)
            for i, v in vec.items():
                weights[i] -= g * v
            bias -= g

    correct = sum(
        (_sigmoid(_dot(weights, vec) + bias) > 0.5) == (y > 0.5) for vec, y in examples
    )
    accuracy = correct / len(examples)
    log.info(
        "quality model %s: %d pos / %d neg, training accuracy %.4f",
        positive_corpus_name, len(pos_vecs), len(neg_vecs), accuracy,
    )
    return QualityModel(featurizer, weights, float(bias), positive_corpus_name, accuracy)


def score_quality(model: QualityModel, doc: Document) -> float:
    vec = model.featurizer.featurize(doc.text)
    return _sigmoid(_dot(model.weights, vec) + model.bias)


@dataclass
class LangIdModel:
    featurizer: HashedFeaturizer
    weights: np.ndarray  # (n_languages, dimension)
    biases: np.ndarray
    languages: List[str]

    def predict_proba(self, text: str) -> Dict[str, float]:
        vec = self.featurizer.featurize(text)
        z = self.biases.copy()
        for i, v in vec.items():
            z += self.weights[:, i] * v
        z -= z.max()
        e = np.exp(z)
        p = e / e.sum()
        return dict(zip(self.languages, p.tolist()))


def train_langid(
    corpora: Dict[str, Iterable[Document]],
    featurizer: HashedFeaturizer,
    epochs: int = 3,
    learning_rate: float = 0.1,
    seed: int = 0,
) -> LangIdModel:
    """Fit a multinomial logistic language scorer over char n-grams."""
    languages = sorted(corpora)
    if len(languages) < 2:
        raise ValueError(f"need at least 2 languages, got {len(languages)}")
    examples = []
    for label_idx, lang in enumerate(languages):
        vecs = [featurizer.featurize(d.text) for d in corpora[lang]]
        if not vecs:
            raise ValueError(f"empty corpus for language {lang!r}")
        examples.extend((v, label_idx) for v in vecs)

    rng = np.random.default_rng(derive_seed(seed, "train-langid"))
    weights = np.zeros((len(languages), featurizer.dimension))
    biases = np.zeros(len(languages))
    for _ in range(epochs):
        for j in rng.permutation(len(examples)):
            vec, y = examples[j]
            z = biases.copy()
            for i, v in vec.items():
                z += weights[:, i] * v
            z -= z.max()
            e = np.exp(z)
            grad = e / e.sum()
            grad[y] -= 1.0
            grad *= learning_rate
            for i, v in vec.items():
                weights[:, i] -= grad * v
            biases -= grad
    return LangIdModel(featurizer, weights, biases, languages)


def score_english(model: LangIdModel, doc: Document) -> float:
    if "en" not in model.languages:
        raise ValueError('language "en" is not in the model')
    return model.predict_proba(doc.text)["en"]


@dataclass
class ParagraphLanguage:
    start: int
    end: int
    language: str
    score: float


def paragraph_language_profile(model: LangIdModel, doc: Document) -> List[ParagraphLanguage]:
    """Best language and its probability for each paragraph of the document."""
    out = []
    for (start, end), text in zip(split_paragraphs(doc.text), paragraph_texts(doc.text)):
        probs = model.predict_proba(text)
        best = max(probs, key=lambda lang: (probs[lang], lang))
        out.append(ParagraphLanguage(start, end, best, probs[best]))
    return out


def english_paragraph_fraction(model: LangIdModel, doc: Document) -> float:
    """Fraction of paragraphs whose best language is English.

    A document with no paragraphs counts as fully English (nothing to flag).
    """
    profile = paragraph_language_profile(model, doc)
    if not profile:
        return 1.0
    return sum(p.language == "en" for p in profile) / len(profile)


# -- persistence -------------------------------------------------------------

_MAGIC = "filteraudit-linear-filter"
_FORMAT_VERSION = 1


def _pack(arr: np.ndarray):
    """Store only nonzero entries; SGD leaves untouched features at 0."""
    flat = np.asarray(arr, dtype=np.float64).ravel()
    idx = np.flatnonzero(flat)
    return arr.shape, idx, flat[idx]


def _unpack(shape, idx, vals) -> np.ndarray:
    flat = np.zeros(int(np.prod(shape)))
    flat[idx] = vals
    return flat.reshape(shape)


def save_model(model, path) -> None:
    """Write a QualityModel or LangIdModel as a versioned binary file."""
    if not isinstance(model, (QualityModel, LangIdModel)):
        raise TypeError(f"cannot save model of type {type(model).__name__}")
    f = model.featurizer
    payload = {
        "magic": _MAGIC,
        "format_version": _FORMAT_VERSION,
        "featurizer": {"mode": f.mode, "dimension": f.dimension, "seed": f.seed},
    }
    if isinstance(model, QualityModel):
        payload["kind"] = "quality"
        payload["weights"] = _pack(model.weights)
        payload["bias"] = model.bias
        payload["positive_corpus_name"] = model.positive_corpus_name
        payload["training_accuracy"] = model.training_accuracy
    elif isinstance(model, LangIdModel):
        payload["kind"] = "langid"
        payload["weights"] = _pack(model.weights)
        payload["biases"] = np.asarray(model.biases, dtype=np.float64)
        payload["languages"] = list(model.languages)
    Path(path).write_bytes(pickle.dumps(payload, protocol=4))


def load_model(path):
    """Read a model written by ``save_model``; returns the original type."""
    try:
        payload = pickle.loads(Path(path).read_bytes())
    except Exception as exc:
        raise ValueError(f"not a linear filter model file: {path}") from exc
    if not isinstance(payload, dict) or payload.get("magic") != _MAGIC:
        raise ValueError(f"not a linear filter model file: {path}")
    if payload.get("format_version") != _FORMAT_VERSION:
        raise ValueError(
            f"unsupported model format version {payload.get('format_version')!r}"
        )
    spec = payload["featurizer"]
    featurizer = HashedFeaturizer(spec["mode"], spec["dimension"], spec["seed"])
    if payload["kind"] == "quality":
        return QualityModel(
            featurizer,
            _unpack(*payload["weights"]),
            payload["bias"],
            payload["positive_corpus_name"],
            payload["training_accuracy"],
        )
    if payload["kind"] == "langid":
        return LangIdModel(
            featurizer,
            _unpack(*payload["weights"]),
            payload["biases"].copy(),
            list(payload["languages"]),
        )
    raise ValueError(f"unknown model kind {payload['kind']!r}")


@dataclass
class ExternalScoreSet:
    filter_name: str
    scores: Dict[str, float]
    probability: bool = True


@dataclass
class ScoreValidation:
    missing_ids: List[str] = field(default_factory=list)
    unknown_ids: List[str] = field(default_factory=list)
    out_of_range: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.missing_ids or self.unknown_ids or self.out_of_range)


def ingest_external_scores(
    path, filter_name: Optional[str] = None, probability: bool = True
) -> ExternalScoreSet:
    """Read a JSONL file of {"id", "score"} rows; duplicate ids are an error."""
    path = Path(path)
    scores: Dict[str, float] = {}
    for n, row in enumerate(iter_jsonl(path), start=1):
        if "id" not in row or "score" not in row:
            raise SchemaError(f'{path} row {n}: expected an object with "id" and "score"')
        doc_id = row["id"]
        if not isinstance(doc_id, str):
            raise SchemaError(f"{path} row {n}: id must be a string")
        if not isinstance(row["score"], (int, float)) or isinstance(row["score"], bool):
            raise SchemaError(f"{path} row {n}: score must be a number")
        if doc_id in scores:
            raise SchemaError(f"{path} row {n}: duplicate id {doc_id!r}")
        scores[doc_id] = float(row["score"])
    return ExternalScoreSet(filter_name or path.stem, scores, probability)


def validate_scores(scores: ExternalScoreSet, corpus_ids: Sequence[str]) -> ScoreValidation:
    """Check an external score set against the corpus under audit."""
    corpus = set(corpus_ids)
    report = ScoreValidation(
        missing_ids=sorted(corpus - scores.scores.keys()),
        unknown_ids=sorted(scores.scores.keys() - corpus),
    )
    if scores.probability:
        report.out_of_range = sorted(
            i for i, s in scores.scores.items() if not 0.0 <= s <= 1.0
        )
    return report
