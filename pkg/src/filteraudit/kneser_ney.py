"""Interpolated Kneser-Ney language models with perplexity scoring.

The model predicts the tokens of a document sentence by sentence.  Each
sentence is left-padded with ``order - 1`` begin markers so the first word
is scored against a start-of-sentence context; no end-of-sentence event is
predicted, which keeps ``token_count`` equal to the whitespace token count
of the document.

Counts at the highest order are raw occurrence counts.  Every lower order
uses continuation counts (the number of distinct single-token left
extensions seen at the order above), and the unigram distribution reserves
its discount mass for a uniform distribution over the vocabulary including
the unknown token.  A fixed absolute discount is shared by all orders.
"""

from __future__ import annotations

import hashlib
import math
import pickle
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, Sequence, Tuple

from .text import Document, split_sentences, tokenize

UNK_TOKEN = "<unk>"
BOS_TOKEN = "<s>"

_UNK_ID = 0
_BOS_ID = -1

_MAGIC = "filteraudit-kneser-ney"
_FORMAT_VERSION = 1

Gram = Tuple[int, ...]


def _vocab_hash(words: Sequence[str]) -> str:
    digest = hashlib.blake2b(digest_size=16)
    for word in words:
        digest.update(word.encode("utf-8"))
        digest.update(b"\x00")
    return digest.hexdigest()


def _sentence_token_ids(doc_text: str, vocab: Dict[str, int]) -> list[list[int]]:
    out = []
    for sentence in split_sentences(doc_text):
        tokens = tokenize(sentence)
        if tokens:
            out.append([vocab.get(t, _UNK_ID) for t in tokens])
    return out


@dataclass
class PerplexityScore:
    doc_id: str
    perplexity: float
    token_count: int


class KneserNeyModel:
    """Trained n-gram tables plus the probability / persistence API."""

    def __init__(
        self,
        order: int,
        discount: float,
        vocab: Dict[str, int],
        counts: Dict[int, Dict[Gram, int]],
    ):
        self.order = order
        self.discount = discount
        self.vocab = vocab
        self.counts = counts
        self._words = [UNK_TOKEN] + sorted(vocab, key=vocab.get)[1:]
        # context -> (total count, distinct continuations), per order >= 2
        self._ctx: Dict[int, Dict[Gram, Tuple[int, int]]] = {}
        for o in range(2, order + 1):
            table: Dict[Gram, Tuple[int, int]] = {}
            for gram, c in counts[o].items():
                ctx = gram[:-1]
                tot, types = table.get(ctx, (0, 0))
                table[ctx] = (tot + c, types + 1)
            self._ctx[o] = table
        self._uni_total = sum(counts[1].values())
        self._uni_types = len(counts[1])
        self._vsize = len(vocab)  # includes UNK, excludes BOS

    # -- probabilities ----------------------------------------------------

    def _id(self, token: str) -> int:
        if token == BOS_TOKEN:
            return _BOS_ID
        return self.vocab.get(token, _UNK_ID)

    def prob(self, context: Sequence[str], word: str) -> float:
        """p(word | context) under interpolated Kneser-Ney.

        ``context`` may be any length up to ``order - 1``; longer contexts
        are truncated to their final ``order - 1`` tokens.  Tokens outside
        the vocabulary map to the unknown token and BOS_TOKEN marks a
        sentence start.
        """
        k = self.order - 1
        ids = tuple(self._id(t) for t in context)[len(context) - k :] if k else ()
        return self._prob_ids(ids, self._id(word))

    def _prob_ids(self, ctx: Gram, wid: int) -> float:
        if not ctx:
            c = self.counts[1].get((wid,), 0)
            base = self.discount * self._uni_types / self._uni_total / self._vsize
            return max(c - self.discount, 0.0) / self._uni_total + base
        o = len(ctx) + 1
        tot, types = self._ctx[o].get(ctx, (0, 0))
        if tot == 0:
            return self._prob_ids(ctx[1:], wid)
        c = self.counts[o].get(ctx + (wid,), 0)
        backoff = self.discount * types / tot
        return max(c - self.discount, 0.0) / tot + backoff * self._prob_ids(ctx[1:], wid)

    def vocabulary_words(self) -> list[str]:
        return list(self._words)

    # -- persistence -------------------------------------------------------

    def save(self, path) -> None:
        payload = {
            "magic": _MAGIC,
            "format_version": _FORMAT_VERSION,
            "order": self.order,
            "discount": self.discount,
            "words": self._words[1:],  # UNK implicit at id 0
            "counts": self.counts,
            "vocab_hash": _vocab_hash(self._words),
        }
        Path(path).write_bytes(pickle.dumps(payload, protocol=4))

    @classmethod
    def load(cls, path) -> "KneserNeyModel":
        try:
            payload = pickle.loads(Path(path).read_bytes())
        except Exception as exc:
            raise ValueError(f"not a language model file: {path}") from exc
        if not isinstance(payload, dict) or payload.get("magic") != _MAGIC:
            raise ValueError(f"not a language model file: {path}")
        if payload.get("format_version") != _FORMAT_VERSION:
            raise ValueError(
                f"unsupported model format version {payload.get('format_version')!r}"
            )
        words = payload["words"]
        vocab = {UNK_TOKEN: _UNK_ID}
        for i, w in enumerate(words, start=1):
            vocab[w] = i
        model = cls(payload["order"], payload["discount"], vocab, payload["counts"])
        if _vocab_hash(model._words) != payload["vocab_hash"]:
            raise ValueError("model file vocabulary hash mismatch")
        return model


def train_kn(
    corpus: Iterable[Document], order: int = 5, discount: float = 0.75
) -> KneserNeyModel:
    """Train an interpolated Kneser-Ney model of the given order.

    Documents are counted in sorted id order so the tables do not depend
    on input ordering.  Raises ValueError when the corpus contains no
    tokens or the discount is outside (0, 1).
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if not 0.0 < discount < 1.0:
        raise ValueError(f"discount must be in (0, 1), got {discount}")

    docs = sorted(corpus, key=lambda d: d.id)
    vocab: Dict[str, int] = {UNK_TOKEN: _UNK_ID}
    for tok in sorted({t for d in docs for t in tokenize(d.text)}):
        vocab[tok] = len(vocab)

    top: Dict[Gram, int] = {}
    for doc in docs:
        for ids in _sentence_token_ids(doc.text, vocab):
            padded = [_BOS_ID] * (order - 1) + ids
            for i in range(len(ids)):
                gram = tuple(padded[i : i + order])
                top[gram] = top.get(gram, 0) + 1
    if not top:
        raise ValueError("empty training corpus")

    counts: Dict[int, Dict[Gram, int]] = {order: top}
    for o in range(order - 1, 0, -1):
        lower: Dict[Gram, int] = {}
        for gram in counts[o + 1]:
            suffix = gram[1:]
            lower[suffix] = lower.get(suffix, 0) + 1
        counts[o] = lower
    return KneserNeyModel(order, discount, vocab, counts)


def perplexity(model: KneserNeyModel, doc: Document) -> PerplexityScore:
    """Perplexity of a document; errors on documents without tokens."""
    sentences = _sentence_token_ids(doc.text, model.vocab)
    n_tokens = sum(len(s) for s in sentences)
    if n_tokens == 0:
        raise ValueError(f"no tokens to score in document {doc.id!r}")
    log_sum = 0.0
    k = model.order - 1
    for ids in sentences:
        padded = [_BOS_ID] * k + ids
        for i in range(len(ids)):
            ctx = tuple(padded[i : i + k])
            log_sum += math.log(model._prob_ids(ctx, ids[i]))
    return PerplexityScore(doc.id, math.exp(-log_sum / n_tokens), n_tokens)
