"""Unigram tf-idf embedding and balanced k-means topic clustering.

Balance is enforced during the assignment step: documents are assigned
greedily in order of increasing distance, and a cluster stops accepting
documents once it reaches ceil(N/k) * (1 + slack).  Iteration stops as
soon as the assignment objective fails to improve, so the reported
objective trace is non-increasing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence

import numpy as np
import scipy.sparse as sp
from sklearn.cluster import kmeans_plusplus

from ..seeds import derive_seed
from ..text import Document, tokenize


class TfidfVectorizer:
    """Lowercased unigram counts weighted by smoothed idf, L2-normalized.

    idf(t) = ln((1 + n) / (1 + df(t))) + 1.  Terms appearing in fewer
    than ``min_df`` documents are dropped from the vocabulary.
    """

    def __init__(self, min_df: int = 1):
        self.min_df = min_df
        self.vocabulary: Dict[str, int] = {}
        self.idf: np.ndarray = np.zeros(0)

    def fit_transform(self, texts: Sequence[str]) -> sp.csr_matrix:
        df: Dict[str, int] = {}
        tokenized = []
        for text in texts:
            toks = [t.lower() for t in tokenize(text)]
            tokenized.append(toks)
            for t in set(toks):
                df[t] = df.get(t, 0) + 1
        self.vocabulary = {
            t: i for i, t in enumerate(sorted(t for t, c in df.items() if c >= self.min_df))
        }
        n = len(texts)
        self.idf = np.array(
            [math.log((1 + n) / (1 + df[t])) + 1.0 for t in self.vocabulary], dtype=float
        )
        return self._rows(tokenized)

    def transform(self, texts: Sequence[str]) -> sp.csr_matrix:
        return self._rows([[t.lower() for t in tokenize(x)] for x in texts])

    def _rows(self, tokenized: List[List[str]]) -> sp.csr_matrix:
        indptr, indices, data = [0], [], []
        for toks in tokenized:
            counts: Dict[int, float] = {}
            for t in toks:
                idx = self.vocabulary.get(t)
                if idx is not None:
                    counts[idx] = counts.get(idx, 0.0) + 1.0
            row = sorted((i, c * self.idf[i]) for i, c in counts.items())
            norm = math.sqrt(math.fsum(w * w for _, w in row))
            for i, w in row:
                indices.append(i)
                data.append(w / norm if norm else 0.0)
            indptr.append(len(indices))
        return sp.csr_matrix(
            (data, indices, indptr), shape=(len(tokenized), len(self.vocabulary))
        )


@dataclass
class TopicModel:
    k: int
    centroids: np.ndarray
    top_terms: List[List[str]]
    vectorizer: TfidfVectorizer
    assignments: List[int]
    objective_trace: List[float] = field(default_factory=list)

    def assign(self, texts: Sequence[str]) -> List[int]:
        """Nearest-centroid label for new texts (no capacity constraint)."""
        X = self.vectorizer.transform(texts)
        d = _sq_distances(X, self.centroids)
        return d.argmin(axis=1).tolist()


def _sq_distances(X: sp.csr_matrix, centroids: np.ndarray) -> np.ndarray:
    # rows of X are unit length: d^2 = 1 - 2 x.c + |c|^2
    cross = X @ centroids.T
    return 1.0 - 2.0 * cross + (centroids * centroids).sum(axis=1)


def _capped_assignment(d: np.ndarray, cap: int) -> np.ndarray:
    n, k = d.shape
    order = np.argsort(d, axis=None, kind="stable")
    labels = np.full(n, -1, dtype=int)
    sizes = np.zeros(k, dtype=int)
    placed = 0
    for flat in order:
        i, j = divmod(int(flat), k)
        if labels[i] >= 0 or sizes[j] >= cap:
            continue
        labels[i] = j
        sizes[j] += 1
        placed += 1
        if placed == n:
            break
    return labels


def fit_topics(
    about_pages: Iterable[Document],
    k: int = 50,
    seed: int = 0,
    balance_slack: float = 0.1,
    min_df: int = 1,
    max_iter: int = 50,
    n_top_terms: int = 10,
) -> TopicModel:
    """Cluster pages into k balanced topics over tf-idf unigram vectors."""
    docs = list(about_pages)
    if len(docs) < k:
        raise ValueError(f"need at least k={k} documents, got {len(docs)}")
    vectorizer = TfidfVectorizer(min_df=min_df)
    X = vectorizer.fit_transform([d.text for d in docs])
    n = X.shape[0]
    cap = max(1, int(math.ceil(n / k) * (1.0 + balance_slack)))

    centroids, _ = kmeans_plusplus(
        X, n_clusters=k, random_state=derive_seed(seed, "topics-init") % 2**32
    )
    if sp.issparse(centroids):  # pragma: no cover - depends on sklearn version
        centroids = centroids.toarray()
    centroids = np.asarray(centroids, dtype=float)

    labels = None
    trace: List[float] = []
    for _ in range(max_iter):
        d = _sq_distances(X, centroids)
        new_labels = _capped_assignment(d, cap)
        objective = float(d[np.arange(n), new_labels].sum())
        if trace and objective >= trace[-1] - 1e-12:
            break
        trace.append(objective)
        labels = new_labels
        for j in range(k):
            members = np.flatnonzero(labels == j)
            if members.size:
                centroids[j] = np.asarray(X[members].mean(axis=0)).ravel()

    terms = sorted(vectorizer.vocabulary, key=vectorizer.vocabulary.get)
    top_terms = []
    for j in range(k):
        weights = centroids[j]
        ranked = sorted(
            (i for i in range(len(terms)) if weights[i] > 0),
            key=lambda i: (-weights[i], terms[i]),
        )
        top_terms.append([terms[i] for i in ranked[:n_top_terms]])
    return TopicModel(k, centroids, top_terms, vectorizer, labels.tolist(), trace)
