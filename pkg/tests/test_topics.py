import math
import random

import numpy as np
import pytest

from filteraudit.socialdims.topics import TfidfVectorizer, fit_topics
from filteraudit.text import Document

VOCAB_A = "pottery glaze kiln ceramic clay wheel stoneware porcelain bisque slip".split()
VOCAB_B = "kernel compiler syntax debugger runtime bytecode linker parser stack heap".split()


def _doc(i, words, rng, length=25):
    return Document(id=f"d{i:03d}", url="http://h/x", text=" ".join(rng.choice(words) for _ in range(length)))


def _planted(rng, n_per=40):
    docs = [_doc(i, VOCAB_A, rng) for i in range(n_per)]
    docs += [_doc(100 + i, VOCAB_B, rng) for i in range(n_per)]
    return docs


def test_tfidf_shapes_and_norms():
    rng = random.Random(0)
    docs = _planted(rng, 10)
    vec = TfidfVectorizer()
    X = vec.fit_transform([d.text for d in docs])
    assert X.shape == (20, len(vec.vocabulary))
    norms = np.sqrt(np.asarray(X.multiply(X).sum(axis=1)).ravel())
    assert np.allclose(norms, 1.0)
    assert set(vec.vocabulary) == set(VOCAB_A) | set(VOCAB_B)


def test_tfidf_df_floor():
    texts = ["common rare1", "common rare2", "common rare3"]
    vec = TfidfVectorizer(min_df=2)
    vec.fit_transform(texts)
    assert set(vec.vocabulary) == {"common"}


def test_tfidf_idf_deterministic():
    texts = ["a b c", "a b", "a"]
    v1, v2 = TfidfVectorizer(), TfidfVectorizer()
    v1.fit_transform(texts)
    v2.fit_transform(list(texts))
    assert v1.vocabulary == v2.vocabulary
    assert np.array_equal(v1.idf, v2.idf)


def test_two_planted_topics_perfectly_split():
    rng = random.Random(7)
    docs = _planted(rng)
    model = fit_topics(docs, k=2, seed=3)
    labels = model.assignments
    first, second = set(labels[:40]), set(labels[40:])
    assert first.isdisjoint(second)
    assert len(first) == len(second) == 1
    # each centroid's top terms come from its own planted vocabulary
    for cluster in (labels[0], labels[40]):
        top = model.top_terms[cluster][:5]
        vocab = VOCAB_A if cluster == labels[0] else VOCAB_B
        assert set(top) <= set(vocab)


def test_k1_centroid_is_mean():
    rng = random.Random(2)
    docs = _planted(rng, 8)
    model = fit_topics(docs, k=1, seed=0)
    assert model.assignments == [0] * 16
    X = model.vectorizer.transform([d.text for d in docs])
    assert np.allclose(model.centroids[0], np.asarray(X.mean(axis=0)).ravel(), atol=1e-12)


def test_hard_balance_exact_sizes():
    rng = random.Random(5)
    docs = _planted(rng, 30)  # 60 docs
    model = fit_topics(docs, k=3, seed=1, balance_slack=0.0)
    sizes = np.bincount(model.assignments, minlength=3)
    assert sizes.tolist() == [20, 20, 20]


def test_balance_slack_caps_sizes():
    rng = random.Random(6)
    docs = _planted(rng, 25)  # 50 docs
    model = fit_topics(docs, k=5, seed=2, balance_slack=0.2)
    cap = math.ceil(50 / 5) * 1.2
    assert max(np.bincount(model.assignments, minlength=5)) <= cap


def test_objective_non_increasing():
    rng = random.Random(9)
    docs = _planted(rng)
    model = fit_topics(docs, k=4, seed=5)
    trace = model.objective_trace
    assert len(trace) >= 1
    assert all(b <= a + 1e-9 for a, b in zip(trace, trace[1:]))


def test_fit_deterministic():
    rng = random.Random(1)
    docs = _planted(rng, 15)
    m1 = fit_topics(docs, k=3, seed=11)
    m2 = fit_topics(docs, k=3, seed=11)
    assert m1.assignments == m2.assignments
    assert np.array_equal(m1.centroids, m2.centroids)
    assert m1.top_terms == m2.top_terms


def test_too_few_documents_errors():
    rng = random.Random(4)
    docs = _planted(rng, 2)
    with pytest.raises(ValueError, match="k"):
        fit_topics(docs, k=5, seed=0)


def test_assign_new_documents():
    rng = random.Random(8)
    docs = _planted(rng)
    model = fit_topics(docs, k=2, seed=3)
    fresh_a = _doc(900, VOCAB_A, rng)
    fresh_b = _doc(901, VOCAB_B, rng)
    la, lb = model.assign([fresh_a.text, fresh_b.text])
    assert la == model.assignments[0]
    assert lb == model.assignments[40]
