import math
import random

import pytest

from filteraudit.kneser_ney import (
    BOS_TOKEN,
    UNK_TOKEN,
    KneserNeyModel,
    perplexity,
    train_kn,
)
from filteraudit.text import Document


def _docs(*texts):
    return [
        Document(id=f"d{i}", url="http://h/x", text=t) for i, t in enumerate(texts)
    ]


# ---------------------------------------------------------------------------
# hand-computed tables for "a b a b", order 2, discount 0.75
#
# one sentence [a b a b]; padded [<s> a b a b]; bigram events:
#   (<s>,a):1  (a,b):2  (b,a):1
# continuation unigrams (distinct left-extensions): a:2, b:1; total 3, types 2
# vocab with UNK has V=3
#
#   p1(a)   = (2-0.75)/3 + 0.75*(2/3)*(1/3) = 7/12
#   p1(b)   = (1-0.75)/3 + 0.75*(2/3)*(1/3) = 1/4
#   p1(unk) =      0     + 0.75*(2/3)*(1/3) = 1/6
#   p(b|a)  = (2-0.75)/2 + 0.75*(1/2)*p1(b) = 23/32
#   p(a|a)  =      0     + 0.75*(1/2)*p1(a) = 7/32
#   p(a|<s>)= (1-0.75)/1 + 0.75*1*p1(a)     = 11/16


@pytest.fixture(scope="module")
def abab():
    return train_kn(_docs("a b a b"), order=2, discount=0.75)


def test_hand_computed_unigrams(abab):
    assert abab.prob((), "a") == pytest.approx(7 / 12, abs=1e-12)
    assert abab.prob((), "b") == pytest.approx(1 / 4, abs=1e-12)
    assert abab.prob((), UNK_TOKEN) == pytest.approx(1 / 6, abs=1e-12)


def test_hand_computed_bigrams(abab):
    assert abab.prob(("a",), "b") == pytest.approx(23 / 32, abs=1e-12)
    assert abab.prob(("a",), "a") == pytest.approx(7 / 32, abs=1e-12)
    assert abab.prob((BOS_TOKEN,), "a") == pytest.approx(11 / 16, abs=1e-12)


def test_contexts_normalize(abab):
    words = ["a", "b", UNK_TOKEN]
    for ctx in [(), ("a",), ("b",), (BOS_TOKEN,), ("never-seen",)]:
        total = sum(abab.prob(ctx, w) for w in words)
        assert total == pytest.approx(1.0, abs=1e-6), ctx


def test_perplexity_of_ab(abab):
    score = perplexity(abab, _docs("a b")[0])
    expected = math.exp(-(math.log(11 / 16) + math.log(23 / 32)) / 2)
    assert score.perplexity == pytest.approx(expected, rel=1e-12)
    assert score.token_count == 2
    assert score.doc_id == "d0"


def test_unigram_model_hand_computation():
    # order 1 on "a a a a": p(a) = (4-0.75)/4 + 0.75*(1/4)*(1/2) = 29/32
    model = train_kn(_docs("a a a a"), order=1, discount=0.75)
    assert model.prob((), "a") == pytest.approx(29 / 32, abs=1e-12)
    assert model.prob((), UNK_TOKEN) == pytest.approx(3 / 32, abs=1e-12)
    score = perplexity(model, _docs("a")[0])
    assert score.perplexity == pytest.approx(32 / 29, rel=1e-12)


def test_oov_only_doc_is_finite(abab):
    score = perplexity(abab, _docs("zzz qqq")[0])
    assert math.isfinite(score.perplexity)
    assert score.perplexity > 0


def test_empty_doc_errors(abab):
    with pytest.raises(ValueError, match="no tokens"):
        perplexity(abab, _docs("")[0])


def test_empty_corpus_errors():
    with pytest.raises(ValueError, match="empty training corpus"):
        train_kn([], order=2)
    with pytest.raises(ValueError, match="empty training corpus"):
        train_kn(_docs("", "   "), order=2)


def test_discount_precondition():
    with pytest.raises(ValueError):
        train_kn(_docs("a b"), order=2, discount=0.0)
    with pytest.raises(ValueError):
        train_kn(_docs("a b"), order=2, discount=1.0)
    with pytest.raises(ValueError):
        train_kn(_docs("a b"), order=0)


def _toy_corpus(rng, n_tokens=1000):
    # repeated collocations with some noise vocabulary
    phrases = [
        "the quick brown fox",
        "jumps over the lazy dog",
        "a stitch in time saves nine",
        "better late than never",
    ]
    words = []
    while len(words) < n_tokens:
        words.extend(rng.choice(phrases).split())
        words.append(rng.choice(["alpha", "beta", "gamma", "delta"]))
    return " ".join(words[:n_tokens])


def test_training_text_beats_shuffles():
    rng = random.Random(11)
    text = _toy_corpus(rng)
    model = train_kn(_docs(text), order=3)
    base = perplexity(model, _docs(text)[0]).perplexity
    wins = 0
    tokens = text.split()
    for trial in range(20):
        shuffled = tokens[:]
        random.Random(trial).shuffle(shuffled)
        ppl = perplexity(model, Document("s", "http://h/x", " ".join(shuffled))).perplexity
        wins += ppl > base
    assert wins >= 19


def test_normalization_on_random_contexts():
    rng = random.Random(3)
    text = _toy_corpus(rng, 400)
    model = train_kn(_docs(text), order=5)
    words = model.vocabulary_words()
    assert UNK_TOKEN in words
    pool = [w for w in words if w != UNK_TOKEN]
    for _ in range(25):
        k = rng.randint(0, 4)
        ctx = tuple(rng.choice(pool) for _ in range(k))
        total = sum(model.prob(ctx, w) for w in words)
        assert total == pytest.approx(1.0, abs=1e-6)
        assert all(model.prob(ctx, w) > 0 for w in words[:5])


def test_doubling_text_preserves_perplexity(abab):
    one = perplexity(abab, _docs("A b a b.")[0]).perplexity
    two = perplexity(abab, _docs("A b a b. A b a b.")[0]).perplexity
    assert two == pytest.approx(one, abs=1e-9)


def test_training_order_invariance():
    docs = _docs("a b a b", "b a cat dog", "the cat sat")
    m1 = train_kn(docs, order=3)
    m2 = train_kn(list(reversed(docs)), order=3)
    assert m1.counts == m2.counts
    assert m1.vocab == m2.vocab


def test_save_load_roundtrip(tmp_path, abab):
    path = tmp_path / "kn.bin"
    abab.save(path)
    loaded = KneserNeyModel.load(path)
    assert loaded.order == abab.order
    assert loaded.discount == abab.discount
    assert loaded.prob(("a",), "b") == abab.prob(("a",), "b")
    doc = _docs("a b oov")[0]
    assert perplexity(loaded, doc).perplexity == perplexity(abab, doc).perplexity


def test_load_rejects_foreign_files(tmp_path):
    path = tmp_path / "junk.bin"
    path.write_bytes(b"\x80\x04junkjunk")
    with pytest.raises(ValueError):
        KneserNeyModel.load(path)
