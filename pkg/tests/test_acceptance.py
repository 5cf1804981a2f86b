"""Release gates: one test per shipped guarantee, at its stated tolerance.

Each test prints a single summary line with the measured value next to
the tolerance it must meet, so a verbose run doubles as a scorecard.
"""

import hashlib
import importlib.util
import json
import random
import time
from pathlib import Path

import numpy as np
import pytest

from filteraudit.audit import (
    Scenario,
    RegressionSpec,
    design_matrix,
    group_rates,
    npmi_scores,
    ols,
    spearman,
    surviving_ids,
)
from filteraudit.gopher import apply_gopher, score_gopher_batch
from filteraudit.kneser_ney import train_kn, perplexity
from filteraudit.linear_filters import (
    HashedFeaturizer,
    score_english,
    score_quality,
    train_langid,
    train_quality,
)
from filteraudit.seeds import derive_seed
from filteraudit.text import Document

from oracles import gopher_measurements, gopher_rules, npmi_table
from test_gopher import boundary_docs

REPO = Path(__file__).resolve().parents[1]
GOLDEN = Path(__file__).parent / "golden"


def _doc(i, text):
    return Document(id=f"d{i:05d}", url="http://h/x", text=text)


def _report(label, detail):
    print(f"PASS {label}: {detail}")


# -- 1. rule-based filter vs brute-force oracle -------------------------------


def test_c01_rule_filter_oracle_equivalence():
    rng = random.Random(101)
    plain = ["the", "and", "market", "studio", "notes", "river", "winter",
             "glaze", "letter", "signal", "onward", "deep", "clay", "to"]
    noisy = ["###", "12,99", "x", "...", "buy!!!", "→", "Ω"]

    texts = []
    for _ in range(1000):
        n = rng.randint(0, 200)
        words = []
        for _ in range(n):
            bank = noisy if rng.random() < 0.15 else plain
            words.append(rng.choice(bank))
        text = " ".join(words)
        # rewrite some spaces as newlines so line-based rules see variety
        if rng.random() < 0.5:
            chars = list(text)
            for j, c in enumerate(chars):
                if c == " " and rng.random() < 0.1:
                    chars[j] = "\n"
            text = "".join(chars)
        if rng.random() < 0.2:
            text = "- " + text
        texts.append(text)

    t0 = time.perf_counter()
    reports = score_gopher_batch(texts)
    elapsed = time.perf_counter() - t0

    repetition_keys = [
        k for k in reports[0].measurements
        if "gram_char_fraction" in k or k.startswith("dup_line")
    ]
    assert len(repetition_keys) == 11
    for text, report in zip(texts, reports):
        expected = gopher_measurements(text)
        for key in repetition_keys:
            assert report.measurements[key] == expected[key], (key, text[:60])
        assert report.rules() == gopher_rules(expected), text[:60]

    assert elapsed < 10.0
    _report(
        "rule-filter oracle equivalence",
        f"1000 docs, 11 repetition fractions exact, all rule booleans match, "
        f"{elapsed:.2f}s < 10s",
    )


# -- 2. threshold boundary suite -----------------------------------------------


def test_c02_rule_filter_boundary_suite():
    docs = boundary_docs()
    assert len(docs) == 16
    for name, (text, rule, expected) in sorted(docs.items()):
        got = apply_gopher(text).rules()[rule]
        assert got is expected, f"{name}: {rule} = {got}, expected {expected}"
    _report(
        "rule-filter boundary suite",
        "16/16 boundary documents produce the expected rule booleans",
    )


# -- 3. n-gram model normalization and ordering --------------------------------


def test_c03_ngram_model_normalization_and_shuffle_gap():
    rng = random.Random(31)
    vocab = [f"w{i}" for i in range(40)]
    weights = [1.0 / (i + 1) for i in range(40)]
    tokens = rng.choices(vocab, weights=weights, k=1000)
    text = " ".join(tokens)
    model = train_kn([_doc(0, text)], order=5)

    words = model.vocabulary_words()
    worst = 0.0
    for _ in range(50):
        k = rng.randint(0, 4)
        ctx = tuple(rng.choice(vocab) for _ in range(k))
        total = sum(model.prob(ctx, w) for w in words)
        worst = max(worst, abs(total - 1.0))
    assert worst <= 1e-6

    base = perplexity(model, _doc(1, text)).perplexity
    wins = 0
    for trial in range(100):
        shuffled = tokens[:]
        random.Random(trial).shuffle(shuffled)
        wins += perplexity(model, _doc(2, " ".join(shuffled))).perplexity > base
    assert wins >= 95
    _report(
        "ngram model normalization",
        f"max |sum p - 1| = {worst:.2e} <= 1e-6 over 50 contexts; "
        f"training text beats its shuffle in {wins}/100 trials (need 95)",
    )


# -- 4. quality classifier separability -----------------------------------------


def test_c04_quality_classifier_separability(tmp_path):
    rng = random.Random(41)
    dictionary = ["river", "letter", "garden", "station", "evening", "market",
                  "thread", "copper", "window", "harvest", "signal", "meadow",
                  "the", "and", "of", "with", "under", "before"]

    def dict_doc(i):
        return _doc(i, " ".join(rng.choice(dictionary) for _ in range(40)))

    def gibberish_doc(i):
        return _doc(i, " ".join(
            "".join(rng.choice("bcdfghjklmnpqrstvwxz") for _ in range(rng.randint(3, 9)))
            for _ in range(40)
        ))

    pos = [dict_doc(i) for i in range(300)]
    neg = [gibberish_doc(i + 1000) for i in range(300)]
    feat = HashedFeaturizer("word_unigram_bigram", dimension=2**16, seed=4)
    model = train_quality(pos[:200], neg[:200], feat, seed=4)

    held_out = [(d, 1) for d in pos[200:]] + [(d, 0) for d in neg[200:]]
    correct = sum(
        (score_quality(model, d) > 0.5) == bool(y) for d, y in held_out
    )
    accuracy = correct / len(held_out)
    assert accuracy >= 0.95

    retrained = train_quality(pos[:200], neg[:200], feat, seed=4)
    assert np.array_equal(model.weights, retrained.weights)
    assert model.bias == retrained.bias
    from filteraudit.linear_filters import save_model

    save_model(model, tmp_path / "a.bin")
    save_model(retrained, tmp_path / "b.bin")
    assert (tmp_path / "a.bin").read_bytes() == (tmp_path / "b.bin").read_bytes()
    _report(
        "quality classifier separability",
        f"held-out accuracy {accuracy:.3f} >= 0.95; retrain bit-identical",
    )


# -- 5. language score monotone in mixture --------------------------------------


def test_c05_language_score_monotone_in_mixture():
    rng = random.Random(51)
    en_words = ["the", "river", "turns", "north", "after", "market", "square",
                "letters", "arrive", "slowly", "during", "winter"]
    xx_words = ["λαμο", "ρικα", "τεμπο", "σολι", "ναβε", "κιρο", "παλε",
                "μονι", "δαρο", "φεμι"]

    def paragraph(bank):
        return " ".join(rng.choice(bank) for _ in range(30))

    en_docs = [_doc(i, "\n\n".join(paragraph(en_words) for _ in range(3)))
               for i in range(30)]
    xx_docs = [_doc(i + 100, "\n\n".join(paragraph(xx_words) for _ in range(3)))
               for i in range(30)]
    feat = HashedFeaturizer("char_ngram_1_to_5", dimension=2**16, seed=5)
    model = train_langid({"en": en_docs, "xx": xx_docs}, feat, seed=5)

    fractions = [i / 10 for i in range(11)]
    scores = []
    for f in fractions:
        n_xx = round(10 * f)
        paras = [paragraph(xx_words) for _ in range(n_xx)]
        paras += [paragraph(en_words) for _ in range(10 - n_xx)]
        scores.append(score_english(model, _doc(500, "\n\n".join(paras))))
    rho = spearman(fractions, scores)
    assert rho <= -0.95
    _report(
        "language score monotonicity",
        f"Spearman rho = {rho:.3f} <= -0.95 over mixture sweep 0.0..1.0",
    )


# -- 6. scenario tie semantics ---------------------------------------------------


def test_c06_scenario_tie_semantics():
    distinct = {f"d{i}": i / 10000.0 for i in range(10000)}
    kept = surviving_ids(distinct, Scenario("retain_top", 0.10))
    assert len(kept) == 1000

    tied = {f"t{i}": 1.0 for i in range(9000)}
    low = {f"l{i}": i / 10000.0 for i in range(1000)}
    scores = {**tied, **low}
    kept = surviving_ids(scores, Scenario("remove_bottom", 0.20))
    removed = set(scores) - kept
    assert removed == set(low)
    _report(
        "scenario tie semantics",
        "retain-top 10% of 10000 distinct keeps exactly 1000; with 90% tied "
        "at max, remove-bottom 20% removes exactly the 1000 non-tied docs",
    )


# -- 7. group rate identity ------------------------------------------------------


def test_c07_group_rate_identity():
    worst = 0.0
    for instance in range(100):
        rng = random.Random(700 + instance)
        n = rng.randint(50, 300)
        scores = {f"d{i}": round(rng.random(), rng.choice((1, 2, 6))) for i in range(n)}
        group_names = [f"g{j}" for j in range(rng.randint(2, 6))]
        groups = {d: rng.choice(group_names) for d in scores}
        mode = ("retain_top", "remove_bottom")[instance % 2]
        scenario = Scenario(mode, rng.uniform(0.05, 0.95))

        rows = group_rates(scores, groups, scenario)
        weighted = sum(r.n * r.rate for r in rows) / sum(r.n for r in rows)
        kept = surviving_ids(scores, scenario)
        overall = len(kept) / n if mode == "retain_top" else (n - len(kept)) / n
        worst = max(worst, abs(weighted - overall))
    assert worst <= 1e-12
    _report(
        "group rate identity",
        f"max |weighted mean - overall rate| = {worst:.2e} <= 1e-12 "
        "over 100 random instances",
    )


# -- 8. association score oracle and bounds ---------------------------------------


def test_c08_association_score_oracle_and_bounds():
    vocab = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta"]

    worst = 0.0
    for instance in range(50):
        rng = random.Random(800 + instance)
        tokens_by_group = {
            g: [rng.choice(vocab) for _ in range(rng.randint(5, 40))]
            for g in ("g1", "g2", "g3")
        }
        docs_by_group = {
            g: [_doc(0, " ".join(toks))] for g, toks in tokens_by_group.items()
        }
        got = npmi_scores(docs_by_group)
        expected = npmi_table(tokens_by_group)
        flat = {
            (group, tok): value
            for group, per_term in got.items()
            for tok, value in per_term.items()
        }
        assert set(flat) == set(expected)
        for key, value in expected.items():
            worst = max(worst, abs(flat[key] - value))
    assert worst <= 1e-12

    lo = hi = 0.0
    for instance in range(10000):
        rng = random.Random(9000 + instance)
        docs_by_group = {
            g: [_doc(0, " ".join(rng.choice(vocab[:4]) for _ in range(rng.randint(1, 12))))]
            for g in ("a", "b", "c")[: rng.randint(2, 3)]
        }
        for per_term in npmi_scores(docs_by_group).values():
            for value in per_term.values():
                lo = min(lo, value)
                hi = max(hi, value)
    assert -1.0 - 1e-12 <= lo and hi <= 1.0 + 1e-12
    _report(
        "association score oracle",
        f"max |score - oracle| = {worst:.2e} <= 1e-12 on 50 three-group "
        f"corpora; range [{lo:.3f}, {hi:.3f}] within [-1, 1] over 10000 tables",
    )


# -- 9. regression coefficient recovery --------------------------------------------


def _planted_regression(noise_sd, seed):
    rng = np.random.default_rng(derive_seed(seed, "acceptance-regression"))
    topics = [f"topic {i}" for i in range(6)]
    regions = ["Africa", "Americas", "Asia", "Europe", "Oceania"]
    n = 10000
    rows = []
    for _ in range(n):
        rows.append(
            {
                "topic": topics[rng.integers(6)],
                "region": regions[rng.integers(5)],
                "individual": bool(rng.integers(2)),
                "core_anglophone": bool(rng.integers(2)),
                "log2_chars": float(rng.uniform(8, 14)),
                "score": 0.0,  # placeholder; y is planted below
            }
        )
    spec = RegressionSpec(
        dependent="score", topic_base="topic 0", region_base="Africa"
    )
    X, names, _ = design_matrix(rows, spec)

    planted = {
        "intercept": 0.30,
        "topic=topic 1": 0.12, "topic=topic 2": -0.08, "topic=topic 3": 0.05,
        "topic=topic 4": -0.15, "topic=topic 5": 0.02,
        "region=Americas": -0.04, "region=Asia": 0.09,
        "region=Europe": -0.11, "region=Oceania": 0.07,
        "individual": 0.06, "core_anglophone": -0.05, "log2_chars": 0.015,
    }
    beta = np.array([planted["intercept"]] + [planted[n] for n in names])
    signal = np.column_stack([np.ones(n), X]) @ beta
    y = signal + rng.normal(0.0, noise_sd, n) if noise_sd else signal.copy()
    return X, y, signal, names, planted


def test_c09_regression_coefficient_recovery():
    X, y, signal, names, planted = _planted_regression(noise_sd=0.01, seed=9)
    result = ols(X, y, names)
    fit = dict(zip(result.names, result.coef))
    errors = {k: abs(fit[k] - v) for k, v in planted.items()}
    worst_name, worst = max(errors.items(), key=lambda kv: kv[1])
    assert worst <= 0.01, (worst_name, worst)

    signal_var = signal.var()
    analytic_r2 = signal_var / (signal_var + 0.01**2)
    assert abs(result.r2 - analytic_r2) <= 0.005

    X0, y0, _, names0, planted0 = _planted_regression(noise_sd=0.0, seed=9)
    exact = ols(X0, y0, names0)
    fit0 = dict(zip(exact.names, exact.coef))
    worst0 = max(abs(fit0[k] - v) for k, v in planted0.items())
    assert worst0 <= 1e-8
    assert exact.r2 >= 1.0 - 1e-8
    _report(
        "regression coefficient recovery",
        f"noisy: max coef error {worst:.4f} <= 0.01, |R2 - analytic| = "
        f"{abs(result.r2 - analytic_r2):.2e} <= 0.005; noiseless: max error "
        f"{worst0:.1e} <= 1e-8",
    )


# -- 10. end-to-end golden run -------------------------------------------------------


def _load_pipeline_module():
    spec = importlib.util.spec_from_file_location(
        "demo_pipeline", REPO / "demos" / "run_pipeline.py"
    )
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def test_c10_pipeline_golden_run(tmp_path):
    pipeline = _load_pipeline_module()
    t0 = time.perf_counter()
    pipeline.run_pipeline(tmp_path, echo=False)
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0

    mismatches = []
    for report in ("subregion_quality", "role_langid"):
        for fmt in ("csv", "json", "svg"):
            got = (tmp_path / "reports" / report / f"rates.{fmt}").read_bytes()
            want = (GOLDEN / report / f"rates.{fmt}").read_bytes()
            if got != want:
                mismatches.append(f"reports/{report}/rates.{fmt}")

    digests = json.loads((GOLDEN / "digests.json").read_text())
    for name, want in digests.items():
        got = hashlib.sha256((tmp_path / name).read_bytes()).hexdigest()
        if got != want:
            mismatches.append(name)
    assert not mismatches, f"outputs differ from golden: {mismatches}"
    _report(
        "pipeline golden run",
        f"200-doc corpus through extract, 4 filters, 2 audits in "
        f"{elapsed:.1f}s < 60s; 6 report files byte-identical, "
        f"{len(digests)} artifact digests match",
    )


# -- 11. scoring throughput -----------------------------------------------------------


def test_c11_scoring_throughput():
    rng = random.Random(111)
    bank = ["the", "quick", "brown", "foxes", "jump", "over", "lazy", "dogs",
            "while", "seven", "wizards", "brew", "strong", "coffee", "and",
            "paint", "walls", "with", "bright", "colors"]
    docs = [" ".join(rng.choice(bank) for _ in range(500)) for _ in range(8000)]

    score_gopher_batch(docs[:100], threads=8)  # warm the compiled path
    best = 0.0
    for _ in range(2):
        t0 = time.perf_counter()
        reports = score_gopher_batch(docs, threads=8)
        rate = len(docs) / (time.perf_counter() - t0)
        best = max(best, rate)
    assert len(reports) == len(docs)
    assert best >= 20000, f"{best:,.0f} docs/s"
    _report(
        "scoring throughput",
        f"{best:,.0f} docs/s >= 20,000 docs/s on 500-token docs, 8 threads",
    )
