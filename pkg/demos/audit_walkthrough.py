#!/usr/bin/env python3
"""Tour of the audit statistics on the mini pipeline's outputs.

Runs the pipeline (or reuses an existing output directory), then walks
through the library-level analyses that sit behind the `audit`
subcommand: per-group rates, distinctive vocabulary, role tiers, a rank
test, and a regression with dummy-coded groups.

Usage: python3 demos/audit_walkthrough.py [pipeline_dir]
"""

import math
import sys
from pathlib import Path

from filteraudit.audit import (
    Scenario,
    bonferroni,
    group_rates,
    mannwhitney,
    npmi_vocab,
    ols,
    role_tier_analysis,
)
from filteraudit.ingest import read_host_records
from filteraudit.scores import read_scores
from filteraudit.socialdims import read_profiles
from filteraudit.text import Document

import numpy as np

from run_pipeline import run_pipeline


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "pipeline_out")
    if not (out / "quality.jsonl").exists():
        print(f"building pipeline outputs under {out}/ ...\n")
        run_pipeline(out, echo=False)

    scores = read_scores(out / "quality.jsonl")
    profiles = read_profiles(out / "profiles.jsonl")
    hosts = {r.hostname: r for r in read_host_records(out / "hosts.jsonl")}
    pages = {
        h: Document(id=h, url=r.about_page.url, text=r.about_page.text)
        for h, r in hosts.items()
    }

    print("== removal rates by subregion (quality filter, bottom 10%) ==")
    groups = {p.hostname: p.subregion for p in profiles if p.subregion}
    rows = group_rates(scores, groups, Scenario("remove_bottom", 0.10))
    for row in rows:
        print(f"  {row.group:<34} n={row.n:>3}  removed {row.rate:6.1%}")

    print("\n== distinctive about-page vocabulary per subregion (npmi > 0.1) ==")
    docs_by_group = {}
    for p in profiles:
        if p.subregion:
            docs_by_group.setdefault(p.subregion, []).append(pages[p.hostname])
    for group, vocab in sorted(npmi_vocab(docs_by_group, min_count=2).items()):
        if vocab:
            print(f"  {group:<34} {', '.join(vocab[:6])}")

    print("\n== role tiers by mean quality score ==")
    role_pages = {}
    for p in profiles:
        for role in p.roles:
            role_pages.setdefault(role, []).append(pages[p.hostname])
    role_docs_for_vocab = {r: ds for r, ds in role_pages.items() if len(ds) >= 3}
    vocab = npmi_vocab(role_docs_for_vocab, min_count=2)
    tiers = role_tier_analysis(scores, role_docs_for_vocab, vocab)
    for tier in tiers:
        subset = "n/a" if tier.mean_subset is None else f"{tier.mean_subset:.3f}"
        print(
            f"  {tier.tier:<5} mean {tier.mean_all:.3f} +/- {tier.ci95_all:.3f} "
            f"(specific subset {subset})  roles: {', '.join(tier.roles[:5])}"
        )

    print("\n== rank test: teacher pages vs the rest ==")
    teacher = [scores[p.hostname] for p in profiles if "teacher" in p.roles]
    other = [scores[p.hostname] for p in profiles if "teacher" not in p.roles]
    result = mannwhitney(teacher, other)
    adjusted = bonferroni(result.p, comparisons=12)
    print(
        f"  U = {result.u:.1f}, p = {result.p:.4f} "
        f"(Bonferroni x12: {adjusted:.4f})"
    )

    print("\n== regression: quality score on subregion + page length ==")
    subregions = sorted({p.subregion for p in profiles if p.subregion})
    base, levels = subregions[0], subregions[1:]
    kept = [p for p in profiles if p.subregion]
    X = np.zeros((len(kept), len(levels) + 1))
    y = np.zeros(len(kept))
    for i, p in enumerate(kept):
        if p.subregion != base:
            X[i, levels.index(p.subregion)] = 1.0
        X[i, -1] = math.log2(len(pages[p.hostname].text))
        y[i] = scores[p.hostname]
    names = [f"subregion={s}" for s in levels] + ["log2_chars"]
    fit = ols(X, y, names)
    print(f"  n = {fit.n}, R2 = {fit.r2:.3f} (base level: {base})")
    for name, coef, se, stars in zip(fit.names, fit.coef, fit.stderr, fit.stars):
        print(f"  {name:<44} {coef:+.3f} (se {se:.3f}) {stars}")


if __name__ == "__main__":
    main()
