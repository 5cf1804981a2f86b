#!/usr/bin/env python3
"""Run the whole pipeline on the bundled 200-document mini corpus.

Steps: extract about pages and social profiles, train the three
trainable filters, score the hosts with all four filters, then audit
two dimensions. Everything is seeded, so the outputs in the report
directories are byte-identical from run to run.

Usage: python3 demos/run_pipeline.py [output_dir]
"""

import sys
import time
from pathlib import Path

from filteraudit.cli import main as cli
from filteraudit.data import bundled_path


def run(argv, echo=True):
    if echo:
        print("$ filteraudit " + " ".join(argv))
    code = cli(argv)
    if code != 0:
        sys.exit(code)


def run_pipeline(out: Path, echo: bool = True) -> None:
    """Extract, train, score all four filters, audit two dimensions."""
    out.mkdir(parents=True, exist_ok=True)
    mini = bundled_path("mini/mini.jsonl")
    kn_train = bundled_path("mini/kn_train.jsonl")
    pos = bundled_path("mini/quality_pos.jsonl")
    neg = bundled_path("mini/quality_neg.jsonl")
    en = bundled_path("mini/langid_en.jsonl")
    xx = bundled_path("mini/langid_xx.jsonl")

    hosts = out / "hosts.jsonl"
    profiles = out / "profiles.jsonl"

    def step(argv):
        run(argv, echo=echo)

    step(["extract", "--input", str(mini), "--output", str(hosts),
         "--profiles", str(profiles), "--seed", "7"])

    step(["train", "--filter", "wiki-ppl", "--corpus", str(kn_train),
         "--order", "3", "--output", str(out / "wiki_ppl.bin"), "--seed", "7"])
    step(["train", "--filter", "quality", "--positive", str(pos),
         "--negative", str(neg), "--name", "wiki", "--dimension", "65536",
         "--output", str(out / "quality.bin"), "--seed", "7"])
    step(["train", "--filter", "langid", "--language", f"en={en}",
         "--language", f"xx={xx}", "--dimension", "65536",
         "--output", str(out / "langid.bin"), "--seed", "7"])

    step(["score", "--filter", "gopher", "--input", str(hosts),
         "--output", str(out / "gopher.jsonl")])
    step(["score", "--filter", "wiki-ppl", "--input", str(hosts),
         "--model", str(out / "wiki_ppl.bin"),
         "--output", str(out / "wiki_ppl.jsonl")])
    step(["score", "--filter", "quality", "--input", str(hosts),
         "--model", str(out / "quality.bin"), "--filter-name", "wiki",
         "--output", str(out / "quality.jsonl")])
    step(["score", "--filter", "langid", "--input", str(hosts),
         "--model", str(out / "langid.bin"),
         "--output", str(out / "langid.jsonl")])

    step(["audit", "--scores", str(out / "quality.jsonl"),
         "--profiles", str(profiles), "--dimension", "subregion",
         "--scenario", "remove-bottom", "--min-group", "1",
         "--report", str(out / "reports" / "subregion_quality")])
    step(["audit", "--scores", str(out / "langid.jsonl"),
         "--profiles", str(profiles), "--dimension", "role",
         "--scenario", "retain-top", "--min-group", "1",
         "--report", str(out / "reports" / "role_langid")])


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "pipeline_out")
    t0 = time.perf_counter()
    run_pipeline(out)
    print(f"\npipeline finished in {time.perf_counter() - t0:.1f}s -> {out}/")


if __name__ == "__main__":
    main()
