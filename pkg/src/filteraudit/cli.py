"""Command line for the whole pipeline: extract, train, score, audit.

One binary drives every stage so runs stay reproducible: a single
``--seed`` feeds all randomness through labeled sub-seeds, and each
command leaves a manifest (command line, config digest, input digests,
seed, version, wall time) next to its primary output.

Exit codes: 0 success, 1 runtime error, 2 usage error, 3 schema
violation, 4 missing input or model file.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from . import __version__
from .audit import Scenario, emit_report, group_rate_dicts, group_rates, group_rates_multi
from .config import Config, load_config
from .gopher import score_gopher_batch
from .ingest import extract_host_records, read_host_records, write_host_records
from .io import SchemaError, iter_jsonl, json_digest, read_corpus, write_jsonl
from .kneser_ney import KneserNeyModel, perplexity, train_kn
from .linear_filters import (
    HashedFeaturizer,
    LangIdModel,
    QualityModel,
    ingest_external_scores,
    load_model,
    save_model,
    score_english,
    score_quality,
    train_langid,
    train_quality,
    validate_scores,
)
from .manifest import build_manifest, write_manifest
from .scores import FilterScore, read_scores, write_scores
from .seeds import derive_seed
from .socialdims import SocialProfile, build_profiles, read_profiles, write_profiles
from .text import Document

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_SCHEMA = 3
EXIT_MISSING = 4

DIMENSIONS = ("topic", "role", "subregion", "indorg")
SCENARIO_MODES = {"retain-top": "retain_top", "remove-bottom": "remove_bottom"}
TRAINABLE_FILTERS = ("wiki-ppl", "quality", "langid")
SCORING_FILTERS = ("gopher", "wiki-ppl", "quality", "langid")


class UsageError(Exception):
    """Flag combination that parses but cannot run."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="filteraudit",
        description="Corpus filters and per-group audit reports.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="select one about page per hostname")
    p.add_argument("--input", required=True, help="corpus JSONL with id, url, text")
    p.add_argument("--output", required=True, help="host records JSONL")
    p.add_argument("--profiles", help="also write social profiles to this path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="TOML file overriding packaged defaults")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", help="fit a filter model")
    p.add_argument("--filter", required=True, choices=TRAINABLE_FILTERS)
    p.add_argument("--output", required=True, help="model file to write")
    p.add_argument("--corpus", help="training corpus (wiki-ppl)")
    p.add_argument("--order", type=int, default=5, help="n-gram order (wiki-ppl)")
    p.add_argument("--discount", type=float, default=0.75)
    p.add_argument("--positive", help="positive class corpus (quality)")
    p.add_argument("--negative", help="negative class corpus (quality)")
    p.add_argument("--name", help="positive corpus name stored in the model")
    p.add_argument(
        "--language",
        action="append",
        metavar="LANG=PATH",
        help="labelled corpus (langid); repeat once per language",
    )
    p.add_argument("--dimension", type=int, default=2**20, help="hashed feature space")
    p.add_argument("--epochs", type=int, default=3)
    p.add_argument("--learning-rate", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="TOML file overriding packaged defaults")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("score", help="score every document with one filter")
    p.add_argument("--filter", required=True, choices=SCORING_FILTERS)
    p.add_argument("--input", required=True, help="corpus or host records JSONL")
    p.add_argument("--output", required=True, help="scores JSONL")
    p.add_argument("--model", help="model file (wiki-ppl, quality, langid)")
    p.add_argument(
        "--filter-name", help='value for the "filter" field; defaults to --filter'
    )
    p.add_argument("--threads", type=int, default=1, help="worker pool size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="TOML file overriding packaged defaults")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("audit", help="per-group rates under a filtering scenario")
    p.add_argument("--scores", required=True, help="scores JSONL")
    p.add_argument("--profiles", required=True, help="profiles JSONL")
    p.add_argument("--dimension", required=True, choices=DIMENSIONS)
    p.add_argument("--scenario", required=True, choices=sorted(SCENARIO_MODES))
    p.add_argument(
        "--percentile", type=float, help="cut fraction; defaults from config"
    )
    p.add_argument("--report", required=True, help="output directory")
    p.add_argument(
        "--min-group", type=int, help="smallest group audited; defaults from config"
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="TOML file overriding packaged defaults")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("report", help="render a rows file as csv, json, or svg")
    p.add_argument("--input", required=True, help="JSON list of row objects")
    p.add_argument("--format", required=True, choices=("csv", "json", "svg"))
    p.add_argument("--output", required=True)
    p.add_argument("--columns", help="comma-separated column order")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("validate", help="check files against their schemas")
    p.add_argument("--corpus", help="corpus JSONL to check")
    p.add_argument("--scores", help="scores JSONL to check")
    p.add_argument("--against", help="corpus the scores must cover")
    p.add_argument("--profiles", help="profiles JSONL to check")
    p.set_defaults(func=cmd_validate)

    return parser


# -- shared helpers ----------------------------------------------------------


def _config_digest(config: Config) -> str:
    return json_digest(asdict(config))


def _require(path_arg: Optional[str], flag: str) -> Path:
    if not path_arg:
        raise UsageError(f"{flag} is required for this invocation")
    path = Path(path_arg)
    if not path.exists():
        raise FileNotFoundError(f"{flag} file does not exist: {path}")
    return path


def _load_documents(path) -> List[Document]:
    """Corpus rows, or host records collapsed to their about pages.

    Host-record files are detected from the first row; about pages are
    re-keyed under the hostname so scores join profiles directly.
    """
    path = Path(path)
    first = next(iter_jsonl(path), None)
    if first is not None and "hostname" in first and "about_page" in first:
        return [
            Document(id=rec.hostname, url=rec.about_page.url, text=rec.about_page.text)
            for rec in read_host_records(path)
        ]
    return list(read_corpus(path))


def _emit_manifest(args, output, inputs: Dict[str, str], config: Optional[Config]) -> None:
    manifest = build_manifest(
        argv=["filteraudit", *args.argv],
        config_digest=_config_digest(config) if config else "",
        inputs=inputs,
        seed=getattr(args, "seed", None),
    )
    manifest.wall_time_s = round(time.perf_counter() - args.t0, 6)
    write_manifest(output, manifest)


def _map_documents(
    docs: List[Document], fn: Callable[[Document], float], threads: int
) -> List[Tuple[str, float]]:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(fn, docs))
    else:
        values = [fn(d) for d in docs]
    return [(d.id, v) for d, v in zip(docs, values)]


# -- subcommands -------------------------------------------------------------


def cmd_extract(args) -> int:
    config = load_config(args.config)
    corpus = read_corpus(_require(args.input, "--input"))
    records = extract_host_records(corpus, seed=args.seed)
    write_host_records(args.output, records)
    _emit_manifest(args, args.output, {"input": args.input}, config)
    message = f"extracted {len(records)} hosts -> {args.output}"
    if args.profiles:
        profiles = build_profiles(records)
        write_profiles(args.profiles, profiles)
        message += f"; {len(profiles)} profiles -> {args.profiles}"
    print(message)
    return EXIT_OK


def _parse_language_flags(flags: Optional[List[str]]) -> Dict[str, Path]:
    if not flags:
        raise UsageError("--language LANG=PATH is required at least twice for langid")
    corpora = {}
    for item in flags:
        lang, sep, path = item.partition("=")
        if not sep or not lang or not path:
            raise UsageError(f"--language expects LANG=PATH, got {item!r}")
        corpora[lang] = _require(path, f"--language {lang}")
    if len(corpora) < 2:
        raise UsageError("langid training needs at least two --language corpora")
    return corpora


def cmd_train(args) -> int:
    config = load_config(args.config)
    inputs: Dict[str, str] = {}
    if args.filter == "wiki-ppl":
        corpus_path = _require(args.corpus, "--corpus")
        inputs["corpus"] = str(corpus_path)
        model = train_kn(
            read_corpus(corpus_path), order=args.order, discount=args.discount
        )
        model.save(args.output)
        detail = f"order {args.order} over {len(model.vocabulary_words())} word types"
    elif args.filter == "quality":
        pos_path = _require(args.positive, "--positive")
        neg_path = _require(args.negative, "--negative")
        inputs["positive"] = str(pos_path)
        inputs["negative"] = str(neg_path)
        featurizer = HashedFeaturizer(
            "word_unigram_bigram",
            dimension=args.dimension,
            seed=derive_seed(args.seed, "quality-featurizer"),
        )
        model = train_quality(
            read_corpus(pos_path),
            read_corpus(neg_path),
            featurizer,
            epochs=args.epochs,
            learning_rate=args.learning_rate,
            seed=args.seed,
            positive_corpus_name=args.name or pos_path.stem,
        )
        save_model(model, args.output)
        detail = f"training accuracy {model.training_accuracy:.4f}"
    else:
        paths = _parse_language_flags(args.language)
        inputs.update({f"language:{lang}": str(p) for lang, p in paths.items()})
        featurizer = HashedFeaturizer(
            "char_ngram_1_to_5",
            dimension=args.dimension,
            seed=derive_seed(args.seed, "langid-featurizer"),
        )
        model = train_langid(
            {lang: read_corpus(p) for lang, p in paths.items()},
            featurizer,
            epochs=args.epochs,
            learning_rate=args.learning_rate,
            seed=args.seed,
        )
        save_model(model, args.output)
        detail = f"languages {', '.join(model.languages)}"
    _emit_manifest(args, args.output, inputs, config)
    print(f"trained {args.filter} model -> {args.output} ({detail})")
    return EXIT_OK


def cmd_score(args) -> int:
    config = load_config(args.config)
    docs = _load_documents(_require(args.input, "--input"))
    inputs = {"input": args.input}
    filter_name = args.filter_name or args.filter

    if args.filter == "gopher":
        reports = score_gopher_batch([d.text for d in docs], threads=args.threads)
        rows = []
        for doc, report in zip(docs, reports):
            rules = report.rules()
            rows.append(
                {
                    "id": doc.id,
                    "pass": report.passed,
                    "rules": rules,
                    "measurements": report.measurements,
                    "score": sum(rules.values()) / len(rules),
                }
            )
        rows.sort(key=lambda r: r["id"])
        write_jsonl(args.output, rows)
    else:
        model_path = _require(args.model, "--model")
        inputs["model"] = str(model_path)
        if args.filter == "wiki-ppl":
            model = KneserNeyModel.load(model_path)
            fn = lambda d: perplexity(model, d).perplexity
        elif args.filter == "quality":
            model = load_model(model_path)
            if not isinstance(model, QualityModel):
                raise UsageError(f"{model_path} is not a quality model")
            fn = lambda d: score_quality(model, d)
        else:
            model = load_model(model_path)
            if not isinstance(model, LangIdModel):
                raise UsageError(f"{model_path} is not a langid model")
            fn = lambda d: score_english(model, d)
        pairs = _map_documents(docs, fn, args.threads)
        write_scores(
            args.output, [FilterScore(doc_id, filter_name, s) for doc_id, s in pairs]
        )

    _emit_manifest(args, args.output, inputs, config)
    print(f"scored {len(docs)} documents with {filter_name} -> {args.output}")
    return EXIT_OK


def _profile_groups(
    profiles: List[SocialProfile], dimension: str
) -> Dict[str, Tuple[str, ...]]:
    """Group memberships per hostname; profiles without a value drop out."""
    out: Dict[str, Tuple[str, ...]] = {}
    for p in profiles:
        if dimension == "topic":
            value = () if p.topic is None else (str(p.topic),)
        elif dimension == "role":
            value = tuple(p.roles)
        elif dimension == "subregion":
            value = () if p.subregion is None else (p.subregion,)
        else:
            value = () if p.ind_org is None else (p.ind_org,)
        if value:
            out[p.hostname] = value
    return out


def cmd_audit(args) -> int:
    config = load_config(args.config)
    scores = read_scores(_require(args.scores, "--scores"))
    profiles = read_profiles(_require(args.profiles, "--profiles"))
    mode = SCENARIO_MODES[args.scenario]
    percentile = args.percentile
    if percentile is None:
        percentile = (
            config.retain_percentile if mode == "retain_top" else config.remove_percentile
        )
    min_group = args.min_group
    if min_group is None:
        min_group = {
            "role": config.min_role_count,
            "subregion": config.min_country_count,
        }.get(args.dimension, 1)

    memberships = _profile_groups(profiles, args.dimension)
    counts: Dict[str, int] = {}
    for groups in memberships.values():
        for g in set(groups):
            counts[g] = counts.get(g, 0) + 1
    audited = {g for g, n in counts.items() if n >= min_group}
    memberships = {
        host: tuple(g for g in groups if g in audited)
        for host, groups in memberships.items()
    }
    memberships = {h: gs for h, gs in memberships.items() if gs}
    if not memberships:
        raise ValueError(
            f"no group of dimension {args.dimension!r} reaches min size {min_group}"
        )

    scenario = Scenario(mode, percentile)
    if args.dimension == "role":
        rows = group_rates_multi(scores, memberships, scenario)
    else:
        rows = group_rates(scores, {h: gs[0] for h, gs in memberships.items()}, scenario)

    out_dir = Path(args.report)
    out_dir.mkdir(parents=True, exist_ok=True)
    dicts = group_rate_dicts(rows)
    for fmt in ("csv", "json", "svg"):
        emit_report(dicts, fmt, out_dir / f"rates.{fmt}")
    _emit_manifest(
        args, out_dir, {"scores": args.scores, "profiles": args.profiles}, config
    )
    print(
        f"audited {len(rows)} {args.dimension} groups "
        f"({args.scenario} {percentile:g}) -> {out_dir}"
    )
    return EXIT_OK


def cmd_report(args) -> int:
    path = _require(args.input, "--input")
    rows = json.loads(path.read_text("utf-8"))
    if not isinstance(rows, list) or not all(isinstance(r, dict) for r in rows):
        raise SchemaError(f"{path}: expected a JSON array of objects")
    columns = args.columns.split(",") if args.columns else None
    emit_report(rows, args.format, args.output, columns=columns)
    print(f"wrote {len(rows)} rows as {args.format} -> {args.output}")
    return EXIT_OK


def cmd_validate(args) -> int:
    if not (args.corpus or args.scores or args.profiles):
        raise UsageError("nothing to validate: pass --corpus, --scores, or --profiles")
    if args.corpus:
        docs = _load_documents(_require(args.corpus, "--corpus"))
        print(f"corpus ok: {len(docs)} documents")
    if args.scores:
        scores = ingest_external_scores(
            _require(args.scores, "--scores"), probability=False
        )
        if args.against:
            corpus = _load_documents(_require(args.against, "--against"))
            report = validate_scores(scores, [d.id for d in corpus])
            if not report.ok:
                for doc_id in report.missing_ids:
                    print(f"missing score for document {doc_id!r}", file=sys.stderr)
                for doc_id in report.unknown_ids:
                    print(f"score for unknown document {doc_id!r}", file=sys.stderr)
                return EXIT_SCHEMA
        print(f"scores ok: {len(scores.scores)} rows")
    if args.profiles:
        profiles = read_profiles(_require(args.profiles, "--profiles"))
        print(f"profiles ok: {len(profiles)} rows")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    t0 = time.perf_counter()
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = list(sys.argv[1:] if argv is None else argv)
    args.t0 = t0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except FileNotFoundError as exc:
        print(f"missing file: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
