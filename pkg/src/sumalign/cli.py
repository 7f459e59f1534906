"""Command-line entry points: build a cache, serve it, or report on it."""

from __future__ import annotations

import argparse
import json
import sys

from .lexalign import AlignConfig
from .pipeline import PipelineConfig, build_cache, load_jsonl, read_cache
from .semalign import ContextualStore, load_static_embeddings
from .textmodel import load_stoplist


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sumalign", description="Summary alignment analysis suite")
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="precompute all annotations for a corpus")
    build.add_argument("--input", required=True, help="corpus jsonl file")
    build.add_argument("--embeddings", required=True, help="static embedding file")
    build.add_argument("--contextual", help="contextual embedding jsonl; overrides --embeddings when given")
    build.add_argument("--out", required=True, help="output cache path")
    build.add_argument("--config", help="JSON config file (align / taxonomy / semantic sections)")
    build.add_argument("--stopwords", help="stopword list file overriding the builtin one")
    build.add_argument("--min-n", type=int, default=None, help="minimum shared n-gram length")
    build.add_argument("--tau-lex", type=float, default=None, help="lexical threshold for quadrant labels")
    build.add_argument("--tau-sem", type=float, default=None, help="semantic threshold for quadrant labels")
    build.add_argument("--top-k", type=int, default=None, help="ranked semantic matches cached per token")
    build.add_argument("--jobs", type=int, default=1, help="parallel workers over examples")
    build.add_argument("--fail-fast", action="store_true", help="abort on the first failing example")

    serve = sub.add_parser("serve", help="serve a built cache over HTTP")
    serve.add_argument("--cache", required=True)
    serve.add_argument("--port", type=int, default=8093)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--allow-origin", action="append", default=None, help="CORS origin (repeatable)")

    report = sub.add_parser("report", help="write a score table and figures from a cache")
    report.add_argument("--cache", required=True)
    report.add_argument("--out-dir", required=True)
    report.add_argument("--delimiter", default=",", help="field delimiter for the score table")

    return parser


def _config_from_args(args) -> PipelineConfig:
    config = PipelineConfig()
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
        align_data = data.get("align", {})
        config = PipelineConfig(
            align=AlignConfig(
                min_n=int(align_data.get("min_n", 1)),
                drop_stopword_only=bool(align_data.get("drop_stopword_only", True)),
                max_n=align_data.get("max_n"),
            ),
            tau_lex=float(data.get("taxonomy", {}).get("tau_lex", config.tau_lex)),
            tau_sem=float(data.get("taxonomy", {}).get("tau_sem", config.tau_sem)),
            top_k=int(data.get("semantic", {}).get("top_k", config.top_k)),
            novel_n=int(data.get("novel", {}).get("n", config.novel_n)),
        )
    overrides = {}
    if args.min_n is not None:
        overrides["align"] = AlignConfig(
            min_n=args.min_n, drop_stopword_only=config.align.drop_stopword_only, max_n=config.align.max_n
        )
    if args.tau_lex is not None:
        overrides["tau_lex"] = args.tau_lex
    if args.tau_sem is not None:
        overrides["tau_sem"] = args.tau_sem
    if args.top_k is not None:
        overrides["top_k"] = args.top_k
    if overrides:
        config = PipelineConfig(
            align=overrides.get("align", config.align),
            tau_lex=overrides.get("tau_lex", config.tau_lex),
            tau_sem=overrides.get("tau_sem", config.tau_sem),
            top_k=overrides.get("top_k", config.top_k),
            novel_n=config.novel_n,
        )
    return config


def _cmd_build(args) -> int:
    stoplist = load_stoplist(args.stopwords) if args.stopwords else None
    corpus = load_jsonl(args.input, stoplist=stoplist)
    store = ContextualStore.load(args.contextual) if args.contextual else load_static_embeddings(args.embeddings)
    config = _config_from_args(args)
    report = build_cache(
        corpus,
        store,
        config,
        args.out,
        stoplist=stoplist,
        fail_fast=args.fail_fast,
        jobs=args.jobs,
    )
    print(f"wrote {report.written} of {len(corpus)} examples to {report.path}")
    print(f"fingerprint {report.fingerprint}")
    if report.errors:
        print(f"{len(report.errors)} example(s) failed:", file=sys.stderr)
        for example_id, message in report.errors:
            print(f"  {example_id}: {message}", file=sys.stderr)
        return 1
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    origins = tuple(args.allow_origin) if args.allow_origin else ("*",)
    app = create_app(read_cache(args.cache), allow_origins=origins)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _cmd_report(args) -> int:
    from .report import write_report

    corpus = read_cache(args.cache)
    for path in write_report(corpus, args.out_dir, delimiter=args.delimiter):
        print(path)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "build":
        return _cmd_build(args)
    if args.command == "serve":
        return _cmd_serve(args)
    return _cmd_report(args)


if __name__ == "__main__":
    sys.exit(main())
