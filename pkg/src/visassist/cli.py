"""Command line entry point.

Exit codes: 0 success, 2 usage or validation error, 3 news source fetch
failure (the briefing is still written).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, load_config
from .decode import ScorerError, TableScorer, beam_decode, greedy_decode
from .discovery import DetectionDocument, discover
from .dispatch import Inputs, MissingInputError, dispatch
from .intent import extract_object_name, normalize_command, parse_command
from .layout import LayoutDocument, reading_order, render_text
from .metrics import bleu_report, cosine_report
from .news import FixtureProvider, HttpProvider, SourcesError, collect_headlines, load_sources, render_briefing
from .vocabulary import AliasTable, ClassVocabulary

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FETCH = 3


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _vocab(cfg):
    return ClassVocabulary.load(cfg.vocabulary_path), AliasTable.load(cfg.alias_path)


def _provider(args):
    return FixtureProvider(args.fixtures) if args.fixtures else HttpProvider()


def cmd_intent(args, cfg):
    vocab, aliases = _vocab(cfg)
    intent = parse_command(" ".join(args.text), vocab, aliases)
    d = intent.to_dict()
    text = d["kind"]
    if "object_name" in d:
        text += f": {d['object_name']}" + ("" if d["resolved"] else " (unresolved)")
    _emit(args, d, text)
    return EXIT_OK


def cmd_discover(args, cfg):
    vocab, aliases = _vocab(cfg)
    doc = DetectionDocument.load(args.detections)
    name = extract_object_name(normalize_command(args.query), vocab, aliases)
    text = discover(doc, name, vocab, cfg)
    _emit(args, {"query": args.query, "object_name": getattr(name, "phrase", name), "response": text}, text)
    return EXIT_OK


def cmd_read_order(args, cfg):
    ordered = reading_order(LayoutDocument.load(args.layout), cfg)
    text = render_text(ordered)
    if args.json:
        _emit(args, {**ordered.to_dict(), "text": text}, text)
        return EXIT_OK
    sys.stdout.write(text)
    if not args.plain:
        print(
            f"columns: {ordered.column_count}; outliers removed: {list(ordered.removed_outliers)}",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_news(args, cfg):
    sources = load_sources(args.sources)
    if not sources:
        raise UsageError(f"{args.sources}: no sources listed")
    results = collect_headlines(sources, _provider(args), cfg)
    text = render_briefing(results)
    Path(args.out).write_text(text, encoding="utf-8")
    failed = {r.source.name: r.errors for r in results if r.errors}
    payload = {
        "output": str(args.out),
        "sources": [
            {"name": r.source.name, "via": r.via, "headlines": [a.title for a in r.articles], "errors": r.errors}
            for r in results
        ],
    }
    _emit(args, payload, text)
    for name, errors in failed.items():
        print(f"warning: {name}: {'; '.join(errors)}", file=sys.stderr)
    return EXIT_FETCH if failed else EXIT_OK


def _segments(path):
    return Path(path).read_text(encoding="utf-8").splitlines()


def cmd_metrics(args, cfg):
    candidates = _segments(args.candidate)
    references = [_segments(p) for p in args.reference]
    for path, refs in zip(args.reference, references):
        if len(refs) != len(candidates):
            raise UsageError(f"{path} has {len(refs)} segments, candidate has {len(candidates)}")
    if args.metric == "cosine" and len(references) != 1:
        raise UsageError("cosine takes exactly one --reference file")
    rows = []
    for i, cand in enumerate(candidates):
        refs = [r[i] for r in references]
        if args.metric == "bleu":
            res = bleu_report(cand, refs, args.max_n, args.smooth or cfg.bleu_smoothing)
        else:
            res = cosine_report(cand, refs[0])
        rows.append({"segment": i, "score": res.score, "flags": list(res.flags)})
    mean = sum(r["score"] for r in rows) / len(rows) if rows else 0.0
    payload = {"metric": args.metric, "segments": rows, "mean": mean}
    if args.metric == "bleu":
        payload["max_n"] = args.max_n
    print(json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_decode(args, cfg):
    scorer = TableScorer.load(args.scorer)
    max_len = args.max_len or cfg.max_caption_len
    if args.greedy:
        hyp = greedy_decode(scorer, max_len)
    else:
        hyp = beam_decode(scorer, args.beam or cfg.beam_width, max_len, cfg.length_normalize)
    words = scorer.decode_tokens(hyp.body(scorer.end_id))
    payload = {"tokens": list(hyp.tokens), "words": words, "log_score": hyp.log_score,
               "mode": "greedy" if args.greedy else f"beam-{args.beam or cfg.beam_width}"}
    _emit(args, payload, " ".join(words))
    return EXIT_OK


def cmd_run(args, cfg):
    inputs = Inputs(
        detections=DetectionDocument.load(args.detections) if args.detections else None,
        layout=LayoutDocument.load(args.layout) if args.layout else None,
        sources=args.sources,
        provider=_provider(args),
        news_out=args.out,
    )
    response = dispatch(args.command, inputs, cfg)
    _emit(args, response.to_dict(), response.text)
    if response.module == "news" and response.diagnostics.get("failed_sources"):
        return EXIT_FETCH
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON config file")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")

    parser = argparse.ArgumentParser(prog="visassist", description=__doc__.splitlines()[0], parents=[common])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("intent", parents=[common], help="parse a command")
    p.add_argument("text", nargs="+")
    p.set_defaults(func=cmd_intent)

    p = sub.add_parser("discover", parents=[common], help="find an object in detector output")
    p.add_argument("--detections", required=True)
    p.add_argument("--query", required=True, help="object name or full command")
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("read-order", parents=[common], help="order OCR blocks for reading")
    p.add_argument("--layout", required=True)
    p.add_argument("--plain", action="store_true", help="text only, no summary on stderr")
    p.set_defaults(func=cmd_read_order)

    p = sub.add_parser("news", parents=[common], help="compile a headline briefing")
    p.add_argument("--sources", required=True)
    p.add_argument("--fixtures", help="directory of recorded responses instead of the network")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_news)

    p = sub.add_parser("metrics", parents=[common], help="BLEU or cosine similarity")
    p.add_argument("metric", choices=["bleu", "cosine"])
    p.add_argument("--candidate", required=True)
    p.add_argument("--reference", required=True, action="append")
    p.add_argument("--max-n", type=int, default=4, choices=[1, 2, 3, 4])
    p.add_argument("--smooth", action="store_true", help="add-one smoothing for n >= 2")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("decode", parents=[common], help="decode with a table scorer")
    p.add_argument("--scorer", required=True)
    p.add_argument("--beam", type=int)
    p.add_argument("--greedy", action="store_true")
    p.add_argument("--max-len", type=int)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("run", parents=[common], help="dispatch a command end to end")
    p.add_argument("--command", required=True)
    p.add_argument("--detections")
    p.add_argument("--layout")
    p.add_argument("--sources")
    p.add_argument("--fixtures")
    p.add_argument("--out", help="write the news briefing here")
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    args.json = getattr(args, "json", False)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(getattr(args, "config", None))
        return args.func(args, cfg)
    except (ConfigError, MissingInputError, SourcesError, ScorerError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
