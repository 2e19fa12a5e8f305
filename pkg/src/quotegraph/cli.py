"""Command-line interface.

Subcommands: ``pipeline``, ``graph-stats``, ``highlights``, ``rank``,
``evaluate``, ``audit-sample``, ``audit-score``.  Exit codes: 0 success,
1 usage error, 2 I/O error, 3 schema/validation error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import evalkit, records
from .corpus import DropReport, load_corpus
from .graph import build_graph, graph_stats
from .pipeline import PipelineConfig, run_pipeline
from .verbatim import MatchParams, confusion_report


class UsageError(ValueError):
    pass


class NoOverlapError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="quotegraph", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_match_flags(p):
        p.add_argument("--window", type=int, default=None, help="snippet window size")
        p.add_argument("--min-quote-words", type=int, default=None)
        p.add_argument("--max-quote-words", type=int, default=None)
        p.add_argument("--max-gap-run", type=int, default=None)
        p.add_argument("--max-skip-ratio", type=float, default=None)

    p = sub.add_parser("pipeline", help="run the full extraction pipeline")
    p.add_argument("--input", required=True, help="corpus JSONL file")
    p.add_argument("--output-dir", required=True)
    p.add_argument("--config", default=None, help="JSON config file")
    add_match_flags(p)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--emit-all", action="store_true", default=None)

    p = sub.add_parser("highlights", help="build highlight records from a graph file")
    p.add_argument("--input", required=True, help="corpus JSONL file")
    p.add_argument("--graph", required=True, help="graph JSONL file")
    p.add_argument("--output", required=True)
    p.add_argument("--emit-all", action="store_true", default=False)

    p = sub.add_parser("graph-stats", help="compute network statistics")
    p.add_argument("--graph", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--approx-pivots", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("rank", help="rank sentences of every corpus opinion")
    p.add_argument("--input", required=True, help="corpus JSONL file")
    p.add_argument("--ranker", required=True, choices=["textrank", "position", "random"])
    p.add_argument("--output", required=True)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("evaluate", help="score a ranking file against highlights")
    p.add_argument("--rankings", required=True)
    p.add_argument("--highlights", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--word-limit", type=int, default=None)
    p.add_argument("--top-k", type=int, default=5)
    p.add_argument(
        "--seed", type=int, default=None,
        help="echoed into the report (seed used to produce the rankings)",
    )

    p = sub.add_parser("audit-sample", help="sample records for human audit")
    p.add_argument("--graph", required=True)
    p.add_argument("--rejects", required=True)
    p.add_argument("--input", required=True, help="corpus JSONL file")
    p.add_argument("-k", type=int, default=180)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)

    p = sub.add_parser("audit-score", help="score human audit labels")
    p.add_argument("--audit", required=True)
    p.add_argument("--output", default=None)

    return parser


def _load_pipeline_config(args) -> PipelineConfig:
    values: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            values = json.load(fh)
    flag_map = {
        "window_n": args.window,
        "min_quote_words": args.min_quote_words,
        "max_quote_words": args.max_quote_words,
        "workers": args.workers,
        "seed": args.seed,
        "emit_all": args.emit_all,
    }
    for key, value in flag_map.items():
        if value is not None:
            values[key] = value
    match_values = {
        k: values.pop(k)
        for k in ("max_gap_run", "max_skip_ratio", "fuzzy_min_len", "fuzzy_edits")
        if k in values
    }
    if args.max_gap_run is not None:
        match_values["max_gap_run"] = args.max_gap_run
    if args.max_skip_ratio is not None:
        match_values["max_skip_ratio"] = args.max_skip_ratio
    values.pop("input", None)
    values.pop("output_dir", None)
    try:
        return PipelineConfig(match_params=MatchParams(**match_values), **values)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _cmd_pipeline(args) -> int:
    config = _load_pipeline_config(args)
    report = DropReport()
    corpus = load_corpus(args.input, report)
    result = run_pipeline(corpus, config, report)

    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    records.write_graph_file(out / "verbcl_graph.jsonl", result.edges)
    records.write_highlight_file(out / "verbcl_highlights.jsonl", result.highlights)
    records.write_graph_file(out / "rejects.jsonl", result.rejects)
    summary = {
        "opinions": len(corpus),
        "edges": len(result.edges),
        "rejects": len(result.rejects),
        "highlight_records": len(result.highlights),
        "drops": result.report.as_dict(),
        "config": {
            "window_n": config.window_n,
            "min_quote_words": config.min_quote_words,
            "max_quote_words": config.max_quote_words,
            "max_gap_run": config.match_params.max_gap_run,
            "max_skip_ratio": config.match_params.max_skip_ratio,
            "workers": config.workers,
            "seed": config.seed,
            "emit_all": config.emit_all,
        },
    }
    (out / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"wrote {len(result.edges)} edges, {len(result.rejects)} rejects to {out}")
    return 0


def _cmd_highlights(args) -> int:
    from .highlight import build_highlights

    report = DropReport()
    corpus = load_corpus(args.input, report)
    edges = records.read_graph_file(args.graph)
    highlights = build_highlights(edges, corpus, emit_all=args.emit_all, report=report)
    highlights.sort(key=lambda r: (r.opinion_id, r.sentence_id))
    records.write_highlight_file(args.output, highlights)
    print(f"wrote {len(highlights)} highlight records to {args.output}")
    return 0


def _cmd_graph_stats(args) -> int:
    edges = records.read_graph_file(args.graph)
    g = build_graph(edges)
    stats = graph_stats(g, approx_pivots=args.approx_pivots, seed=args.seed)
    Path(args.output).write_text(
        json.dumps(stats, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"wrote stats for {g.n_nodes} nodes to {args.output}")
    return 0


def _cmd_rank(args) -> int:
    corpus = load_corpus(args.input)
    rankings = []
    for opinion_id in sorted(corpus):
        opinion = corpus[opinion_id]
        if opinion.n_sentences < 1:
            continue
        if args.ranker == "textrank":
            rankings.append(evalkit.textrank_rank(opinion))
        elif args.ranker == "position":
            rankings.append(evalkit.position_rank(opinion))
        else:
            rankings.append(evalkit.random_rank(opinion, args.seed))
    records.write_ranking_file(args.output, rankings)
    print(f"wrote {len(rankings)} rankings to {args.output}")
    return 0


def _cmd_evaluate(args) -> int:
    raw_rankings = records.read_ranking_file(args.rankings)
    gold = records.read_highlight_file(args.highlights)
    grouped = evalkit.group_records(gold)

    if args.word_limit is not None:
        kept = evalkit.filter_test_set(grouped, args.word_limit)
    else:
        kept = set(grouped)
    rankings = [
        evalkit.RankedSentences(r["opinion_id"], r["order"], r["scores"])
        for r in raw_rankings
        if r["opinion_id"] in kept
    ]
    if not rankings:
        raise NoOverlapError(
            "no opinion ids overlap between rankings and (filtered) highlights"
        )
    report = evalkit.evaluate(
        rankings,
        [rec for oid in kept for rec in grouped[oid]],
        top_k=args.top_k,
        word_limit=args.word_limit,
    )
    payload = report.as_dict()
    payload["seed"] = args.seed
    Path(args.output).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    macro = {k: v for k, v in report.macro.items() if k in ("p_at_1", "average_precision")}
    print(f"evaluated {report.opinion_count} opinions: {macro}")
    return 0


def _cmd_audit_sample(args) -> int:
    corpus = load_corpus(args.input)
    edges = records.read_graph_file(args.graph)
    rejects = records.read_graph_file(args.rejects)
    pool = [(i, e) for i, e in enumerate(edges + rejects)]
    if args.k > len(pool):
        raise UsageError(
            f"requested {args.k} samples but only {len(pool)} records exist"
        )
    rng = random.Random(args.seed)
    sample = sorted(rng.sample(pool, args.k), key=lambda t: t[0])

    rows = []
    for audit_id, edge in sample:
        cited = corpus.get(edge.cited_opinion_id)
        if cited is None:
            context = ""
        elif edge.sentence_id >= 0:
            lo = max(0, edge.sentence_id - 1)
            hi = min(cited.n_sentences, edge.sentence_id + 2)
            context = " ".join(cited.sentence_text(s) for s in range(lo, hi))
        else:
            context = " ".join(
                cited.word_text(i) for i in range(min(120, len(cited.words)))
            )
        rows.append(
            {
                "audit_id": audit_id,
                "citing_opinion_id": edge.citing_opinion_id,
                "cited_opinion_id": edge.cited_opinion_id,
                "verbatim": edge.verbatim,
                "snippet": edge.snippet,
                "cited_context": context,
                "predicted": edge.score >= 0,
                "gold": None,
            }
        )
    records.write_jsonl(args.output, rows)
    print(f"wrote {len(rows)} audit records to {args.output}")
    return 0


def _cmd_audit_score(args) -> int:
    preds = []
    gold = []
    missing = []
    with open(args.audit, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise records.SchemaError(args.audit, line_no, str(exc)) from exc
            if not isinstance(obj.get("gold"), bool):
                missing.append(obj.get("audit_id", line_no))
                continue
            preds.append(bool(obj["predicted"]))
            gold.append(obj["gold"])
    if missing:
        raise records.SchemaError(
            args.audit, 0, f"records missing gold labels: {missing}"
        )
    report = confusion_report(preds, gold).as_dict()
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    print(text)
    return 0


_COMMANDS = {
    "pipeline": _cmd_pipeline,
    "highlights": _cmd_highlights,
    "graph-stats": _cmd_graph_stats,
    "rank": _cmd_rank,
    "evaluate": _cmd_evaluate,
    "audit-sample": _cmd_audit_sample,
    "audit-score": _cmd_audit_score,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except records.SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 3
    except NoOverlapError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
