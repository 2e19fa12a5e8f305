"""Newline-delimited record files with schema validation.

One schema per file, UTF-8, deterministic serialization.  Field names and
order follow the published dataset layout: graph records carry the six edge
fields, highlight records the five sentence fields.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from .highlight import SentenceRecord, VerbatimEdge

GRAPH_FIELDS = (
    "citing_opinion_id",
    "cited_opinion_id",
    "sentence_id",
    "verbatim",
    "snippet",
    "score",
)
HIGHLIGHT_FIELDS = (
    "opinion_id",
    "sentence_id",
    "raw_text",
    "highlight",
    "count_citations",
)
RANKING_FIELDS = ("opinion_id", "order", "scores")


class SchemaError(ValueError):
    def __init__(self, path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


def _dump(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def write_jsonl(path: str | Path, rows: Iterable[dict]) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(_dump(row))
            fh.write("\n")
            n += 1
    return n


def _iter_jsonl(path: str | Path):
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(path, line_no, f"invalid JSON: {exc}") from exc
            if not isinstance(obj, dict):
                raise SchemaError(path, line_no, "record is not an object")
            yield line_no, obj


def _require(path, line_no, obj, field, types):
    if field not in obj:
        raise SchemaError(path, line_no, f"missing field {field!r}")
    value = obj[field]
    if types is bool:
        ok = isinstance(value, bool)
    else:
        # bool is an int subclass; reject it for numeric fields.
        ok = isinstance(value, types) and not isinstance(value, bool)
    if not ok:
        raise SchemaError(path, line_no, f"field {field!r} has wrong type")
    return value


def edge_to_dict(edge: VerbatimEdge) -> dict:
    return {
        "citing_opinion_id": edge.citing_opinion_id,
        "cited_opinion_id": edge.cited_opinion_id,
        "sentence_id": edge.sentence_id,
        "verbatim": edge.verbatim,
        "snippet": edge.snippet,
        "score": edge.score,
    }


def write_graph_file(path: str | Path, edges: Iterable[VerbatimEdge]) -> int:
    return write_jsonl(path, (edge_to_dict(e) for e in edges))


def read_graph_file(path: str | Path) -> list[VerbatimEdge]:
    edges = []
    for line_no, obj in _iter_jsonl(path):
        edges.append(
            VerbatimEdge(
                citing_opinion_id=_require(path, line_no, obj, "citing_opinion_id", int),
                cited_opinion_id=_require(path, line_no, obj, "cited_opinion_id", int),
                sentence_id=_require(path, line_no, obj, "sentence_id", int),
                verbatim=_require(path, line_no, obj, "verbatim", str),
                snippet=_require(path, line_no, obj, "snippet", str),
                score=float(_require(path, line_no, obj, "score", (int, float))),
            )
        )
    return edges


def record_to_dict(rec: SentenceRecord) -> dict:
    return {
        "opinion_id": rec.opinion_id,
        "sentence_id": rec.sentence_id,
        "raw_text": rec.raw_text,
        "highlight": rec.highlight,
        "count_citations": rec.count_citations,
    }


def write_highlight_file(path: str | Path, records: Iterable[SentenceRecord]) -> int:
    return write_jsonl(path, (record_to_dict(r) for r in records))


def read_highlight_file(path: str | Path) -> list[SentenceRecord]:
    records = []
    for line_no, obj in _iter_jsonl(path):
        records.append(
            SentenceRecord(
                opinion_id=_require(path, line_no, obj, "opinion_id", int),
                sentence_id=_require(path, line_no, obj, "sentence_id", int),
                raw_text=_require(path, line_no, obj, "raw_text", str),
                highlight=_require(path, line_no, obj, "highlight", bool),
                count_citations=_require(path, line_no, obj, "count_citations", int),
            )
        )
    return records


def write_ranking_file(path: str | Path, rankings: Iterable) -> int:
    return write_jsonl(
        path,
        (
            {"opinion_id": r.opinion_id, "order": list(r.order), "scores": list(r.scores)}
            for r in rankings
        ),
    )


def read_ranking_file(path: str | Path) -> list[dict]:
    rankings = []
    for line_no, obj in _iter_jsonl(path):
        opinion_id = _require(path, line_no, obj, "opinion_id", int)
        order = _require(path, line_no, obj, "order", list)
        scores = _require(path, line_no, obj, "scores", list)
        if len(order) != len(scores):
            raise SchemaError(path, line_no, "order and scores differ in length")
        if sorted(order) != list(range(len(order))):
            raise SchemaError(path, line_no, "order is not a permutation of 0..n-1")
        rankings.append(
            {"opinion_id": opinion_id, "order": [int(x) for x in order],
             "scores": [float(x) for x in scores]}
        )
    return rankings
