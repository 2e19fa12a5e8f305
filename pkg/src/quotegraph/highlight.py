"""Sentence-level highlight records derived from qualified quote matches."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .corpus import DropReport, Opinion
from .verbatim import MatchResult


@dataclass
class VerbatimEdge:
    citing_opinion_id: int
    cited_opinion_id: int
    sentence_id: int  # -1 for rejected candidates (score -1)
    verbatim: str
    snippet: str
    score: float


@dataclass
class SentenceRecord:
    opinion_id: int
    sentence_id: int
    raw_text: str
    highlight: bool
    count_citations: int


def align_sentences(match: MatchResult, cited: Opinion) -> list[int]:
    """Sentence indices of the cited opinion covered by a match.

    Returns the contiguous run of sentences whose spans intersect the aligned
    token range, in increasing order; a quote straddling a boundary reports
    every sentence it touches.
    """
    if not match.matched or match.cited_token_range is None:
        raise ValueError("align_sentences requires a matched result")
    tokens = cited.match_tokens()
    first_word = tokens[match.cited_token_range[0]][1]
    last_word = tokens[match.cited_token_range[1]][1]
    s_first = cited.sentence_of_word(first_word)
    s_last = cited.sentence_of_word(last_word)
    return list(range(s_first, s_last + 1))


def build_highlights(
    edges: list[VerbatimEdge],
    corpus: dict[int, Opinion],
    emit_all: bool = False,
    report: DropReport | None = None,
) -> list[SentenceRecord]:
    """Aggregate edges into one record per sentence of every cited opinion.

    Counting is order-independent; an edge whose cited opinion is missing from
    the corpus is dropped and counted as ``missing_cited_opinion``.  With
    ``emit_all`` every corpus opinion gets records, cited or not.
    """
    report = report if report is not None else DropReport()
    counts: Counter[tuple[int, int]] = Counter()
    cited_ids = set()
    for edge in edges:
        if edge.cited_opinion_id not in corpus:
            report.bump("missing_cited_opinion")
            continue
        counts[(edge.cited_opinion_id, edge.sentence_id)] += 1
        cited_ids.add(edge.cited_opinion_id)

    target_ids = sorted(corpus) if emit_all else sorted(cited_ids)
    records = []
    for opinion_id in target_ids:
        opinion = corpus[opinion_id]
        for sid in range(opinion.n_sentences):
            n = counts.get((opinion_id, sid), 0)
            records.append(
                SentenceRecord(
                    opinion_id=opinion_id,
                    sentence_id=sid,
                    raw_text=opinion.sentence_text(sid),
                    highlight=n >= 1,
                    count_citations=n,
                )
            )
    return records
