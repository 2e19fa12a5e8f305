"""End-to-end pipeline: snippets -> candidates -> qualification -> highlights.

The per-opinion map phase is pure, so opinions can be processed in parallel;
results are merged in citing-opinion-id order, which keeps output files
byte-identical across runs with the same configuration.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .anchor import CandidateConfig, extract_candidates, extract_snippet
from .corpus import DropReport, Opinion
from .highlight import SentenceRecord, VerbatimEdge, align_sentences, build_highlights
from .verbatim import CandidateTooShortError, MatchParams, qualify


@dataclass
class PipelineConfig:
    window_n: int = 100
    min_quote_words: int = 5
    max_quote_words: int = 100
    match_params: MatchParams = field(default_factory=MatchParams)
    word_limit: int = 512
    top_k: int = 5
    workers: int = 1
    seed: int = 0
    emit_all: bool = False

    def __post_init__(self):
        if self.window_n < 1:
            raise ValueError("window_n must be >= 1")
        if not 1 <= self.min_quote_words <= self.max_quote_words:
            raise ValueError("quote word bounds out of range")
        if self.word_limit < 1:
            raise ValueError("word_limit must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @property
    def candidate_config(self) -> CandidateConfig:
        return CandidateConfig(self.min_quote_words, self.max_quote_words)


@dataclass
class PipelineResult:
    edges: list[VerbatimEdge]
    rejects: list[VerbatimEdge]
    highlights: list[SentenceRecord]
    report: DropReport


def process_opinion(
    opinion: Opinion,
    corpus: dict[int, Opinion],
    config: PipelineConfig,
) -> tuple[list[VerbatimEdge], list[VerbatimEdge], DropReport]:
    """Run the citation loop for one citing opinion."""
    report = DropReport()
    edges: list[VerbatimEdge] = []
    rejects: list[VerbatimEdge] = []
    for mention_index, mention in enumerate(opinion.mentions):
        cited = corpus.get(mention.cited_opinion_id)
        if cited is None:
            report.bump("missing_cited_opinion")
            continue
        snippet = extract_snippet(opinion, mention, config.window_n, mention_index)
        candidates = extract_candidates(snippet, config.candidate_config, report)
        for candidate in candidates:
            try:
                result = qualify(
                    candidate, cited, config.match_params, config.min_quote_words
                )
            except CandidateTooShortError:
                report.bump("candidate_too_short")
                continue
            common = {
                "citing_opinion_id": opinion.opinion_id,
                "cited_opinion_id": cited.opinion_id,
                "verbatim": candidate.quoted_text,
                "snippet": snippet.text,
            }
            if result.matched:
                for sid in align_sentences(result, cited):
                    edges.append(
                        VerbatimEdge(sentence_id=sid, score=result.score, **common)
                    )
            else:
                report.bump("rejected_candidates")
                rejects.append(VerbatimEdge(sentence_id=-1, score=-1.0, **common))
    return edges, rejects, report


_WORKER_CORPUS: dict[int, Opinion] = {}
_WORKER_CONFIG: PipelineConfig | None = None


def _worker_init(corpus: dict[int, Opinion], config: PipelineConfig) -> None:
    global _WORKER_CORPUS, _WORKER_CONFIG
    _WORKER_CORPUS = corpus
    _WORKER_CONFIG = config


def _worker_run(opinion_id: int):
    return process_opinion(_WORKER_CORPUS[opinion_id], _WORKER_CORPUS, _WORKER_CONFIG)


def run_pipeline(
    corpus: dict[int, Opinion],
    config: PipelineConfig,
    report: DropReport | None = None,
) -> PipelineResult:
    """Process every opinion and aggregate edges, rejects and highlights."""
    report = report if report is not None else DropReport()
    citing_ids = sorted(corpus)

    results = []
    if config.workers > 1 and len(citing_ids) > 1 and os.name == "posix":
        with ProcessPoolExecutor(
            max_workers=config.workers,
            initializer=_worker_init,
            initargs=(corpus, config),
        ) as pool:
            results = list(pool.map(_worker_run, citing_ids, chunksize=8))
    else:
        results = [
            process_opinion(corpus[i], corpus, config) for i in citing_ids
        ]

    edges: list[VerbatimEdge] = []
    rejects: list[VerbatimEdge] = []
    for partial_edges, partial_rejects, partial_report in results:
        edges.extend(partial_edges)
        rejects.extend(partial_rejects)
        report.merge(partial_report)

    highlights = build_highlights(edges, corpus, emit_all=config.emit_all, report=report)
    highlights.sort(key=lambda r: (r.opinion_id, r.sentence_id))
    return PipelineResult(edges, rejects, highlights, report)
