"""Verbatim-quote citation graphs and sentence-highlight extraction.

Pipeline: ingest citation-tagged documents, window the text around each
in-text citation, pull out quote-delimited candidates, qualify them against
the known cited opinion, and aggregate the qualified quotes into a citation
graph plus sentence-level highlight annotations.  Companion tooling computes
network statistics over the graph and evaluates sentence rankers on the
highlight-extraction task.
"""

from .anchor import CandidateConfig, Snippet, VerbatimCandidate, extract_candidates, extract_snippet
from .corpus import (
    CitationMention,
    DropReport,
    Opinion,
    RawDocument,
    load_corpus,
    normalize_token,
    parse_document,
    split_sentences,
    tokenize_words,
)
from .highlight import SentenceRecord, VerbatimEdge, align_sentences, build_highlights
from .pipeline import PipelineConfig, PipelineResult, run_pipeline
from .verbatim import MatchParams, MatchResult, audit_classifier, qualify

__version__ = "0.1.0"

__all__ = [
    "CandidateConfig",
    "CitationMention",
    "DropReport",
    "MatchParams",
    "MatchResult",
    "Opinion",
    "PipelineConfig",
    "PipelineResult",
    "RawDocument",
    "SentenceRecord",
    "Snippet",
    "VerbatimCandidate",
    "VerbatimEdge",
    "align_sentences",
    "audit_classifier",
    "build_highlights",
    "extract_candidates",
    "extract_snippet",
    "load_corpus",
    "normalize_token",
    "parse_document",
    "qualify",
    "run_pipeline",
    "split_sentences",
    "tokenize_words",
]
