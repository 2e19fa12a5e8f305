"""Snippet windows around in-text citations and quote-delimited candidates.

A snippet holds up to N words before and N words after the citation marker
(fewer at document edges), with the marker text itself excluded.  Candidates
are the maximal spans enclosed by matching quote delimiters inside a snippet.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import CitationMention, DropReport, Opinion


@dataclass
class Snippet:
    citing_opinion_id: int
    cited_opinion_id: int
    mention_index: int
    text: str
    window_words: int


@dataclass
class VerbatimCandidate:
    snippet: Snippet
    quoted_text: str
    word_count: int


@dataclass(frozen=True)
class CandidateConfig:
    min_quote_words: int = 5
    max_quote_words: int = 100


def extract_snippet(
    opinion: Opinion,
    mention: CitationMention,
    n: int,
    mention_index: int | None = None,
) -> Snippet:
    """Window of up to ``n`` words on each side of the citation marker.

    The marker's own words are excluded; the window text is reassembled with
    single spaces.
    """
    if n < 1:
        raise ValueError("window size must be >= 1")
    if mention_index is None:
        mention_index = opinion.mentions.index(mention)

    w = mention.word_index
    before = [opinion.word_text(i) for i in range(max(0, w - n + 1), w + 1)]

    marker_end = mention.char_span[1]
    first_after = len(opinion.words)
    for i in range(w + 1, len(opinion.words)):
        if opinion.words[i][0] >= marker_end:
            first_after = i
            break
    after = [
        opinion.word_text(i)
        for i in range(first_after, min(len(opinion.words), first_after + n))
    ]

    return Snippet(
        citing_opinion_id=opinion.opinion_id,
        cited_opinion_id=mention.cited_opinion_id,
        mention_index=mention_index,
        text=" ".join(before + after),
        window_words=n,
    )


# Directional pairs nest and the outermost closer wins.  Straight quotes are
# undirected: an opener must sit after whitespace (or an opening bracket) and
# directly before non-whitespace, a closer directly after non-whitespace, so a
# quote truncated at the window edge cannot steal the opener of the next one.
# Straight and curly singles are additionally flank-checked against letters so
# apostrophes inside or at the edge of words are not treated as quotes.
_DIRECTIONAL = {"“": "”", "«": "»", "‘": "’"}
_FLANKED = {"'", "‘", "’"}
_OPENERS = {'"', "'", "“", "«", "‘"}
_OPENING_BRACKETS = "([{"


def _valid_opener(text: str, i: int) -> bool:
    ch = text[i]
    if i + 1 >= len(text) or text[i + 1].isspace():
        return False
    if ch in _FLANKED and text[i + 1] == ch:
        return False
    if ch in _DIRECTIONAL:
        return True
    return i == 0 or text[i - 1].isspace() or text[i - 1] in _OPENING_BRACKETS


def _valid_closer(text: str, i: int, opener: str) -> bool:
    if i == 0 or text[i - 1].isspace():
        return False
    if opener in _FLANKED and i + 1 < len(text) and text[i + 1].isalnum():
        return False  # likely an apostrophe, not a closing quote
    return True


def _find_closer(text: str, opener: str, start: int) -> int:
    """Index of the closer matching the opener at ``start``, or -1."""
    close = _DIRECTIONAL.get(opener, opener)
    depth = 1
    j = start + 1
    while j < len(text):
        ch = text[j]
        if close != opener and ch == opener:
            depth += 1
        elif ch == close and _valid_closer(text, j, opener):
            depth -= 1
            if depth == 0:
                return j
        j += 1
    return -1


def extract_candidates(
    snippet: Snippet,
    cfg: CandidateConfig = CandidateConfig(),
    report: DropReport | None = None,
) -> list[VerbatimCandidate]:
    """Maximal quote-delimited spans of the snippet, length-filtered.

    Spans do not nest: while a quote of one delimiter type is open, all other
    delimiters are treated as content.  A trailing unpaired opener is ignored
    and counted as ``unbalanced_quotes``; candidates outside the word-count
    bounds are counted as ``candidate_length_filtered``.
    """
    report = report if report is not None else DropReport()
    text = snippet.text
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in _OPENERS:
            if not _valid_opener(text, i):
                i += 1
                continue
            j = _find_closer(text, ch, i)
            if j < 0:
                report.bump("unbalanced_quotes")
                i += 1
                continue
            quoted = text[i + 1 : j]
            word_count = len(quoted.split())
            if cfg.min_quote_words <= word_count <= cfg.max_quote_words:
                out.append(VerbatimCandidate(snippet, quoted, word_count))
            else:
                report.bump("candidate_length_filtered")
            i = j + 1
        else:
            i += 1
    return out
