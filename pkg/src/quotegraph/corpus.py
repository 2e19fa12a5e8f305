"""Corpus ingestion: citation-tagged HTML documents to segmented opinions.

Input corpora are newline-delimited JSON records with fields ``opinion_id``
(positive int) and ``html`` (string).  Citations are marked in the HTML as
``<span class="citation" data-id="N">...</span>`` where ``N`` is the id of the
cited opinion.  Other tag conventions can be supported by swapping out
:func:`parse_document` at the ingestion boundary.

Parsing is tolerant: malformed lines, empty documents, bad citation ids and
self-citations are counted in a :class:`DropReport` instead of aborting.
"""

from __future__ import annotations

import json
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from html.parser import HTMLParser
from pathlib import Path


class EmptyDocumentError(ValueError):
    """Raised when a document has no text once markup is stripped."""


class DropReport:
    """Counters for records skipped or altered during processing."""

    def __init__(self) -> None:
        self.counts: Counter[str] = Counter()

    def bump(self, key: str, n: int = 1) -> None:
        self.counts[key] += n

    def get(self, key: str) -> int:
        return self.counts.get(key, 0)

    def merge(self, other: "DropReport") -> None:
        self.counts.update(other.counts)

    def as_dict(self) -> dict[str, int]:
        return {k: self.counts[k] for k in sorted(self.counts)}


@dataclass
class RawDocument:
    opinion_id: int
    markup: str


@dataclass
class CitationMention:
    cited_opinion_id: int
    char_span: tuple[int, int]  # half-open interval in plain text
    word_index: int  # index of the word immediately preceding the marker


@dataclass
class Opinion:
    opinion_id: int
    plain_text: str
    words: list[tuple[int, int]]
    sentences: list[tuple[int, int]]
    mentions: list[CitationMention]
    _match_tokens: list[tuple[str, int]] | None = field(
        default=None, repr=False, compare=False
    )
    _word_sentence: list[int] | None = field(default=None, repr=False, compare=False)

    @property
    def n_sentences(self) -> int:
        return len(self.sentences)

    def word_text(self, i: int) -> str:
        s, e = self.words[i]
        return self.plain_text[s:e]

    def sentence_text(self, i: int) -> str:
        s, e = self.sentences[i]
        return self.plain_text[s:e]

    def match_tokens(self) -> list[tuple[str, int]]:
        """Normalized non-empty tokens as (norm, word_index) pairs.

        Pure-punctuation words normalize to the empty string and are excluded
        from matching while their word offsets stay available for alignment.
        """
        if self._match_tokens is None:
            toks = []
            for i in range(len(self.words)):
                norm = normalize_token(self.word_text(i))
                if norm:
                    toks.append((norm, i))
            self._match_tokens = toks
        return self._match_tokens

    def sentence_of_word(self, word_index: int) -> int:
        if self._word_sentence is None:
            mapping = [0] * len(self.words)
            si = 0
            for wi, (ws, we) in enumerate(self.words):
                while si < len(self.sentences) - 1 and ws >= self.sentences[si][1]:
                    si += 1
                mapping[wi] = si
            self._word_sentence = mapping
        return self._word_sentence[word_index]


_WORD_RE = re.compile(r"\S+")


def tokenize_words(text: str) -> list[tuple[int, int]]:
    """Char-offset spans of maximal non-whitespace runs."""
    return [(m.start(), m.end()) for m in _WORD_RE.finditer(text)]


_EDGE_PUNCT_RE = re.compile(r"^[\W_]+|[\W_]+$", re.UNICODE)


def normalize_token(surface: str) -> str:
    """NFC-normalize, lowercase, strip leading/trailing non-alphanumerics.

    Internal hyphens survive; a pure-punctuation word normalizes to "".
    """
    return _EDGE_PUNCT_RE.sub("", unicodedata.normalize("NFC", surface).lower())


# Legal abbreviations after which a period does not end a sentence.  Compared
# against the lowercased word with leading punctuation stripped.
ABBREVIATIONS = frozenset(
    {
        "v.",
        "vs.",
        "no.",
        "nos.",
        "inc.",
        "co.",
        "corp.",
        "ltd.",
        "va.",
        "s.e.",
        "s.e.2d",
        "u.s.",
        "stat.",
        "sec.",
        "secs.",
        "ch.",
        "art.",
        "app.",
        "ct.",
        "supp.",
        "rev.",
        "ann.",
        "cir.",
        "dist.",
        "mr.",
        "mrs.",
        "ms.",
        "dr.",
        "jr.",
        "sr.",
        "e.g.",
        "i.e.",
        "cf.",
        "id.",
        "et.",
        "al.",
        "etc.",
    }
)

_SINGLE_INITIAL_RE = re.compile(r"^[A-Z]\.$")
_TRAILING_CLOSERS = ")]}'\"”’»"
_LEADING_OPENERS = "([{'\"“‘«"
_QUOTE_CHARS = "'\"“”‘’«»"


def _is_terminal_word(word: str) -> bool:
    core = word.rstrip(_TRAILING_CLOSERS)
    return core.endswith((".", "!", "?"))


def _is_abbreviation(word: str) -> bool:
    core = word.lstrip(_LEADING_OPENERS)
    if _SINGLE_INITIAL_RE.match(core):
        return True
    return core.lower() in ABBREVIATIONS


def _starts_sentence(word: str) -> bool:
    first = word[0]
    return first.isupper() or first.isdigit() or first in _QUOTE_CHARS


def split_sentences(text: str) -> list[tuple[int, int]]:
    """Rule-based sentence spans covering every word in order.

    A boundary is placed after a word that ends in ``.``, ``!`` or ``?``
    (ignoring trailing closing punctuation) when the next word starts with an
    uppercase letter, a digit or a quote character, unless the word is a known
    legal abbreviation or a single-initial form.
    """
    words = tokenize_words(text)
    if not words:
        return []
    spans = []
    start = words[0][0]
    for i, (ws, we) in enumerate(words):
        if i == len(words) - 1:
            spans.append((start, we))
            break
        word = text[ws:we]
        nxt = text[words[i + 1][0] : words[i + 1][1]]
        if _is_terminal_word(word) and _starts_sentence(nxt):
            core = word.rstrip(_TRAILING_CLOSERS)
            if not (core.endswith(".") and _is_abbreviation(word)):
                spans.append((start, we))
                start = words[i + 1][0]
    return spans


class _CitationHTMLParser(HTMLParser):
    """Strips tags, decodes entities and records citation-span offsets."""

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.chunks: list[str] = []
        self.length = 0
        self.citations: list[tuple[int, int, str]] = []  # (start, end, raw id)
        self._span_stack: list[tuple[bool, int, str]] = []

    def handle_starttag(self, tag, attrs):
        if tag == "span":
            attrd = dict(attrs)
            classes = (attrd.get("class") or "").split()
            data_id = attrd.get("data-id")
            if "citation" in classes and data_id is not None:
                self._span_stack.append((True, self.length, data_id))
            else:
                self._span_stack.append((False, self.length, ""))

    def handle_endtag(self, tag):
        if tag == "span" and self._span_stack:
            is_cite, start, data_id = self._span_stack.pop()
            if is_cite:
                self.citations.append((start, self.length, data_id))

    def handle_data(self, data):
        self.chunks.append(data)
        self.length += len(data)

    def close(self):
        super().close()
        # Tolerate unclosed citation spans: end them at document end.
        while self._span_stack:
            is_cite, start, data_id = self._span_stack.pop()
            if is_cite:
                self.citations.append((start, self.length, data_id))


def parse_document(raw: RawDocument, report: DropReport | None = None) -> Opinion:
    """Parse one citation-tagged document into a segmented :class:`Opinion`.

    Citation tags with a non-positive-integer id are skipped and counted as
    ``malformed_citation_id``; self-citations are dropped and counted.  Raises
    :class:`EmptyDocumentError` when no text remains after stripping markup.
    """
    report = report if report is not None else DropReport()
    parser = _CitationHTMLParser()
    parser.feed(raw.markup)
    parser.close()
    plain_text = "".join(parser.chunks)
    if not plain_text.strip():
        raise EmptyDocumentError(f"opinion {raw.opinion_id} empty after stripping")

    words = tokenize_words(plain_text)
    sentences = split_sentences(plain_text)

    mentions = []
    for start, end, data_id in sorted(parser.citations):
        try:
            cited_id = int(data_id)
        except ValueError:
            cited_id = -1
        if cited_id <= 0:
            report.bump("malformed_citation_id")
            continue
        if cited_id == raw.opinion_id:
            report.bump("self_citation")
            continue
        # Last word ending at or before the marker start.
        word_index = -1
        for wi, (ws, we) in enumerate(words):
            if we <= start:
                word_index = wi
            else:
                break
        mentions.append(CitationMention(cited_id, (start, end), word_index))

    return Opinion(raw.opinion_id, plain_text, words, sentences, mentions)


def load_corpus(path: str | Path, report: DropReport | None = None) -> dict[int, Opinion]:
    """Stream a JSONL corpus file into opinions keyed by id.

    Unparseable lines, duplicate ids and empty documents are counted in the
    report and skipped.
    """
    report = report if report is not None else DropReport()
    corpus: dict[int, Opinion] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                opinion_id = int(rec["opinion_id"])
                markup = rec["html"]
                if opinion_id <= 0 or not isinstance(markup, str):
                    raise ValueError("bad record")
            except (ValueError, KeyError, TypeError):
                report.bump("unparseable_line")
                continue
            if opinion_id in corpus:
                report.bump("duplicate_opinion_id")
                continue
            try:
                corpus[opinion_id] = parse_document(
                    RawDocument(opinion_id, markup), report
                )
            except EmptyDocumentError:
                report.bump("empty_document")
    return corpus
