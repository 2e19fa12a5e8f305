import pytest

from quotegraph.corpus import DropReport
from quotegraph.highlight import (
    SentenceRecord,
    VerbatimEdge,
    align_sentences,
    build_highlights,
)
from quotegraph.verbatim import MatchResult, qualify

from conftest import make_candidate, make_opinion

THREE_SENTENCES = (
    "The first sentence sets the scene today. "
    "The second sentence holds the operative rule of decision. "
    "The third sentence wraps everything up neatly."
)


def _edge(citing: int, cited: int, sid: int, score: float = 1.0) -> VerbatimEdge:
    return VerbatimEdge(citing, cited, sid, "q", "s", score)


class TestAlignSentences:
    def test_single_sentence(self):
        cited = make_opinion(THREE_SENTENCES, opinion_id=2)
        result = qualify(
            make_candidate("holds the operative rule of decision"), cited
        )
        assert align_sentences(result, cited) == [1]

    def test_straddling_quote(self):
        cited = make_opinion(THREE_SENTENCES, opinion_id=2)
        result = qualify(
            make_candidate("rule of decision. The third sentence"), cited
        )
        assert align_sentences(result, cited) == [1, 2]

    def test_requires_match(self):
        cited = make_opinion(THREE_SENTENCES, opinion_id=2)
        with pytest.raises(ValueError):
            align_sentences(MatchResult(False, -1.0, None, []), cited)


class TestBuildHighlights:
    def test_counts_aggregate(self):
        corpus = {2: make_opinion(THREE_SENTENCES, opinion_id=2)}
        edges = [_edge(10, 2, 1), _edge(11, 2, 1), _edge(12, 2, 0)]
        records = build_highlights(edges, corpus)
        by_sid = {r.sentence_id: r for r in records}
        assert len(records) == 3
        assert by_sid[0].count_citations == 1 and by_sid[0].highlight
        assert by_sid[1].count_citations == 2 and by_sid[1].highlight
        assert by_sid[2].count_citations == 0 and not by_sid[2].highlight
        assert by_sid[1].raw_text == "The second sentence holds the operative rule of decision."

    def test_order_independent(self):
        corpus = {2: make_opinion(THREE_SENTENCES, opinion_id=2)}
        edges = [_edge(10, 2, 1), _edge(11, 2, 0), _edge(12, 2, 2)]
        assert build_highlights(edges, corpus) == build_highlights(edges[::-1], corpus)

    def test_uncited_opinion_omitted_by_default(self):
        corpus = {
            2: make_opinion(THREE_SENTENCES, opinion_id=2),
            3: make_opinion("Never cited text here.", opinion_id=3),
        }
        records = build_highlights([_edge(10, 2, 0)], corpus)
        assert {r.opinion_id for r in records} == {2}

    def test_emit_all(self):
        corpus = {
            2: make_opinion(THREE_SENTENCES, opinion_id=2),
            3: make_opinion("Never cited text here.", opinion_id=3),
        }
        records = build_highlights([_edge(10, 2, 0)], corpus, emit_all=True)
        assert {r.opinion_id for r in records} == {2, 3}
        assert all(
            not r.highlight for r in records if r.opinion_id == 3
        )

    def test_missing_cited_opinion_counted(self):
        report = DropReport()
        corpus = {2: make_opinion(THREE_SENTENCES, opinion_id=2)}
        records = build_highlights([_edge(10, 99, 0)], corpus, report=report)
        assert records == []
        assert report.get("missing_cited_opinion") == 1

    def test_records_sorted(self):
        corpus = {
            2: make_opinion(THREE_SENTENCES, opinion_id=2),
            5: make_opinion("One. Two.", opinion_id=5),
        }
        records = build_highlights([_edge(1, 5, 0), _edge(1, 2, 2)], corpus)
        keys = [(r.opinion_id, r.sentence_id) for r in records]
        assert keys == sorted(keys)

    def test_record_shape(self):
        corpus = {2: make_opinion("Only one sentence here.", opinion_id=2)}
        [record] = build_highlights([_edge(1, 2, 0)], corpus)
        assert record == SentenceRecord(2, 0, "Only one sentence here.", True, 1)
