import pytest

from quotegraph.corpus import DropReport
from quotegraph.pipeline import PipelineConfig, PipelineResult, run_pipeline
from quotegraph.verbatim import MatchParams

from conftest import make_opinion


class TestPipelineConfig:
    def test_defaults(self):
        config = PipelineConfig()
        assert config.window_n == 100
        assert config.min_quote_words == 5
        assert config.match_params == MatchParams()

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"window_n": 0},
            {"min_quote_words": 0},
            {"min_quote_words": 10, "max_quote_words": 5},
            {"word_limit": 0},
            {"workers": 0},
        ],
    )
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            PipelineConfig(**kwargs)


class TestRunPipeline:
    def test_recovers_planted_edges(self, mini_corpus):
        corpus = mini_corpus.parsed()
        result = run_pipeline(corpus, PipelineConfig())
        found = {
            (e.citing_opinion_id, e.cited_opinion_id, e.sentence_id)
            for e in result.edges
        }
        true = mini_corpus.true_edges()
        precision = len(found & true) / len(found)
        recall = len(found & true) / len(true)
        assert precision >= 0.95
        assert recall >= 0.95

    def test_decoys_rejected(self, mini_corpus):
        corpus = mini_corpus.parsed()
        result = run_pipeline(corpus, PipelineConfig())
        assert result.report.get("rejected_candidates") > 0
        assert all(e.sentence_id == -1 and e.score == -1.0 for e in result.rejects)

    def test_highlights_consistent_with_edges(self, mini_corpus):
        corpus = mini_corpus.parsed()
        result = run_pipeline(corpus, PipelineConfig())
        edge_count: dict[tuple[int, int], int] = {}
        for e in result.edges:
            key = (e.cited_opinion_id, e.sentence_id)
            edge_count[key] = edge_count.get(key, 0) + 1
        for rec in result.highlights:
            key = (rec.opinion_id, rec.sentence_id)
            assert rec.count_citations == edge_count.get(key, 0)
            assert rec.highlight == (rec.count_citations >= 1)

    def test_parallel_equals_serial(self, mini_corpus):
        corpus = mini_corpus.parsed()
        serial = run_pipeline(corpus, PipelineConfig(workers=1))
        parallel = run_pipeline(corpus, PipelineConfig(workers=4))
        assert serial.edges == parallel.edges
        assert serial.rejects == parallel.rejects
        assert serial.highlights == parallel.highlights
        assert serial.report.as_dict() == parallel.report.as_dict()

    def test_empty_corpus(self):
        result = run_pipeline({}, PipelineConfig())
        assert result == PipelineResult([], [], [], result.report)

    def test_missing_cited_opinion_counted(self):
        op = make_opinion(
            'Quoting "five words of cited text" from '
            '<span class="citation" data-id="404">Gone v. Away</span> here.',
            opinion_id=1,
        )
        report = DropReport()
        result = run_pipeline({1: op}, PipelineConfig(), report)
        assert result.edges == []
        assert report.get("missing_cited_opinion") == 1

    def test_emit_all_covers_corpus(self, mini_corpus):
        corpus = mini_corpus.parsed()
        result = run_pipeline(corpus, PipelineConfig(emit_all=True))
        covered = {r.opinion_id for r in result.highlights}
        assert covered == set(corpus)

    def test_edges_sorted_by_citing_id(self, mini_corpus):
        corpus = mini_corpus.parsed()
        result = run_pipeline(corpus, PipelineConfig())
        citing = [e.citing_opinion_id for e in result.edges]
        assert citing == sorted(citing)
