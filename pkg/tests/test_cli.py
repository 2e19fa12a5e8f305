import hashlib
import json

import pytest

from quotegraph.cli import main
from quotegraph.minicorpus import generate_mini_corpus
from quotegraph.records import read_graph_file, read_highlight_file, read_ranking_file


@pytest.fixture(scope="module")
def corpus_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus") / "corpus.jsonl"
    generate_mini_corpus().write(path)
    return path


@pytest.fixture(scope="module")
def pipeline_dir(tmp_path_factory, corpus_file):
    out = tmp_path_factory.mktemp("out")
    code = main(["pipeline", "--input", str(corpus_file), "--output-dir", str(out)])
    assert code == 0
    return out


def _digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


class TestPipelineCommand:
    def test_outputs_exist(self, pipeline_dir):
        for name in ("verbcl_graph.jsonl", "verbcl_highlights.jsonl", "rejects.jsonl", "summary.json"):
            assert (pipeline_dir / name).exists()

    def test_outputs_validate(self, pipeline_dir):
        edges = read_graph_file(pipeline_dir / "verbcl_graph.jsonl")
        highlights = read_highlight_file(pipeline_dir / "verbcl_highlights.jsonl")
        rejects = read_graph_file(pipeline_dir / "rejects.jsonl")
        assert edges and highlights and rejects
        summary = json.loads((pipeline_dir / "summary.json").read_text())
        assert summary["edges"] == len(edges)
        assert summary["rejects"] == len(rejects)
        assert summary["highlight_records"] == len(highlights)

    def test_double_run_byte_identical(self, corpus_file, pipeline_dir, tmp_path):
        second = tmp_path / "again"
        assert main(["pipeline", "--input", str(corpus_file), "--output-dir", str(second)]) == 0
        for name in ("verbcl_graph.jsonl", "verbcl_highlights.jsonl", "rejects.jsonl"):
            assert _digest(pipeline_dir / name) == _digest(second / name)

    def test_config_file_with_flag_override(self, corpus_file, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"min_quote_words": 6, "max_gap_run": 4}))
        out = tmp_path / "out"
        code = main(
            ["pipeline", "--input", str(corpus_file), "--output-dir", str(out),
             "--config", str(config), "--max-gap-run", "8"]
        )
        assert code == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["config"]["min_quote_words"] == 6
        assert summary["config"]["max_gap_run"] == 8

    def test_empty_corpus(self, tmp_path):
        empty = tmp_path / "empty.jsonl"
        empty.write_text("")
        out = tmp_path / "out"
        assert main(["pipeline", "--input", str(empty), "--output-dir", str(out)]) == 0
        assert read_graph_file(out / "verbcl_graph.jsonl") == []

    def test_missing_input_is_io_error(self, tmp_path, capsys):
        code = main(["pipeline", "--input", str(tmp_path / "nope.jsonl"),
                     "--output-dir", str(tmp_path / "out")])
        assert code == 2
        assert "i/o error" in capsys.readouterr().err

    def test_bad_flag_value_is_usage_error(self, corpus_file, tmp_path):
        code = main(["pipeline", "--input", str(corpus_file),
                     "--output-dir", str(tmp_path), "--window", "0"])
        assert code == 1


class TestUsageErrors:
    def test_no_command(self, capsys):
        assert main([]) == 1

    def test_unknown_command(self):
        assert main(["frobnicate"]) == 1

    def test_missing_required_flag(self):
        assert main(["pipeline", "--input", "x.jsonl"]) == 1


class TestHighlightsCommand:
    def test_matches_pipeline_output(self, corpus_file, pipeline_dir, tmp_path):
        out = tmp_path / "hl.jsonl"
        code = main(["highlights", "--input", str(corpus_file),
                     "--graph", str(pipeline_dir / "verbcl_graph.jsonl"),
                     "--output", str(out)])
        assert code == 0
        assert _digest(out) == _digest(pipeline_dir / "verbcl_highlights.jsonl")

    def test_schema_error_exit(self, corpus_file, tmp_path, capsys):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"citing_opinion_id": 1}\n')
        code = main(["highlights", "--input", str(corpus_file),
                     "--graph", str(bad), "--output", str(tmp_path / "o.jsonl")])
        assert code == 3
        assert "schema error" in capsys.readouterr().err


class TestGraphStatsCommand:
    def test_stats_payload(self, pipeline_dir, tmp_path):
        out = tmp_path / "stats.json"
        code = main(["graph-stats", "--graph", str(pipeline_dir / "verbcl_graph.jsonl"),
                     "--output", str(out)])
        assert code == 0
        stats = json.loads(out.read_text())
        assert stats["nodes"] > 0
        assert stats["cycle_count"] == 0  # planted citations point backward
        assert stats["betweenness"]["method"] == "exact"

    def test_approx_flag(self, pipeline_dir, tmp_path):
        out = tmp_path / "stats.json"
        code = main(["graph-stats", "--graph", str(pipeline_dir / "verbcl_graph.jsonl"),
                     "--output", str(out), "--approx-pivots", "10", "--seed", "3"])
        assert code == 0
        stats = json.loads(out.read_text())
        assert stats["betweenness"]["method"] == "approximate(k=10, seed=3)"


class TestRankAndEvaluate:
    @pytest.mark.parametrize("ranker", ["textrank", "position", "random"])
    def test_rank_writes_permutations(self, corpus_file, tmp_path, ranker):
        out = tmp_path / f"{ranker}.jsonl"
        assert main(["rank", "--input", str(corpus_file), "--ranker", ranker,
                     "--output", str(out)]) == 0
        rows = read_ranking_file(out)
        assert rows
        for row in rows:
            assert sorted(row["order"]) == list(range(len(row["order"])))

    def test_evaluate_end_to_end(self, corpus_file, pipeline_dir, tmp_path):
        rankings = tmp_path / "rankings.jsonl"
        assert main(["rank", "--input", str(corpus_file), "--ranker", "position",
                     "--output", str(rankings)]) == 0
        out = tmp_path / "eval.json"
        code = main(["evaluate", "--rankings", str(rankings),
                     "--highlights", str(pipeline_dir / "verbcl_highlights.jsonl"),
                     "--output", str(out), "--word-limit", "512",
                     "--top-k", "5", "--seed", "0"])
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["opinion_count"] > 0
        assert payload["seed"] == 0
        assert 0.0 <= payload["macro"]["average_precision"] <= 1.0

    def test_no_overlap_is_validation_error(self, pipeline_dir, tmp_path, capsys):
        rankings = tmp_path / "rankings.jsonl"
        rankings.write_text(
            json.dumps({"opinion_id": 999999, "order": [0], "scores": [1.0]}) + "\n"
        )
        code = main(["evaluate", "--rankings", str(rankings),
                     "--highlights", str(pipeline_dir / "verbcl_highlights.jsonl"),
                     "--output", str(tmp_path / "eval.json")])
        assert code == 3
        assert "validation error" in capsys.readouterr().err


class TestAuditCommands:
    def test_sample_then_score(self, corpus_file, pipeline_dir, tmp_path, capsys):
        sample = tmp_path / "audit.jsonl"
        code = main(["audit-sample", "--graph", str(pipeline_dir / "verbcl_graph.jsonl"),
                     "--rejects", str(pipeline_dir / "rejects.jsonl"),
                     "--input", str(corpus_file), "-k", "40", "--seed", "1",
                     "--output", str(sample)])
        assert code == 0
        rows = [json.loads(line) for line in sample.read_text().splitlines()]
        assert len(rows) == 40
        assert all(row["gold"] is None for row in rows)

        # Unlabeled file is rejected.
        assert main(["audit-score", "--audit", str(sample)]) == 3

        # Pretend the classifier is always right, then score.
        labeled = tmp_path / "labeled.jsonl"
        with open(labeled, "w") as fh:
            for row in rows:
                row["gold"] = row["predicted"]
                fh.write(json.dumps(row) + "\n")
        out = tmp_path / "audit_report.json"
        assert main(["audit-score", "--audit", str(labeled), "--output", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["confusion"]["fp"] == 0
        assert report["confusion"]["fn"] == 0
        assert report["total"] == 40

    def test_sample_too_large(self, corpus_file, pipeline_dir, tmp_path):
        code = main(["audit-sample", "--graph", str(pipeline_dir / "verbcl_graph.jsonl"),
                     "--rejects", str(pipeline_dir / "rejects.jsonl"),
                     "--input", str(corpus_file), "-k", "1000000",
                     "--output", str(tmp_path / "s.jsonl")])
        assert code == 1

    def test_sample_deterministic(self, corpus_file, pipeline_dir, tmp_path):
        a = tmp_path / "a.jsonl"
        b = tmp_path / "b.jsonl"
        for out in (a, b):
            assert main(["audit-sample", "--graph", str(pipeline_dir / "verbcl_graph.jsonl"),
                         "--rejects", str(pipeline_dir / "rejects.jsonl"),
                         "--input", str(corpus_file), "-k", "25", "--seed", "7",
                         "--output", str(out)]) == 0
        assert _digest(a) == _digest(b)
