import json

import pytest

from quotegraph.evalkit import RankedSentences
from quotegraph.highlight import SentenceRecord, VerbatimEdge
from quotegraph.records import (
    SchemaError,
    edge_to_dict,
    read_graph_file,
    read_highlight_file,
    read_ranking_file,
    record_to_dict,
    write_graph_file,
    write_highlight_file,
    write_ranking_file,
)

EDGE = VerbatimEdge(10, 2, 3, "quoted words", "the snippet", 0.875)
RECORD = SentenceRecord(2, 3, "Sentence text.", True, 4)


class TestGraphFile:
    def test_roundtrip(self, tmp_path):
        path = tmp_path / "graph.jsonl"
        reject = VerbatimEdge(11, 2, -1, "bad", "snip", -1.0)
        assert write_graph_file(path, [EDGE, reject]) == 2
        assert read_graph_file(path) == [EDGE, reject]

    def test_field_order(self, tmp_path):
        path = tmp_path / "graph.jsonl"
        write_graph_file(path, [EDGE])
        line = path.read_text(encoding="utf-8").splitlines()[0]
        assert list(json.loads(line)) == [
            "citing_opinion_id",
            "cited_opinion_id",
            "sentence_id",
            "verbatim",
            "snippet",
            "score",
        ]

    def test_missing_field(self, tmp_path):
        path = tmp_path / "graph.jsonl"
        row = edge_to_dict(EDGE)
        del row["score"]
        path.write_text(json.dumps(row) + "\n", encoding="utf-8")
        with pytest.raises(SchemaError) as exc:
            read_graph_file(path)
        assert exc.value.line_no == 1

    def test_wrong_type(self, tmp_path):
        path = tmp_path / "graph.jsonl"
        row = edge_to_dict(EDGE)
        row["sentence_id"] = "three"
        path.write_text(json.dumps(row) + "\n", encoding="utf-8")
        with pytest.raises(SchemaError):
            read_graph_file(path)

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "graph.jsonl"
        path.write_text("{broken\n", encoding="utf-8")
        with pytest.raises(SchemaError):
            read_graph_file(path)

    def test_non_object_line(self, tmp_path):
        path = tmp_path / "graph.jsonl"
        path.write_text("[1,2,3]\n", encoding="utf-8")
        with pytest.raises(SchemaError):
            read_graph_file(path)

    def test_unicode_preserved(self, tmp_path):
        path = tmp_path / "graph.jsonl"
        edge = VerbatimEdge(1, 2, 0, "“curly” naïve", "snippet", 1.0)
        write_graph_file(path, [edge])
        assert "“curly” naïve" in path.read_text(encoding="utf-8")
        assert read_graph_file(path)[0].verbatim == "“curly” naïve"


class TestHighlightFile:
    def test_roundtrip(self, tmp_path):
        path = tmp_path / "hl.jsonl"
        write_highlight_file(path, [RECORD])
        assert read_highlight_file(path) == [RECORD]

    def test_bool_not_int(self, tmp_path):
        path = tmp_path / "hl.jsonl"
        row = record_to_dict(RECORD)
        row["highlight"] = 1
        path.write_text(json.dumps(row) + "\n", encoding="utf-8")
        with pytest.raises(SchemaError):
            read_highlight_file(path)

    def test_int_not_bool(self, tmp_path):
        path = tmp_path / "hl.jsonl"
        row = record_to_dict(RECORD)
        row["count_citations"] = True
        path.write_text(json.dumps(row) + "\n", encoding="utf-8")
        with pytest.raises(SchemaError):
            read_highlight_file(path)


class TestRankingFile:
    def test_roundtrip(self, tmp_path):
        path = tmp_path / "rank.jsonl"
        write_ranking_file(path, [RankedSentences(1, [2, 0, 1], [3.0, 2.0, 1.0])])
        [row] = read_ranking_file(path)
        assert row == {"opinion_id": 1, "order": [2, 0, 1], "scores": [3.0, 2.0, 1.0]}

    def test_not_a_permutation(self, tmp_path):
        path = tmp_path / "rank.jsonl"
        path.write_text(
            json.dumps({"opinion_id": 1, "order": [0, 0], "scores": [1.0, 0.5]}) + "\n",
            encoding="utf-8",
        )
        with pytest.raises(SchemaError):
            read_ranking_file(path)

    def test_length_mismatch(self, tmp_path):
        path = tmp_path / "rank.jsonl"
        path.write_text(
            json.dumps({"opinion_id": 1, "order": [0, 1], "scores": [1.0]}) + "\n",
            encoding="utf-8",
        )
        with pytest.raises(SchemaError):
            read_ranking_file(path)

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "rank.jsonl"
        row = json.dumps({"opinion_id": 1, "order": [0], "scores": [1.0]})
        path.write_text(f"\n{row}\n\n", encoding="utf-8")
        assert len(read_ranking_file(path)) == 1
