import pytest

from quotegraph.anchor import Snippet, VerbatimCandidate
from quotegraph.corpus import Opinion, RawDocument, parse_document


def make_opinion(text: str, opinion_id: int = 1) -> Opinion:
    return parse_document(RawDocument(opinion_id, f"<p>{text}</p>"))


def make_candidate(quoted_text: str, snippet_text: str | None = None) -> VerbatimCandidate:
    snippet = Snippet(
        citing_opinion_id=1,
        cited_opinion_id=2,
        mention_index=0,
        text=snippet_text if snippet_text is not None else f'"{quoted_text}"',
        window_words=100,
    )
    return VerbatimCandidate(snippet, quoted_text, len(quoted_text.split()))


@pytest.fixture
def mini_corpus():
    from quotegraph.minicorpus import generate_mini_corpus

    return generate_mini_corpus()
