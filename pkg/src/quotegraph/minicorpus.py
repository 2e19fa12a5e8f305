"""Synthetic corpora with planted verbatim quotes and known ground truth.

The mini corpus mimics the input schema: JSONL records with ``opinion_id`` and
``html``.  Citations are always from a higher opinion id to a lower one, so the
planted citation graph is acyclic by construction.  A configurable share of
quotes carries interior ellipsis deletions or character-level OCR noise; some
plantings are decoys whose quoted text does not come from the cited opinion.
"""

from __future__ import annotations

import json
import random
import string
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Opinion, parse_document, RawDocument

_WORD_BANK = """
appellant appellee argument assault authority breach burden capacity care
circumstance claim common condition conduct contract counsel court damages
decision defendant defense doctrine duty evidence exception fact finding
foreseeable harm hearing injury instruction invitee judgment jurisdiction
jury landowner liability litigation motion negligence notice obligation
opinion ordinance owner party plaintiff possessor precedent premises
principle proceeding proof protection reasonable record relationship
remand reversal review rule ruling standard statute summary testimony
third tort trial verdict warning witness ordinary special vicinity
assert conclude consider determine establish examine hold maintain observe
present require sustain
""".split()

_CASE_SURNAMES = [
    "Wright", "Webb", "Tate", "Rice", "Rogers", "Klingbeil", "Vito", "Doe",
    "Chimes", "Gulf", "Reston", "Harmon", "Pierce", "Lattimore", "Quarles",
]


@dataclass
class PlantedQuote:
    citing_opinion_id: int
    cited_opinion_id: int
    sentence_ids: list[int]
    kind: str  # clean | ellipsis | ocr | decoy


@dataclass
class SyntheticCorpus:
    records: list[dict]  # {"opinion_id": int, "html": str}
    truth: list[PlantedQuote] = field(default_factory=list)

    def true_edges(self) -> set[tuple[int, int, int]]:
        return {
            (p.citing_opinion_id, p.cited_opinion_id, sid)
            for p in self.truth
            if p.kind != "decoy"
            for sid in p.sentence_ids
        }

    def write(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for rec in self.records:
                fh.write(json.dumps(rec, ensure_ascii=False))
                fh.write("\n")

    def parsed(self) -> dict[int, Opinion]:
        return {
            rec["opinion_id"]: parse_document(
                RawDocument(rec["opinion_id"], rec["html"])
            )
            for rec in self.records
        }


def _sentence(rng: random.Random, n_words: int) -> str:
    words = [rng.choice(_WORD_BANK) for _ in range(n_words)]
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


def _case_name(rng: random.Random) -> str:
    a, b = rng.sample(_CASE_SURNAMES, 2)
    return f"{a} v. {b}"


def _apply_ellipsis(words: list[str], rng: random.Random) -> list[str]:
    """Delete up to 3 interior words, leaving an ellipsis in their place."""
    if len(words) < 8:
        return words
    run = rng.randint(1, 3)
    start = rng.randint(2, len(words) - run - 2)
    return words[:start] + ["..."] + words[start + run :]


def _apply_ocr_noise(text: str, rng: random.Random, rate: float = 0.02) -> str:
    out = []
    for ch in text:
        if ch.isalpha() and rng.random() < rate:
            out.append(rng.choice(string.ascii_lowercase))
        else:
            out.append(ch)
    return "".join(out)


def generate_mini_corpus(
    n_opinions: int = 50,
    n_citations: int = 200,
    n_decoys: int = 30,
    ellipsis_share: float = 0.3,
    ocr_share: float = 0.2,
    seed: int = 1234,
) -> SyntheticCorpus:
    """Corpus with planted citations whose edges are known by construction.

    Roughly ``ellipsis_share`` of the true quotes carry interior deletions and
    ``ocr_share`` carry 2%-rate character noise (disjoint groups); decoys are
    quoted spans that do not originate from the cited opinion.
    """
    rng = random.Random(seed)
    base_id = 100

    # Body sentences per opinion, fixed before planting.
    bodies = {
        base_id + i: [_sentence(rng, rng.randint(8, 24)) for _ in range(rng.randint(20, 36))]
        for i in range(n_opinions)
    }
    ids = sorted(bodies)

    kinds = []
    n_ellipsis = int(n_citations * ellipsis_share)
    n_ocr = int(n_citations * ocr_share)
    kinds += ["ellipsis"] * n_ellipsis
    kinds += ["ocr"] * n_ocr
    kinds += ["clean"] * (n_citations - n_ellipsis - n_ocr)
    kinds += ["decoy"] * n_decoys
    rng.shuffle(kinds)

    # Choose quote sources first: a two-sentence quote is only contiguous in
    # the final document if no citation fragment lands between its sentences,
    # so those insertion positions become forbidden below.
    plantings = []
    forbidden: dict[int, set[int]] = {i: set() for i in ids}
    for kind in kinds:
        citing = rng.choice(ids[1:])
        cited = rng.choice([i for i in ids if i < citing])
        if kind == "decoy":
            plantings.append((kind, citing, cited, None, False))
            continue
        two = rng.random() < 0.15
        sid = rng.randint(0, len(bodies[cited]) - (2 if two else 1))
        if two:
            forbidden[cited].add(sid + 1)
        plantings.append((kind, citing, cited, sid, two))

    # Insertions per citing opinion: (position, html fragment).
    insertions: dict[int, list[tuple[int, str]]] = {i: [] for i in ids}
    truth: list[PlantedQuote] = []
    for kind, citing, cited, sid, two in plantings:
        if kind == "decoy":
            quote_words = [rng.choice(_WORD_BANK) for _ in range(rng.randint(8, 16))]
            source_texts: list[str] = []
        else:
            source_texts = bodies[cited][sid : sid + (2 if two else 1)]
            quote_words = " ".join(source_texts).split()
            if kind == "ellipsis":
                quote_words = _apply_ellipsis(quote_words, rng)

        quote = " ".join(quote_words)
        if kind == "ocr":
            quote = _apply_ocr_noise(quote, rng)

        marker = (
            f'<span class="citation" data-id="{cited}">{_case_name(rng)}</span>'
        )
        fragment = f'The court held that "{quote}" {marker} controls here.'
        position = rng.randint(0, len(bodies[citing]))
        while position in forbidden[citing]:
            position += 1
        insertions[citing].append((position, fragment))
        truth.append(PlantedQuote(citing, cited, source_texts, kind))

    records = []
    for opinion_id in ids:
        parts = list(bodies[opinion_id])
        # Insert later positions first so earlier indices stay valid.
        for position, fragment in sorted(
            insertions[opinion_id], key=lambda t: -t[0]
        ):
            parts.insert(position, fragment)
        records.append(
            {"opinion_id": opinion_id, "html": "<p>" + " ".join(parts) + "</p>"}
        )

    corpus = SyntheticCorpus(records, truth)
    # Planted sentence ids are only final once the fragments are in place and
    # the documents re-segmented, so map source sentences to parsed indices.
    parsed = corpus.parsed()
    for planted in truth:
        opinion = parsed[planted.cited_opinion_id]
        sentence_index = {
            opinion.sentence_text(i): i for i in range(opinion.n_sentences)
        }
        planted.sentence_ids = [sentence_index[text] for text in planted.sentence_ids]
    return corpus


def generate_central_highlight_corpus(
    n_opinions: int = 12,
    n_sentences: int = 9,
    seed: int = 7,
) -> tuple[dict[int, Opinion], list]:
    """Opinions whose single highlight sentence is lexically central.

    Every non-highlight sentence borrows a few words from the highlight
    sentence, so a lexical-centrality ranker should place it early.  Returns
    parsed opinions and gold sentence records.
    """
    from .highlight import SentenceRecord

    rng = random.Random(seed)
    opinions: dict[int, Opinion] = {}
    gold: list[SentenceRecord] = []
    for k in range(n_opinions):
        opinion_id = 9000 + k
        central_words = [rng.choice(_WORD_BANK) for _ in range(10)]
        central = " ".join([central_words[0].capitalize()] + central_words[1:]) + "."
        hub = rng.randint(1, n_sentences - 2)
        sents = []
        for i in range(n_sentences):
            if i == hub:
                sents.append(central)
            else:
                borrowed = rng.sample(central_words, 3)
                own = [rng.choice(_WORD_BANK) for _ in range(7)]
                words = own[:3] + borrowed + own[3:]
                words[0] = words[0].capitalize()
                sents.append(" ".join(words) + ".")
        html = "<p>" + " ".join(sents) + "</p>"
        opinion = parse_document(RawDocument(opinion_id, html))
        opinions[opinion_id] = opinion
        for sid in range(opinion.n_sentences):
            gold.append(
                SentenceRecord(
                    opinion_id=opinion_id,
                    sentence_id=sid,
                    raw_text=opinion.sentence_text(sid),
                    highlight=(sid == hub),
                    count_citations=1 if sid == hub else 0,
                )
            )
    return opinions, gold
