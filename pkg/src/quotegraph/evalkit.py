"""Sentence ranking baselines and highlight-extraction evaluation.

Rankers emit a full permutation of an opinion's sentence ids with
non-increasing scores (ties broken by ascending sentence id).  Evaluation
scores each ranking against the opinion's highlight set with P@1, P@R, AP and
RR, plus ROUGE-1/2/L between the concatenated top-k sentences and the
concatenated highlight sentences (both in document order).  ROUGE uses
lowercased punctuation-stripped tokens, no stemming, no stopword removal.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .corpus import Opinion, normalize_token
from .highlight import SentenceRecord


class NoRelevantError(ValueError):
    """Opinion has no relevant (highlight) sentences."""


class MissingGoldError(KeyError):
    """Ranked opinion has no gold records."""


@dataclass
class RankedSentences:
    opinion_id: int
    order: list[int]  # permutation of 0..n-1, best first
    scores: list[float]  # parallel to order, non-increasing


def ranking_metrics(order: list[int], relevant: set[int]) -> dict[str, float]:
    """P@1, P@R, average precision and reciprocal rank for one ranking."""
    if not relevant:
        raise NoRelevantError("empty relevant set")
    if not relevant <= set(order):
        raise ValueError("relevant ids must appear in the ranking")

    r = len(relevant)
    p_at_1 = 1.0 if order[0] in relevant else 0.0
    top_r = order[:r]
    p_at_r = sum(1 for s in top_r if s in relevant) / len(top_r)

    hits = 0
    ap_sum = 0.0
    rr = 0.0
    for rank, sid in enumerate(order, start=1):
        if sid in relevant:
            hits += 1
            ap_sum += hits / rank
            if rr == 0.0:
                rr = 1.0 / rank
    return {
        "p_at_1": p_at_1,
        "p_at_r": p_at_r,
        "average_precision": ap_sum / r,
        "reciprocal_rank": rr,
    }


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _prf(overlap: float, hyp_total: float, ref_total: float) -> dict[str, float]:
    p = overlap / hyp_total if hyp_total else 0.0
    r = overlap / ref_total if ref_total else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return {"precision": p, "recall": r, "f1": f}


def rouge_n(hyp: list[str], ref: list[str], n: int) -> dict[str, float]:
    """Clipped n-gram overlap precision/recall/F1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    hyp_counts = _ngrams(hyp, n)
    ref_counts = _ngrams(ref, n)
    overlap = sum((hyp_counts & ref_counts).values())
    return _prf(overlap, sum(hyp_counts.values()), sum(ref_counts.values()))


def lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(prev[j], cur[-1]))
        prev = cur
    return prev[-1]


def rouge_l(hyp: list[str], ref: list[str]) -> dict[str, float]:
    """Longest-common-subsequence precision/recall/F1."""
    return _prf(lcs_length(hyp, ref), len(hyp), len(ref))


def _sentence_tokens(opinion: Opinion, sid: int) -> list[str]:
    text = opinion.sentence_text(sid)
    return [n for n in (normalize_token(w) for w in text.split()) if n]


def textrank_rank(
    opinion: Opinion,
    damping: float = 0.85,
    tol: float = 1e-6,
    max_iter: int = 200,
) -> RankedSentences:
    """Graph-based sentence ranker (damped power iteration).

    Sentence similarity is the shared normalized word-type count divided by
    log(1 + len_i) + log(1 + len_j), with lengths in words.  Scores are
    normalized to sum 1.
    """
    n = opinion.n_sentences
    if n < 1:
        raise ValueError("opinion has no sentences")
    if n == 1:
        return RankedSentences(opinion.opinion_id, [0], [1.0])

    token_sets = []
    lengths = []
    for sid in range(n):
        toks = _sentence_tokens(opinion, sid)
        token_sets.append(set(toks))
        lengths.append(len(opinion.sentence_text(sid).split()))

    w = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            shared = len(token_sets[i] & token_sets[j])
            if shared:
                sim = shared / (math.log(1 + lengths[i]) + math.log(1 + lengths[j]))
                w[i, j] = sim
                w[j, i] = sim

    row_sums = w.sum(axis=1)
    dangling = row_sums == 0
    transition = np.zeros_like(w)
    nonzero = ~dangling
    transition[nonzero] = w[nonzero] / row_sums[nonzero, None]

    p = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        dangling_mass = p[dangling].sum() / n
        new = (1 - damping) / n + damping * (transition.T @ p + dangling_mass)
        if np.abs(new - p).sum() < tol:
            p = new
            break
        p = new
    p = p / p.sum()

    order = sorted(range(n), key=lambda i: (-p[i], i))
    return RankedSentences(opinion.opinion_id, order, [float(p[i]) for i in order])


def position_rank(opinion: Opinion) -> RankedSentences:
    """Document order, earliest first."""
    n = opinion.n_sentences
    if n < 1:
        raise ValueError("opinion has no sentences")
    order = list(range(n))
    return RankedSentences(opinion.opinion_id, order, [float(n - i) for i in order])


def random_rank(opinion: Opinion, seed: int) -> RankedSentences:
    """Seeded uniform permutation; deterministic per (seed, opinion)."""
    n = opinion.n_sentences
    if n < 1:
        raise ValueError("opinion has no sentences")
    rng = random.Random((seed << 32) ^ opinion.opinion_id)
    order = list(range(n))
    rng.shuffle(order)
    return RankedSentences(opinion.opinion_id, order, [float(n - i) for i in range(n)])


def group_records(records: list[SentenceRecord]) -> dict[int, list[SentenceRecord]]:
    grouped: dict[int, list[SentenceRecord]] = {}
    for rec in records:
        grouped.setdefault(rec.opinion_id, []).append(rec)
    for recs in grouped.values():
        recs.sort(key=lambda r: r.sentence_id)
    return grouped


def filter_test_set(
    records_by_opinion: dict[int, list[SentenceRecord]], word_limit: int
) -> set[int]:
    """Opinions with a highlight sentence ending within the first N words."""
    if word_limit < 1:
        raise ValueError("word_limit must be >= 1")
    kept = set()
    for opinion_id, recs in records_by_opinion.items():
        cumulative = 0
        for rec in sorted(recs, key=lambda r: r.sentence_id):
            cumulative += len(rec.raw_text.split())
            if rec.highlight and cumulative <= word_limit:
                kept.add(opinion_id)
                break
    return kept


def truncate_to_word_limit(
    records: list[SentenceRecord], word_limit: int
) -> list[SentenceRecord]:
    """Prefix of an opinion's sentences fully inside the first N words."""
    out = []
    cumulative = 0
    for rec in sorted(records, key=lambda r: r.sentence_id):
        cumulative += len(rec.raw_text.split())
        if cumulative > word_limit and out:
            break
        out.append(rec)
    return out


@dataclass
class EvalReport:
    per_opinion: dict[int, dict] = field(default_factory=dict)
    macro: dict = field(default_factory=dict)
    opinion_count: int = 0
    skipped_no_relevant: int = 0
    top_k: int = 5
    word_limit: int | None = None

    def as_dict(self) -> dict:
        return {
            "macro": self.macro,
            "opinion_count": self.opinion_count,
            "skipped_no_relevant": self.skipped_no_relevant,
            "top_k": self.top_k,
            "word_limit": self.word_limit,
            "per_opinion": {str(k): v for k, v in sorted(self.per_opinion.items())},
        }


_MACRO_KEYS = (
    "p_at_1",
    "p_at_r",
    "average_precision",
    "reciprocal_rank",
    "rouge1_precision",
    "rouge1_recall",
    "rouge1_f",
    "rouge2_precision",
    "rouge2_recall",
    "rouge2_f",
    "rougeL_precision",
    "rougeL_recall",
    "rougeL_f",
)


def evaluate(
    rankings: list[RankedSentences],
    gold: list[SentenceRecord],
    top_k: int = 5,
    word_limit: int | None = None,
) -> EvalReport:
    """Score rankings against highlight labels; macro-average over opinions."""
    grouped = group_records(gold)
    report = EvalReport(top_k=top_k, word_limit=word_limit)
    sums = {k: 0.0 for k in _MACRO_KEYS}

    for ranking in sorted(rankings, key=lambda r: r.opinion_id):
        recs = grouped.get(ranking.opinion_id)
        if recs is None:
            raise MissingGoldError(ranking.opinion_id)
        text_of = {r.sentence_id: r.raw_text for r in recs}
        relevant = {r.sentence_id for r in recs if r.highlight}
        if not relevant:
            report.skipped_no_relevant += 1
            continue

        metrics = ranking_metrics(ranking.order, relevant)

        hyp_ids = sorted(ranking.order[:top_k])
        ref_ids = sorted(relevant)
        hyp_tokens = [
            n
            for sid in hyp_ids
            for n in (normalize_token(w) for w in text_of[sid].split())
            if n
        ]
        ref_tokens = [
            n
            for sid in ref_ids
            for n in (normalize_token(w) for w in text_of[sid].split())
            if n
        ]
        r1 = rouge_n(hyp_tokens, ref_tokens, 1)
        r2 = rouge_n(hyp_tokens, ref_tokens, 2)
        rl = rouge_l(hyp_tokens, ref_tokens)

        row = dict(metrics)
        for name, vals in (("rouge1", r1), ("rouge2", r2), ("rougeL", rl)):
            row[f"{name}_precision"] = vals["precision"]
            row[f"{name}_recall"] = vals["recall"]
            row[f"{name}_f"] = vals["f1"]
        report.per_opinion[ranking.opinion_id] = row
        for key in _MACRO_KEYS:
            sums[key] += row[key]
        report.opinion_count += 1

    if report.opinion_count:
        report.macro = {k: sums[k] / report.opinion_count for k in _MACRO_KEYS}
    else:
        report.macro = {k: None for k in _MACRO_KEYS}
    return report
