"""Qualify quote candidates against the known cited opinion.

A candidate qualifies when its normalized tokens admit a monotone alignment to
the cited opinion's tokens such that:

* at least ``ceil((1 - max_skip_ratio) * c)`` of the ``c`` candidate tokens are
  matched, in order;
* every run of unmatched cited tokens between two consecutively matched cited
  tokens is at most ``max_gap_run`` long (this is what tolerates ellipses);
* token equality is exact for short tokens and tolerates one edit for tokens
  of at least ``fuzzy_min_len`` characters (OCR noise).

Among feasible alignments the matcher maximizes the number of matched tokens,
then minimizes the total gap.  The score is ``(m/c) * (m/(m+g))`` where ``m``
counts matched candidate tokens and ``g`` counts unmatched cited tokens inside
the aligned range; an exact contiguous containment scores exactly 1.0 and a
non-match is reported with score -1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .anchor import VerbatimCandidate
from .corpus import Opinion, normalize_token


class CandidateTooShortError(ValueError):
    """Candidate has fewer normalized tokens than the minimum quote length."""


@dataclass(frozen=True)
class MatchParams:
    max_gap_run: int = 8
    max_skip_ratio: float = 0.15
    fuzzy_min_len: int = 5
    fuzzy_edits: int = 1

    def __post_init__(self):
        if not (0 <= self.max_skip_ratio < 0.5):
            raise ValueError("max_skip_ratio must be in [0, 0.5)")
        if self.max_gap_run < 0:
            raise ValueError("max_gap_run must be >= 0")


@dataclass
class MatchResult:
    matched: bool
    score: float  # in [0, 1] when matched, -1 otherwise
    cited_token_range: tuple[int, int] | None  # inclusive match-token indices
    matched_pairs: list[tuple[int, int]]  # (candidate_idx, cited_idx)


def within_one_edit(a: str, b: str) -> bool:
    """True when edit distance (insert/delete/substitute) is at most 1."""
    if a == b:
        return True
    la, lb = len(a), len(b)
    if abs(la - lb) > 1:
        return False
    if la == lb:
        return sum(x != y for x, y in zip(a, b)) <= 1
    if la > lb:
        a, b, la, lb = b, a, lb, la
    # b is one char longer; allow a single skip in b.
    i = j = 0
    skipped = False
    while i < la and j < lb:
        if a[i] == b[j]:
            i += 1
            j += 1
        elif not skipped:
            skipped = True
            j += 1
        else:
            return False
    return True


def tokens_match(cand_tok: str, cited_tok: str, params: MatchParams) -> bool:
    if cand_tok == cited_tok:
        return True
    if params.fuzzy_edits >= 1 and len(cand_tok) >= params.fuzzy_min_len:
        return within_one_edit(cand_tok, cited_tok)
    return False


def _one_deletions(tok: str):
    for i in range(len(tok)):
        yield tok[:i] + tok[i + 1 :]


class CitedTokenIndex:
    """Position index over a cited opinion's normalized tokens.

    Exact lookup plus a symmetric-deletion index so that fuzzy candidates
    (edit distance <= 1) are found without scanning the whole document.
    """

    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.exact: dict[str, list[int]] = {}
        self.deletes: dict[str, set[int]] = {}
        for j, tok in enumerate(tokens):
            self.exact.setdefault(tok, []).append(j)
            if len(tok) >= 4:
                self.deletes.setdefault(tok, set()).add(j)
                for d in _one_deletions(tok):
                    self.deletes.setdefault(d, set()).add(j)

    def positions(self, tok: str, params: MatchParams) -> list[int]:
        if params.fuzzy_edits < 1 or len(tok) < params.fuzzy_min_len:
            return self.exact.get(tok, [])
        found: set[int] = set(self.exact.get(tok, []))
        keys = [tok, *(_one_deletions(tok))]
        for key in keys:
            for j in self.deletes.get(key, ()):
                if j not in found and within_one_edit(tok, self.tokens[j]):
                    found.add(j)
        return sorted(found)


def _cited_index(cited: Opinion) -> CitedTokenIndex:
    index = getattr(cited, "_cited_token_index", None)
    if index is None:
        index = CitedTokenIndex([t for t, _ in cited.match_tokens()])
        cited._cited_token_index = index
    return index


def allowed_skips(c: int, max_skip_ratio: float) -> int:
    # Epsilon guards against 0.15 * 60 evaluating just under the integer.
    return int(max_skip_ratio * c + 1e-9)


def qualify(
    candidate: VerbatimCandidate,
    cited: Opinion,
    params: MatchParams = MatchParams(),
    min_quote_words: int = 5,
) -> MatchResult:
    """Decide whether a candidate is lifted from the cited opinion.

    Dynamic program over (candidate token, cited position) match pairs: each
    state keeps the best (matched count, total gap) for an alignment ending
    there, with predecessors restricted to cited positions within
    ``max_gap_run + 1`` to the left.  Deterministic tie-breaking keeps
    ``matched_pairs`` reproducible.
    """
    cand_tokens = [
        n for n in (normalize_token(w) for w in candidate.quoted_text.split()) if n
    ]
    c = len(cand_tokens)
    if c < min_quote_words:
        raise CandidateTooShortError(
            f"candidate has {c} tokens, minimum is {min_quote_words}"
        )

    index = _cited_index(cited)
    g_max = params.max_gap_run

    # Match pairs grouped by cited position.
    by_j: dict[int, list[int]] = {}
    for i, tok in enumerate(cand_tokens):
        for j in index.positions(tok, params):
            by_j.setdefault(j, []).append(i)
    if not by_j:
        return MatchResult(False, -1.0, None, [])

    js = sorted(by_j)
    # state[(j, i)] = (m, gap, parent key or None)
    state: dict[tuple[int, int], tuple[int, int, tuple[int, int] | None]] = {}
    window: list[int] = []  # js within reach, ascending

    for j in js:
        while window and window[0] < j - g_max - 1:
            window.pop(0)
        for i in by_j[j]:
            best = (1, 0, None)  # start a fresh alignment at (i, j)
            for j2 in window:
                gap = j - j2 - 1
                for i2 in by_j[j2]:
                    if i2 >= i:
                        break
                    prev = state.get((j2, i2))
                    if prev is None:
                        continue
                    m2, gap2, _ = prev
                    cand_state = (m2 + 1, gap2 + gap, (j2, i2))
                    if (cand_state[0], -cand_state[1]) > (best[0], -best[1]):
                        best = cand_state
            state[(j, i)] = best
        window.append(j)

    best_key = None
    best_val = (0, 0)
    for key in sorted(state):
        m, gap, _ = state[key]
        if (m, -gap) > best_val:
            best_val = (m, -gap)
            best_key = key
    m, gap, _ = state[best_key]

    if m < c - allowed_skips(c, params.max_skip_ratio):
        return MatchResult(False, -1.0, None, [])

    # Reconstruct the chosen alignment.
    pairs = []
    key = best_key
    while key is not None:
        j, i = key
        pairs.append((i, j))
        key = state[key][2]
    pairs.reverse()

    first_j, last_j = pairs[0][1], pairs[-1][1]
    g = (last_j - first_j + 1) - m
    score = (m / c) * (m / (m + g))
    return MatchResult(True, score, (first_j, last_j), pairs)


@dataclass
class AuditReport:
    """Per-class precision/recall of the matcher against gold labels.

    A metric is ``None`` when its denominator is empty (e.g. no predicted
    positives), which is reported as absent rather than zero.
    """

    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def _ratio(self, num: int, den: int) -> float | None:
        return num / den if den else None

    @property
    def precision(self) -> dict[str, float | None]:
        return {
            "positive": self._ratio(self.tp, self.tp + self.fp),
            "negative": self._ratio(self.tn, self.tn + self.fn),
        }

    @property
    def recall(self) -> dict[str, float | None]:
        return {
            "positive": self._ratio(self.tp, self.tp + self.fn),
            "negative": self._ratio(self.tn, self.tn + self.fp),
        }

    def as_dict(self) -> dict:
        return {
            "confusion": {"tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn},
            "precision": self.precision,
            "recall": self.recall,
            "total": self.total,
        }


def confusion_report(predictions: list[bool], gold: list[bool]) -> AuditReport:
    if len(predictions) != len(gold):
        raise ValueError("predictions and gold labels differ in length")
    tp = fp = fn = tn = 0
    for p, g in zip(predictions, gold):
        if p and g:
            tp += 1
        elif p and not g:
            fp += 1
        elif not p and g:
            fn += 1
        else:
            tn += 1
    return AuditReport(tp, fp, fn, tn)


def audit_classifier(
    labeled: list[tuple[VerbatimCandidate, Opinion, bool]],
    params: MatchParams = MatchParams(),
    min_quote_words: int = 5,
) -> AuditReport:
    """Score the matcher's decisions against human gold labels.

    Candidates below the minimum quote length are predicted negative (they
    never reach the matcher in the pipeline).
    """
    preds = []
    gold = []
    for candidate, cited, label in labeled:
        try:
            result = qualify(candidate, cited, params, min_quote_words)
            preds.append(result.matched)
        except CandidateTooShortError:
            preds.append(False)
        gold.append(label)
    return confusion_report(preds, gold)
