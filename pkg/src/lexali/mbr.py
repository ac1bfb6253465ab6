"""Minimum Bayes risk consensus over a candidate pool.

Every candidate is scored by its average utility against the whole pool
(itself included) and the highest-scoring candidate wins, ties going to the
smallest index. Three utilities are available, all symmetric in spirit but
used directionally as u(hypothesis, reference):

``chrf``
    Character n-gram F-score over the space-joined sentence, orders 1 to 6,
    beta = 2 (recall weighted four times precision). Precision averages the
    orders the hypothesis string is long enough to have, recall the orders
    the reference supports, so u(x, x) = 1 holds for arbitrarily short
    strings and strings with disjoint characters score 0.
``sentence_bleu``
    Token n-gram precision up to order 4, add-one smoothed per order as
    (matches + 1) / (total + 1), geometric mean, times the brevity penalty
    min(1, exp(1 - |ref| / |hyp|)).
``exact_match``
    1.0 on token-for-token equality, else 0.0.

Every utility returns 1.0 when both sides are empty and 0.0 when exactly
one side is empty.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Sequence
from typing import Literal

from .corpus import Sentence
from .errors import ScoringError

UtilityKind = Literal["chrf", "sentence_bleu", "exact_match"]

UTILITY_KINDS: tuple[UtilityKind, ...] = ("chrf", "sentence_bleu", "exact_match")

CHRF_MAX_ORDER = 6
CHRF_BETA = 2.0
BLEU_MAX_ORDER = 4


def _char_ngrams(text: str, order: int) -> Counter[str]:
    return Counter(text[i : i + order] for i in range(len(text) - order + 1))


def _overlap(hyp_grams: Counter, ref_grams: Counter) -> int:
    return sum(min(count, ref_grams[gram]) for gram, count in hyp_grams.items())


def chrf(hyp: Sentence, ref: Sentence) -> float:
    hyp_text = " ".join(hyp)
    ref_text = " ".join(ref)
    if not hyp_text and not ref_text:
        return 1.0
    if not hyp_text or not ref_text:
        return 0.0

    precisions = []
    for order in range(1, min(CHRF_MAX_ORDER, len(hyp_text)) + 1):
        hyp_grams = _char_ngrams(hyp_text, order)
        matched = _overlap(hyp_grams, _char_ngrams(ref_text, order))
        precisions.append(matched / sum(hyp_grams.values()))
    recalls = []
    for order in range(1, min(CHRF_MAX_ORDER, len(ref_text)) + 1):
        ref_grams = _char_ngrams(ref_text, order)
        matched = _overlap(ref_grams, _char_ngrams(hyp_text, order))
        recalls.append(matched / sum(ref_grams.values()))

    precision = sum(precisions) / len(precisions)
    recall = sum(recalls) / len(recalls)
    beta_sq = CHRF_BETA * CHRF_BETA
    denom = beta_sq * precision + recall
    if denom == 0.0:
        return 0.0
    return (1.0 + beta_sq) * precision * recall / denom


def _token_ngrams(tokens: Sentence, order: int) -> Counter[Sentence]:
    return Counter(
        tokens[i : i + order] for i in range(len(tokens) - order + 1)
    )


def sentence_bleu(hyp: Sentence, ref: Sentence) -> float:
    if not hyp and not ref:
        return 1.0
    if not hyp or not ref:
        return 0.0
    log_sum = 0.0
    for order in range(1, BLEU_MAX_ORDER + 1):
        hyp_grams = _token_ngrams(hyp, order)
        matched = _overlap(hyp_grams, _token_ngrams(ref, order))
        total = sum(hyp_grams.values())
        log_sum += math.log((matched + 1) / (total + 1))
    geo_mean = math.exp(log_sum / BLEU_MAX_ORDER)
    brevity = min(1.0, math.exp(1.0 - len(ref) / len(hyp)))
    return brevity * geo_mean


def exact_match(hyp: Sentence, ref: Sentence) -> float:
    return 1.0 if tuple(hyp) == tuple(ref) else 0.0


_UTILITIES = {
    "chrf": chrf,
    "sentence_bleu": sentence_bleu,
    "exact_match": exact_match,
}


def utility(hyp: Sentence, ref: Sentence, kind: UtilityKind) -> float:
    try:
        fn = _UTILITIES[kind]
    except KeyError:
        raise ScoringError(f"unknown utility: {kind!r}") from None
    return fn(hyp, ref)


def expected_utilities(
    pool: Sequence[Sentence], kind: UtilityKind
) -> list[float]:
    """Average utility of each candidate against the whole pool, self included."""
    if not pool:
        raise ScoringError("candidate pool is empty")
    fn = _UTILITIES.get(kind)
    if fn is None:
        raise ScoringError(f"unknown utility: {kind!r}")
    # pools are tiny and often repetitive, so memoize pairs
    cache: dict[tuple[Sentence, Sentence], float] = {}
    scores = []
    for hyp in pool:
        total = 0.0
        for ref in pool:
            key = (hyp, ref)
            value = cache.get(key)
            if value is None:
                value = fn(hyp, ref)
                cache[key] = value
            total += value
        scores.append(total / len(pool))
    return scores


def mbr_select(
    pool: Sequence[Sentence], kind: UtilityKind
) -> tuple[int, Sentence]:
    """Index and tokens of the expected-utility argmax; first of ties wins."""
    scores = expected_utilities(pool, kind)
    best_index = 0
    for i in range(1, len(scores)):
        if scores[i] > scores[best_index]:
            best_index = i
    return best_index, tuple(pool[best_index])
