"""Corpus-level BLEU over whitespace tokens, single reference.

Clipped n-gram matches and totals for orders 1 to 4 are aggregated over the
whole corpus before taking precisions. An order with an empty denominator
scores 0, and any zero precision zeroes the whole score (no smoothing at
corpus level). The brevity penalty is min(1, exp(1 - ref_len / hyp_len)).
Scores are on the 0-100 scale; identical corpora score exactly 100.0.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass

from .corpus import Sentence
from .errors import ScoringError

MAX_ORDER = 4


@dataclass(frozen=True)
class BleuReport:
    score: float
    precisions: tuple[float, float, float, float]
    brevity_penalty: float
    hyp_length: int
    ref_length: int

    def format(self) -> str:
        p1, p2, p3, p4 = (100.0 * p for p in self.precisions)
        return (
            f"BLEU = {self.score:.2f} "
            f"({p1:.1f}/{p2:.1f}/{p3:.1f}/{p4:.1f}, "
            f"BP={self.brevity_penalty:.3f})"
        )


def _ngrams(tokens: Sentence, order: int) -> Counter[Sentence]:
    return Counter(
        tokens[i : i + order] for i in range(len(tokens) - order + 1)
    )


def corpus_bleu(
    hypotheses: Sequence[Sentence], references: Sequence[Sentence]
) -> BleuReport:
    if len(hypotheses) != len(references):
        raise ScoringError(
            f"{len(hypotheses)} hypotheses for {len(references)} references"
        )
    if not hypotheses:
        raise ScoringError("cannot score an empty corpus")

    matched = [0] * MAX_ORDER
    totals = [0] * MAX_ORDER
    hyp_length = 0
    ref_length = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_length += len(hyp)
        ref_length += len(ref)
        for order in range(1, MAX_ORDER + 1):
            hyp_grams = _ngrams(hyp, order)
            ref_grams = _ngrams(ref, order)
            totals[order - 1] += sum(hyp_grams.values())
            matched[order - 1] += sum(
                min(count, ref_grams[gram]) for gram, count in hyp_grams.items()
            )

    precisions = tuple(
        m / t if t > 0 else 0.0 for m, t in zip(matched, totals)
    )
    if hyp_length == 0:
        return BleuReport(
            score=0.0,
            precisions=precisions,
            brevity_penalty=0.0,
            hyp_length=0,
            ref_length=ref_length,
        )
    brevity = min(1.0, math.exp(1.0 - ref_length / hyp_length))
    if any(p == 0.0 for p in precisions):
        score = 0.0
    else:
        score = 100.0 * brevity * math.exp(
            sum(math.log(p) for p in precisions) / MAX_ORDER
        )
    return BleuReport(
        score=score,
        precisions=precisions,
        brevity_penalty=brevity,
        hyp_length=hyp_length,
        ref_length=ref_length,
    )
