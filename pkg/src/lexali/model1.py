"""IBM Model 1: EM-trained lexical translation tables and Viterbi alignment.

Directions follow the mapping convention. A ``tgt_to_src`` table conditions
on source words and emits target words (it scores t(target|source)), so its
Viterbi alignment maps every *target* position to a source position or NULL.
``src_to_tgt`` is the mirror image. Every conditioning sentence is extended
with a NULL word so that unexplained emitted words have somewhere to go.

Training is plain sequential EM. The translation table is initialized
uniformly over the emitted words each conditioning word co-occurs with, the
E-step distributes one unit of count per emitted token proportionally to the
current probabilities, and the M-step renormalizes per conditioning word.
All accumulation runs in corpus order over insertion-ordered dicts, so
repeated runs are bit-identical.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

from .corpus import ParallelCorpus, Sentence, _decode, _split_lines
from .errors import AlignmentError, CorpusFormatError

Direction = Literal["tgt_to_src", "src_to_tgt"]

NULL_WORD = "<NULL>"
PROB_FLOOR = 1e-12

TGT_TO_SRC: Direction = "tgt_to_src"
SRC_TO_TGT: Direction = "src_to_tgt"


@dataclass(frozen=True)
class TranslationTable:
    """t(emitted | conditioning) for one direction; missing entries are 0."""

    direction: Direction
    probs: dict[str, dict[str, float]]

    def prob(self, conditioning: str, emitted: str) -> float:
        row = self.probs.get(conditioning)
        if row is None:
            return 0.0
        return row.get(emitted, 0.0)


@dataclass(frozen=True)
class DirectionalAlignment:
    """One link per emitted position; None marks a NULL link."""

    links: tuple[int | None, ...]
    conditioning_length: int

    def __post_init__(self) -> None:
        for link in self.links:
            if link is not None and not 0 <= link < self.conditioning_length:
                raise AlignmentError(
                    f"link {link} out of range for conditioning length "
                    f"{self.conditioning_length}"
                )


def _check_direction(direction: str) -> Direction:
    if direction not in (TGT_TO_SRC, SRC_TO_TGT):
        raise ValueError(f"unknown direction: {direction!r}")
    return direction  # type: ignore[return-value]


def _oriented(
    corpus: ParallelCorpus, direction: Direction
) -> list[tuple[Sentence, Sentence]]:
    """Pairs as (conditioning sentence, emitted sentence)."""
    if direction == TGT_TO_SRC:
        return [(src, tgt) for src, tgt in corpus.pairs]
    return [(tgt, src) for src, tgt in corpus.pairs]


def train_model1(
    corpus: ParallelCorpus, direction: Direction, iterations: int
) -> TranslationTable:
    """Run EM for the given number of iterations (at least 1)."""
    _check_direction(direction)
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    if not corpus.pairs:
        raise CorpusFormatError("cannot train on an empty corpus")

    pairs = _oriented(corpus, direction)

    # co-occurrence support per conditioning word, insertion-ordered
    cooc: dict[str, dict[str, None]] = {NULL_WORD: {}}
    for conditioning, emitted in pairs:
        for e in (NULL_WORD, *conditioning):
            row = cooc.setdefault(e, {})
            for f in emitted:
                row[f] = None

    probs: dict[str, dict[str, float]] = {
        e: {f: 1.0 / len(row) for f in row} for e, row in cooc.items()
    }

    for _ in range(iterations):
        counts: dict[str, dict[str, float]] = {e: {} for e in probs}
        totals: dict[str, float] = {e: 0.0 for e in probs}
        for conditioning, emitted in pairs:
            candidates = (NULL_WORD, *conditioning)
            for f in emitted:
                denom = 0.0
                for e in candidates:
                    denom += probs[e].get(f, 0.0)
                for e in candidates:
                    p = probs[e].get(f, 0.0)
                    if p == 0.0:
                        continue
                    share = p / denom
                    row = counts[e]
                    row[f] = row.get(f, 0.0) + share
                    totals[e] += share
        probs = {
            e: {f: count / totals[e] for f, count in row.items()}
            for e, row in counts.items()
            if totals[e] > 0.0
        }
    return TranslationTable(direction=direction, probs=probs)


def viterbi_align(
    table: TranslationTable, pair: tuple[Sentence, Sentence]
) -> DirectionalAlignment:
    """Most probable link per emitted position under the table.

    Ties on a positive probability go to the smallest conditioning position;
    NULL wins only by strict majority or when every candidate scores 0.
    """
    src, tgt = pair
    if table.direction == TGT_TO_SRC:
        conditioning, emitted = src, tgt
    else:
        conditioning, emitted = tgt, src
    null_row = table.probs.get(NULL_WORD, {})
    links: list[int | None] = []
    for f in emitted:
        best_i: int | None = None
        best_p = null_row.get(f, 0.0)
        for i, e in enumerate(conditioning):
            p = table.prob(e, f)
            # once best_i is a real position, equal scores keep the earlier one
            if p > best_p or (p == best_p and p > 0.0 and best_i is None):
                best_i = i
                best_p = p
        links.append(best_i)
    return DirectionalAlignment(
        links=tuple(links), conditioning_length=len(conditioning)
    )


def log_likelihood(table: TranslationTable, corpus: ParallelCorpus) -> float:
    """Corpus log-likelihood with a uniform link prior of 1/(l+1).

    Token probabilities are floored at PROB_FLOOR before the log, so corpora
    containing words the table has never seen stay finite.
    """
    total = 0.0
    for conditioning, emitted in _oriented(corpus, table.direction):
        candidates = (NULL_WORD, *conditioning)
        prior = 1.0 / len(candidates)
        for f in emitted:
            p = 0.0
            for e in candidates:
                p += table.prob(e, f)
            total += math.log(max(prior * p, PROB_FLOOR))
    return total


def align_corpus(
    table: TranslationTable, corpus: ParallelCorpus
) -> list[DirectionalAlignment]:
    return [viterbi_align(table, pair) for pair in corpus.pairs]


def write_table(table: TranslationTable, path: str | Path) -> None:
    """Write "conditioning emitted prob" lines sorted by the word pair.

    Probabilities use repr, so reading the file back is bit-exact.
    """
    lines = []
    for e in sorted(table.probs):
        row = table.probs[e]
        for f in sorted(row):
            lines.append(f"{e} {f} {row[f]!r}")
    Path(path).write_text(
        "".join(line + "\n" for line in lines), encoding="utf-8"
    )


def read_table(path: str | Path, direction: Direction) -> TranslationTable:
    _check_direction(direction)
    probs: dict[str, dict[str, float]] = {}
    for lineno, line in enumerate(_split_lines(_decode(path)), start=1):
        parts = line.split(" ")
        if len(parts) != 3:
            raise AlignmentError(
                f"{path}:{lineno}: expected 'conditioning emitted prob'"
            )
        probs.setdefault(parts[0], {})[parts[1]] = float(parts[2])
    return TranslationTable(direction=direction, probs=probs)


def write_alignments(
    alignments: Iterable[DirectionalAlignment], path: str | Path
) -> None:
    """One Pharaoh-style line per sentence: "i-j" pairs with the
    conditioning position first; NULL links are omitted."""
    lines = []
    for alignment in alignments:
        cells = [
            f"{i}-{j}"
            for j, i in enumerate(alignment.links)
            if i is not None
        ]
        lines.append(" ".join(cells))
    Path(path).write_text(
        "".join(line + "\n" for line in lines), encoding="utf-8"
    )


def read_alignment_maps(path: str | Path) -> list[dict[int, int]]:
    """Parse Pharaoh lines into per-sentence maps of emitted position to
    conditioning position."""
    maps: list[dict[int, int]] = []
    for lineno, line in enumerate(_split_lines(_decode(path)), start=1):
        links: dict[int, int] = {}
        for cell in line.split():
            left, sep, right = cell.partition("-")
            if not sep or not left.isdigit() or not right.isdigit():
                raise AlignmentError(f"{path}:{lineno}: bad link {cell!r}")
            links[int(right)] = int(left)
        maps.append(links)
    return maps


def alignment_from_map(
    links: dict[int, int], emitted_length: int, conditioning_length: int
) -> DirectionalAlignment:
    return DirectionalAlignment(
        links=tuple(links.get(j) for j in range(emitted_length)),
        conditioning_length=conditioning_length,
    )
