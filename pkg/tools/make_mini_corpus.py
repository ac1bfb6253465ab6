#!/usr/bin/env python3
"""Regenerate the bundled mini corpus (exactly 1000 sentence pairs).

The corpus is synthetic pseudo-German/English built from a fixed word list
and a handful of sentence patterns, some with verb-movement style
reordering so that the reordered intermediate sequence differs from the
word-for-word one. Fully deterministic: same seed, same bytes.

Usage: python tools/make_mini_corpus.py [outdir]
Defaults to src/lexali/data next to this repository checkout.
"""

from __future__ import annotations

import random
import sys
from pathlib import Path

SEED = 11
PAIR_COUNT = 1000

DETERMINERS = [("der", "the"), ("die", "the"), ("das", "the")]

NOUNS = [
    ("haus", "house"), ("buch", "book"), ("hund", "dog"), ("katze", "cat"),
    ("mann", "man"), ("frau", "woman"), ("kind", "child"), ("apfel", "apple"),
    ("baum", "tree"), ("stadt", "city"), ("auto", "car"), ("brot", "bread"),
    ("wasser", "water"), ("freund", "friend"), ("garten", "garden"),
    ("tisch", "table"), ("stuhl", "chair"), ("fenster", "window"),
    ("markt", "market"), ("brief", "letter"), ("lehrer", "teacher"),
    ("schule", "school"), ("berg", "mountain"), ("fluss", "river"),
    ("vogel", "bird"), ("fisch", "fish"), ("blume", "flower"),
    ("strasse", "street"), ("nacht", "night"), ("morgen", "morning"),
]

VERBS = [
    ("sieht", "sees"), ("hat", "has"), ("liebt", "loves"), ("isst", "eats"),
    ("kauft", "buys"), ("findet", "finds"), ("sucht", "seeks"),
    ("baut", "builds"), ("malt", "paints"), ("liest", "reads"),
    ("kennt", "knows"), ("zeigt", "shows"),
]

ADJECTIVES = [
    ("alt", "old"), ("neu", "new"), ("gross", "big"), ("klein", "small"),
    ("rot", "red"), ("gruen", "green"), ("schoen", "beautiful"),
    ("dunkel", "dark"),
]

ADVERBS = [
    ("heute", "today"), ("hier", "here"), ("oft", "often"),
    ("gern", "gladly"), ("morgen", "tomorrow"),
]

AND = ("und", "and")


def make_pair(rng: random.Random) -> tuple[list[str], list[str]]:
    d1 = rng.choice(DETERMINERS)
    d2 = rng.choice(DETERMINERS)
    n1 = rng.choice(NOUNS)
    n2 = rng.choice(NOUNS)
    n3 = rng.choice(NOUNS)
    v = rng.choice(VERBS)
    a = rng.choice(ADJECTIVES)
    adv = rng.choice(ADVERBS)
    pattern = rng.randrange(6)
    if pattern == 0:
        # monotone intransitive-ish clause
        src = [d1[0], n1[0], v[0], adv[0]]
        tgt = [d1[1], n1[1], v[1], adv[1]]
    elif pattern == 1:
        # source verb-final, target verb-second
        src = [d1[0], n1[0], d2[0], n2[0], v[0]]
        tgt = [d1[1], n1[1], v[1], d2[1], n2[1]]
    elif pattern == 2:
        src = [d1[0], a[0], n1[0], v[0], d2[0], n2[0]]
        tgt = [d1[1], a[1], n1[1], v[1], d2[1], n2[1]]
    elif pattern == 3:
        # fronted adverb, source verb before subject
        src = [adv[0], v[0], d1[0], n1[0], d2[0], n2[0]]
        tgt = [adv[1], d1[1], n1[1], v[1], d2[1], n2[1]]
    elif pattern == 4:
        src = [d1[0], n1[0], AND[0], d2[0], n2[0], v[0], d2[0], n3[0]]
        tgt = [d1[1], n1[1], AND[1], d2[1], n2[1], v[1], d2[1], n3[1]]
    else:
        # verb-final with adjective on the object
        src = [d1[0], n1[0], d2[0], a[0], n2[0], v[0], adv[0]]
        tgt = [d1[1], n1[1], v[1], d2[1], a[1], n2[1], adv[1]]
    return src, tgt


def main() -> None:
    outdir = (
        Path(sys.argv[1])
        if len(sys.argv) > 1
        else Path(__file__).resolve().parent.parent / "src" / "lexali" / "data"
    )
    rng = random.Random(SEED)
    src_lines = []
    tgt_lines = []
    for _ in range(PAIR_COUNT):
        src, tgt = make_pair(rng)
        src_lines.append(" ".join(src))
        tgt_lines.append(" ".join(tgt))
    (outdir / "mini.src").write_text(
        "".join(line + "\n" for line in src_lines), encoding="utf-8"
    )
    (outdir / "mini.tgt").write_text(
        "".join(line + "\n" for line in tgt_lines), encoding="utf-8"
    )
    print(f"wrote {PAIR_COUNT} pairs to {outdir}")


if __name__ == "__main__":
    main()
