"""Alignment-based corpus toolkit.

Builds word-for-word (lex) and alignment-reordered (ali) companions for a
parallel corpus, learns and applies byte-pair encodings, emits permutation
multi-task training data with control tokens, selects consensus
translations by minimum Bayes risk, and scores output with corpus BLEU.
"""

__version__ = "0.1.0"
