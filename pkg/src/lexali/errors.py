"""Exception hierarchy shared across the toolkit.

Every error raised on purpose derives from LexaliError so the command line
front end can turn any of them into a clean nonzero exit.
"""


class LexaliError(Exception):
    """Base class for all toolkit errors."""


class CorpusFormatError(LexaliError):
    """Malformed corpus file: bad encoding, empty line, reserved token,
    or mismatched line counts."""


class SegmentationError(LexaliError):
    """Invalid subword input or a marker sequence that cannot be rejoined."""


class AlignmentError(LexaliError):
    """Structurally inconsistent alignment data (lengths, link ranges)."""


class PermutationError(LexaliError):
    """Invalid segment order, control token, or missing segment."""


class MarkerError(LexaliError):
    """Ambiguous marker structure in decoded output."""


class ScoringError(LexaliError):
    """Invalid scoring input: empty candidate pool or mismatched corpora."""


class ConfigError(LexaliError):
    """Unusable configuration file or option value."""


class PipelineError(LexaliError):
    """A pipeline stage failed; the message names the stage."""
