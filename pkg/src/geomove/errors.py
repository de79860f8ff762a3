"""Shared exception types.

Every error raised by the library derives from :class:`GeomoveError` so
callers (CLI, HTTP service) can map failures to exit codes / status codes
in one place.
"""


class GeomoveError(Exception):
    """Base class for all library errors."""


class SpanOutOfRangeError(GeomoveError):
    """A character span is empty, negative, or falls outside its document."""


class UnknownEntityTypeError(GeomoveError):
    """Entity type is not present in the configured catalog."""


class DuplicateStatementError(GeomoveError):
    """A live statement with the same (doc, span, label) key already exists."""


class DuplicateVoteError(GeomoveError):
    """The worker already voted on this statement."""


class UnknownStatementError(GeomoveError):
    """No statement with the given id."""


class UnknownDocumentError(GeomoveError):
    """No document with the given id."""


class CorruptJournalError(GeomoveError):
    """Journal replay hit an unreadable record.

    ``last_valid_seq`` is the sequence number of the last record that
    replayed cleanly (0 when the journal was corrupt from the start).
    """

    def __init__(self, message: str, last_valid_seq: int):
        super().__init__(f"{message} (last valid seq {last_valid_seq})")
        self.last_valid_seq = last_valid_seq


class SourceUnreachableError(GeomoveError):
    """Document source path/URI could not be read."""


class UnsupportedMediaError(GeomoveError):
    """Media kind is not one of the supported ones."""


class MalformedEncodingError(GeomoveError):
    """Input bytes are not valid UTF-8; carries the failing byte offset."""

    def __init__(self, message: str, byte_offset: int):
        super().__init__(f"{message} (byte offset {byte_offset})")
        self.byte_offset = byte_offset


class EmptyExtractionError(GeomoveError):
    """HTML content extraction produced no visible text."""


class EmptyVocabularyError(GeomoveError):
    """No feature survived the document-frequency threshold."""


class DimensionMismatchError(GeomoveError):
    """A vector file row does not match its declared dimension."""


class ClassTooSmallError(GeomoveError):
    """A class has too few rows for the requested split."""


class NonFiniteLossError(GeomoveError):
    """Training loss became NaN/inf (bad hyperparameters)."""


class TooFewModelsError(GeomoveError):
    """Fewer successful sweep combos than the requested committee size."""


class EmptyCommitteeError(GeomoveError):
    """An ensemble rule was applied to zero members."""


class FeatureSpecMismatchError(GeomoveError):
    """Committee member and pool were featurized under different specs."""


class EmptyPoolError(GeomoveError):
    """run_iteration called with nothing left to predict on."""


class IterationInProgressError(GeomoveError):
    """Only one iteration may run at a time."""


class AlreadyReviewedError(GeomoveError):
    """The candidate was already reviewed in this iteration."""


class InsufficientNegativesError(GeomoveError):
    """Not enough confidently-negative statements to balance the silver set.

    ``shortfall`` is how many negatives were missing.
    """

    def __init__(self, message: str, shortfall: int):
        super().__init__(f"{message} (short by {shortfall})")
        self.shortfall = shortfall
