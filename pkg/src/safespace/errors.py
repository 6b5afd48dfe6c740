"""Domain errors shared across safespace modules.

Every error carries a stable machine ``code`` so the HTTP layer and the CLI
can map failures without string matching.
"""

from __future__ import annotations


class SafeSpaceError(Exception):
    """Base class for all domain errors."""

    code = "Internal"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__doc__ or self.code)


# --- toxicity ---------------------------------------------------------------

class EmptyInput(SafeSpaceError):
    """Input text is blank after trimming whitespace."""

    code = "EmptyInput"


class TextTooLong(SafeSpaceError):
    """Input text exceeds the configured maximum size."""

    code = "TextTooLong"


class ScorerUnavailable(SafeSpaceError):
    """Remote scorer timed out or could not be reached."""

    code = "ScorerUnavailable"


class ProtocolError(SafeSpaceError):
    """Remote scorer response was malformed or out of range."""

    code = "ProtocolError"


class ExtractionFailed(SafeSpaceError):
    """Text extraction from an image produced no usable text."""

    code = "ExtractionFailed"


class LexiconError(SafeSpaceError):
    """Base class for lexicon file problems."""

    code = "LexiconError"


class ParseError(LexiconError):
    """A definition file could not be parsed."""

    code = "ParseError"


class DuplicatePhrase(LexiconError):
    """The same phrase appears twice in a lexicon file."""

    code = "DuplicatePhrase"


class WeightOutOfRange(LexiconError):
    """A lexicon weight falls outside (0, 1]."""

    code = "WeightOutOfRange"


# --- safety ping ------------------------------------------------------------

class IntervalTooShort(SafeSpaceError):
    """Check-in interval is below the 60 second floor."""

    code = "IntervalTooShort"


class NoEmergencyContacts(SafeSpaceError):
    """The user has no emergency contacts configured."""

    code = "NoEmergencyContacts"


class InvalidState(SafeSpaceError):
    """The schedule's lifecycle state does not permit this transition."""

    code = "InvalidState"


class InvalidLocation(SafeSpaceError):
    """Latitude or longitude out of range."""

    code = "InvalidLocation"


# --- questionnaire ----------------------------------------------------------

class ValidationError(SafeSpaceError):
    """A definition file failed validation."""

    code = "ValidationError"


class IncompleteResponses(SafeSpaceError):
    """A response set is missing answers for one or more questions."""

    code = "IncompleteResponses"


class VersionMismatch(SafeSpaceError):
    """Response set was recorded against a different questionnaire version."""

    code = "VersionMismatch"


# --- persistence ------------------------------------------------------------

class NotFound(SafeSpaceError):
    """No record under the requested collection and key."""

    code = "NotFound"


class VersionConflict(SafeSpaceError):
    """Conditional write lost the race: stored version moved on."""

    code = "VersionConflict"


class StorageUnavailable(SafeSpaceError):
    """The backing store could not complete the operation."""

    code = "StorageUnavailable"


# --- contacts ---------------------------------------------------------------

class InvalidContact(SafeSpaceError):
    """An emergency contact failed validation."""

    code = "InvalidContact"


# --- service ----------------------------------------------------------------

class Unauthenticated(SafeSpaceError):
    """Missing or invalid bearer token."""

    code = "Unauthenticated"
