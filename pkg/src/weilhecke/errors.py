"""Exception types mapped to distinct CLI exit codes."""


class WeilheckeError(Exception):
    """Base class for all package errors."""


class ParseError(WeilheckeError):
    """Malformed input file or value."""


class DomainError(WeilheckeError):
    """Operation called outside its mathematical domain."""


class PrecisionError(WeilheckeError):
    """Input expansion is too short for the requested output precision."""


class VerificationError(WeilheckeError):
    """An internal consistency check failed; indicates a broken invariant."""
