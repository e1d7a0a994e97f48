"""Exception hierarchy shared by the library and the CLI."""


class HMatchError(Exception):
    """Base class for every error raised by hmatch."""


class ValidationError(HMatchError, ValueError):
    """Raw instance or matching data is malformed."""


class DuplicateInPreference(ValidationError):
    pass


class PriorityNotPermutation(ValidationError):
    pass


class IdOutOfRange(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class InvalidRange(ValidationError):
    pass


class InvalidConfig(ValidationError):
    pass


class ParseError(ValidationError):
    pass


class Inconsistent(ValidationError):
    """A matching references ids unknown to its instance."""


class BoxTooLarge(HMatchError):
    pass


class InstanceTooLarge(HMatchError):
    pass


class SelfCheckFailed(HMatchError):
    """An algorithm output failed its own verification (internal bug)."""
