"""Exception types shared by every module in the package."""


class ModalkitError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ModalkitError):
    """Malformed concrete syntax; carries the offending character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class InvalidInputError(ModalkitError):
    """A value violates a documented precondition (bad index, empty list, bad JSON)."""


class MalformedMapError(ModalkitError):
    """A candidate world map or dual atom map has the wrong shape."""


class SearchSpaceExceededError(ModalkitError):
    """A brute-force search or construction would exceed the configured cap."""


class UnsupportedUltrafilterError(ModalkitError):
    """Nonprincipal ultrafilters do not exist on finite index sets."""


class UnsoundPresentationError(ModalkitError):
    """An axiom of a variety presentation fails in one of its generator frames."""
