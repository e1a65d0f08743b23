"""Exception types shared across the package."""


class WalkslabError(Exception):
    """Base class for all errors raised by walkslab."""


class OrdinalParseError(WalkslabError):
    """Raised on malformed ordinal expressions; carries the input position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class ValidationError(WalkslabError):
    """A declared object (table entry, scenario, set presentation) is malformed."""


class ProviderError(WalkslabError):
    """A club query was out of domain or the club data is inconsistent."""


class PairingError(WalkslabError):
    """A pairing-table lookup was missing or the table is not injective."""


class InfiniteWindowError(WalkslabError):
    """The divisibility window of a coloring evaluation is not finite."""


class BudgetError(WalkslabError):
    """A bounded search would exceed the declared budget."""
