"""Exception types shared across the package."""


class KautzError(Exception):
    """Base class for all errors raised by this package."""


class EmptyWord(KautzError):
    pass


class AdjacentRepeat(KautzError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"adjacent letters equal at index {index}")


class SymbolOutOfRange(KautzError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"letter at index {index} is outside the alphabet")


class WordTooShort(KautzError):
    pass


class InvalidAlpha(KautzError):
    pass


class PositionOutOfRange(KautzError):
    pass


class NotCircularlyValid(KautzError):
    pass


class LengthMismatch(KautzError):
    pass


class TooLarge(KautzError):
    pass


class EdgeNotInGraph(KautzError):
    pass


class BudgetExceeded(KautzError):
    def __init__(self, required: int, cap: int):
        self.required = required
        self.cap = cap
        super().__init__(
            f"work estimate {required} exceeds the desk budget of {cap} units; "
            "rerun with the long-run tier"
        )


class PreconditionViolated(KautzError):
    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


class WrongOutdegree(KautzError):
    pass


class TableInvariantError(KautzError):
    """An exact-count table failed one of its construction-time checks."""
