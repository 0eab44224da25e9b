"""Exception types.  Every error carries a stable ``code`` used by the CLI."""


class LexChainError(Exception):
    code = "ERROR"


class InvariantError(LexChainError):
    code = "INVARIANT_ERROR"


class NotAMember(LexChainError):
    code = "NOT_A_MEMBER"


class NotFinite(LexChainError):
    code = "NOT_FINITE"


class DuplicateKey(LexChainError):
    code = "DUPLICATE_KEY"


class OverlapError(LexChainError):
    code = "OVERLAP"


class BadOne(LexChainError):
    code = "BAD_ONE"


class NoLastElement(LexChainError):
    code = "NO_LAST_ELEMENT"


class WrongSegment(LexChainError):
    code = "WRONG_SEGMENT"


class HypothesisFailed(LexChainError):
    code = "HYPOTHESIS_FAILED"

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class NotSolvable(HypothesisFailed):
    code = "NOT_SOLVABLE"


class NoTailWitness(LexChainError):
    code = "NO_TAIL_WITNESS"


class BudgetZero(LexChainError):
    code = "BUDGET_ZERO"


class CheckFailed(LexChainError):
    """A sampled verification found an offending pair (or element)."""

    code = "CHECK_FAILED"

    def __init__(self, message: str, *offending):
        super().__init__(message)
        self.offending = offending


class ExprSyntaxError(LexChainError):
    code = "SYNTAX_ERROR"

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos
