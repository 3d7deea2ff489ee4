"""Exception hierarchy shared by every layer of the engine."""

from __future__ import annotations

from dataclasses import dataclass, field


class AkError(Exception):
    """Base class for all errors raised by aklang."""


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"


@dataclass
class ParseError(AkError):
    span: SourceSpan
    message: str
    expected: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.message:
            self.message = "syntax error"
        super().__init__(str(self))

    def __str__(self) -> str:
        msg = f"{self.span}: {self.message}"
        if self.expected:
            msg += f" (expected {', '.join(self.expected)})"
        return msg


class RejectUnsupported(ParseError):
    """Input is well-formed but uses a construct outside the supported fragment."""


class DomainError(AkError):
    pass


class InvalidAction(DomainError):
    pass


class DomainInconsistent(DomainError):
    """The initial situation of the domain is empty."""


class FluentCapExceeded(DomainError):
    pass


class ContradictoryEffects(DomainError):
    def __init__(self, action: str, fluent: str, state=None):
        self.action = action
        self.fluent = fluent
        self.state = state
        super().__init__(f"action {action!r} both causes {fluent!r} and its negation")


class EmptySituation(AkError):
    pass


class NoConsistentSensing(AkError):
    pass


class LoopBudgetExceeded(AkError):
    """Loop iteration cap hit; the answer is inconclusive, not a divergence."""


class ElpError(AkError):
    pass


class ModalLiteralPresent(ElpError):
    pass


class NoWorldView(ElpError):
    pass


class SearchBudgetExceeded(ElpError):
    pass


class NotGround(ElpError):
    pass


class EncodingCollision(AkError):
    pass


class DepthRequired(AkError):
    pass
