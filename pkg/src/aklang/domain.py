"""Abstract syntax of A_k domain descriptions, plans and queries.

Fluents and actions are plain interned strings. Everything here is immutable
once built, so a single :class:`Domain` can be shared by any number of
evaluators.
"""

from __future__ import annotations

import enum
import sys
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .errors import InvalidAction, SourceSpan


@dataclass(frozen=True, order=True)
class Literal:
    fluent: str
    positive: bool = True

    def __post_init__(self):
        object.__setattr__(self, "fluent", sys.intern(self.fluent))

    def __neg__(self) -> "Literal":
        return Literal(self.fluent, not self.positive)

    def __str__(self) -> str:
        return self.fluent if self.positive else "-" + self.fluent

    @classmethod
    def parse(cls, text: str) -> "Literal":
        text = text.strip()
        if text.startswith("-"):
            return cls(text[1:].strip(), False)
        return cls(text)


def lit(text: str) -> Literal:
    return Literal.parse(text)


class ActionKind(enum.Enum):
    SENSING = "sensing"
    NONSENSING = "nonsensing"


# -- propositions -----------------------------------------------------------

@dataclass(frozen=True)
class EffectProp:
    action: str
    effect: Literal
    preconds: tuple[Literal, ...] = ()
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return f"{self.action} causes {self.effect}{_if(self.preconds)}."


@dataclass(frozen=True)
class ValueProp:
    literal: Literal
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return f"initially {self.literal}."


@dataclass(frozen=True)
class KnowledgeLaw:
    action: str
    sensed: str
    preconds: tuple[Literal, ...] = ()
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return f"{self.action} causes to know {self.sensed}{_if(self.preconds)}."


@dataclass(frozen=True)
class NonDetProp:
    action: str
    fluent: str
    preconds: tuple[Literal, ...] = ()
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return f"{self.action} may affect {self.fluent}{_if(self.preconds)}."


Proposition = Union[EffectProp, ValueProp, KnowledgeLaw, NonDetProp]


def _if(preconds) -> str:
    if not preconds:
        return ""
    return " if " + ", ".join(map(str, preconds))


def proposition_fluents(p: Proposition) -> list[str]:
    if isinstance(p, ValueProp):
        return [p.literal.fluent]
    if isinstance(p, EffectProp):
        head = [p.effect.fluent]
    elif isinstance(p, KnowledgeLaw):
        head = [p.sensed]
    else:
        head = [p.fluent]
    return head + [q.fluent for q in p.preconds]


@dataclass(frozen=True)
class Domain:
    """A validated-or-not collection of propositions over its symbols.

    ``fluents`` and ``actions`` keep first-occurrence order, which fixes the
    bit layout of states and the order of rendered output.
    """

    fluents: tuple[str, ...]
    actions: tuple[str, ...]
    sensing: frozenset[str]
    propositions: tuple[Proposition, ...]
    declared: bool = False
    duplicates: tuple[Proposition, ...] = field(default=(), compare=False, repr=False)
    declared_fluents: tuple[str, ...] = field(default=(), compare=False, repr=False)
    declared_actions: tuple[str, ...] = field(default=(), compare=False, repr=False)
    declared_sensing: tuple[str, ...] = field(default=(), compare=False, repr=False)

    @classmethod
    def build(
        cls,
        propositions: Iterable[Proposition],
        fluents: Iterable[str] = (),
        actions: Iterable[str] = (),
        sensing: Iterable[str] = (),
        declared: bool = False,
    ) -> "Domain":
        props: list[Proposition] = []
        dups: list[Proposition] = []
        seen = set()
        for p in propositions:
            if p in seen:
                dups.append(p)
                continue
            seen.add(p)
            props.append(p)

        fluents, actions, sensing = tuple(fluents), tuple(actions), tuple(sensing)
        fl = dict.fromkeys(fluents)
        ac = dict.fromkeys(actions + sensing)
        sens = set(sensing)
        for p in props:
            for f in proposition_fluents(p):
                fl.setdefault(f)
            if isinstance(p, KnowledgeLaw):
                sens.add(p.action)
                ac.setdefault(p.action)
            elif not isinstance(p, ValueProp):
                ac.setdefault(p.action)
        return cls(
            fluents=tuple(fl),
            actions=tuple(ac),
            sensing=frozenset(sens),
            propositions=tuple(props),
            declared=declared,
            duplicates=tuple(dups),
            declared_fluents=fluents,
            declared_actions=actions,
            declared_sensing=sensing,
        )

    def kind(self, action: str) -> ActionKind:
        if action not in self.actions:
            raise InvalidAction(f"unknown action {action!r}")
        return ActionKind.SENSING if action in self.sensing else ActionKind.NONSENSING

    def is_sensing(self, action: str) -> bool:
        return self.kind(action) is ActionKind.SENSING

    def of_type(self, t) -> list:
        return [p for p in self.propositions if isinstance(p, t)]

    def with_fluents(self, extra: Iterable[str]) -> "Domain":
        new = tuple(f for f in dict.fromkeys(extra) if f not in self.fluents)
        if not new:
            return self
        return Domain(
            self.fluents + new, self.actions, self.sensing, self.propositions,
            self.declared, self.duplicates, self.declared_fluents,
            self.declared_actions, self.declared_sensing,
        )

    def with_actions(self, extra: Iterable[str]) -> "Domain":
        """Add actions that occur in no proposition (pure no-ops)."""
        new = tuple(a for a in dict.fromkeys(extra) if a not in self.actions)
        if not new:
            return self
        return Domain(
            self.fluents, self.actions + new, self.sensing, self.propositions,
            self.declared, self.duplicates, self.declared_fluents,
            self.declared_actions, self.declared_sensing,
        )


# -- plans and queries -------------------------------------------------------

TestCondition = tuple  # non-empty tuple[Literal, ...], read as a conjunction


@dataclass(frozen=True)
class Act:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class If:
    test: tuple[Literal, ...]
    then: tuple
    orelse: Optional[tuple] = None


@dataclass(frozen=True)
class While:
    test: tuple[Literal, ...]
    body: tuple


Step = Union[Act, If, While]
# A plan is a tuple of steps; ``plan[0]`` / ``plan[1:]`` play the roles of
# the head and tail in the list notation [x | rest].
Plan = tuple


@dataclass(frozen=True)
class Query:
    goal: tuple[Literal, ...]
    plan: Plan


def plan_actions(plan: Plan) -> list[str]:
    out: dict[str, None] = {}
    for step in plan:
        if isinstance(step, Act):
            out.setdefault(step.name)
        elif isinstance(step, If):
            out.update(dict.fromkeys(plan_actions(step.then)))
            if step.orelse is not None:
                out.update(dict.fromkeys(plan_actions(step.orelse)))
        else:
            out.update(dict.fromkeys(plan_actions(step.body)))
    return list(out)


def plan_fluents(plan: Plan) -> list[str]:
    out: dict[str, None] = {}
    for step in plan:
        if isinstance(step, If):
            out.update(dict.fromkeys(l.fluent for l in step.test))
            out.update(dict.fromkeys(plan_fluents(step.then)))
            if step.orelse is not None:
                out.update(dict.fromkeys(plan_fluents(step.orelse)))
        elif isinstance(step, While):
            out.update(dict.fromkeys(l.fluent for l in step.test))
            out.update(dict.fromkeys(plan_fluents(step.body)))
    return list(out)


def has_loops(plan: Plan) -> bool:
    for step in plan:
        if isinstance(step, While):
            return True
        if isinstance(step, If):
            if has_loops(step.then) or (step.orelse is not None and has_loops(step.orelse)):
                return True
    return False


def contradictory(lits: Iterable[Literal]) -> bool:
    lits = set(lits)
    return any(-l in lits for l in lits)


# -- static analysis ---------------------------------------------------------

@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    simple: bool = True

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_domain(d: Domain) -> ValidationReport:
    report = ValidationReport()
    for p in d.propositions:
        where = f" at {p.span}" if p.span else ""
        if isinstance(p, (EffectProp, NonDetProp)) and p.action in d.sensing:
            kind = "effect" if isinstance(p, EffectProp) else "non-deterministic"
            report.errors.append(
                f"sensing action in {kind} proposition: {p.action!r}{where}")
        if not isinstance(p, ValueProp) and contradictory(p.preconds):
            report.errors.append(f"contradictory preconditions in '{p}'{where}")

    if d.declared:
        fl = set(d.declared_fluents)
        ac = set(d.declared_actions) | set(d.declared_sensing)
        for p in d.propositions:
            for f in proposition_fluents(p):
                if fl and f not in fl:
                    report.errors.append(f"undeclared fluent {f!r} in '{p}'")
            if ac and not isinstance(p, ValueProp) and p.action not in ac:
                report.errors.append(f"undeclared action {p.action!r} in '{p}'")
        for a in d.declared_sensing:
            if a in d.declared_actions:
                report.errors.append(f"action {a!r} declared both sensing and non-sensing")
        for p in d.of_type(KnowledgeLaw):
            if p.action in d.declared_actions and p.action not in d.declared_sensing:
                report.errors.append(
                    f"knowledge law for action {p.action!r} declared non-sensing")
    overlap = set(d.fluents) & set(d.actions)
    for s in sorted(overlap):
        report.errors.append(f"symbol {s!r} used both as fluent and action")

    for p in d.duplicates:
        report.warnings.append(f"duplicate proposition ignored: '{p}'")

    counts: dict[tuple[str, str], int] = {}
    for p in d.of_type(KnowledgeLaw):
        counts[p.action, p.sensed] = counts.get((p.action, p.sensed), 0) + 1
    for (a, f), n in counts.items():
        if n > 1:
            report.simple = False
            report.warnings.append(
                f"domain is not simple: {n} knowledge laws for ({a}, {f})")
    return report


def _require_sensing(d: Domain, a: str) -> None:
    if d.kind(a) is not ActionKind.SENSING:
        raise InvalidAction(f"{a!r} is not a sensing action")


def knowledge_precondition(d: Domain, a: str, f: str) -> list[tuple[Literal, ...]]:
    """Disjuncts of the conditions under which ``a`` reveals ``f``, in source order."""
    _require_sensing(d, a)
    return [p.preconds for p in d.of_type(KnowledgeLaw)
            if p.action == a and p.sensed == f]


def potential_sensing_effects(d: Domain, a: str) -> list[str]:
    _require_sensing(d, a)
    return list(dict.fromkeys(p.sensed for p in d.of_type(KnowledgeLaw) if p.action == a))
