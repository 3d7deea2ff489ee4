"""Plan evaluation over every model of a domain and three-valued entailment.

Each branch carries a choice log mapping ``(action, situation)`` to the
successor picked for it. Re-applying an action to a situation already in the
log replays that successor, so a branch always describes a single transition
function. Enumerating all branches enumerates every model restricted to the
pairs the plan actually visits.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Optional

from .domain import (
    Act, Domain, If, Query, While, plan_actions, plan_fluents, validate_domain,
)
from .errors import DomainError, DomainInconsistent, InvalidAction, LoopBudgetExceeded
from .semantics import DEFAULT_MAX_FLUENTS, Semantics, ThreeValued

DEFAULT_LOOP_BUDGET = 10_000


class Verdict(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"
    FAILED = "failed"


class Mode(enum.Enum):
    DEFAULT = "default"
    STRICT_VACUOUS = "strict-vacuous"


@dataclass(frozen=True)
class Branch:
    sit: Optional[frozenset]          # None stands for the empty situation
    log: tuple = ()                   # sorted ((action, situation), successor) pairs
    trace: tuple = ()                 # (label, situation-or-None) steps
    diverged: bool = False
    iterations: tuple = ()            # iteration counts of completed top-level loops

    def key(self):
        return (self.sit, self.log, self.diverged)

    def lookup(self, a, sit):
        for (b, s), succ in self.log:
            if b == a and s == sit:
                return succ
        return None


@dataclass
class Outcome:
    result: Optional[frozenset]
    trace: list
    diverged: bool = False
    iterations: tuple = ()
    log: tuple = ()


@dataclass
class Answer:
    verdict: Verdict
    outcomes: list = field(default_factory=list)
    sem: Optional[Semantics] = field(default=None, repr=False)

    @property
    def failed(self) -> bool:
        return any(o.result is None for o in self.outcomes)


def _label(step) -> str:
    if isinstance(step, Act):
        return step.name
    if isinstance(step, If):
        return "if " + ", ".join(map(str, step.test))
    return "while " + ", ".join(map(str, step.test))


class Evaluator:
    """Evaluates plans for one domain; holds a shared :class:`Semantics`."""

    def __init__(self, domain: Domain, loop_budget: int = DEFAULT_LOOP_BUDGET,
                 max_fluents: int = DEFAULT_MAX_FLUENTS, sem: Optional[Semantics] = None):
        self.domain = domain
        self.sem = sem or Semantics(domain, max_fluents)
        self.loop_budget = loop_budget

    # -- single steps ----------------------------------------------------------

    def apply(self, a: str, br: Branch) -> list[Branch]:
        if a not in self.domain.actions:
            raise InvalidAction(f"unknown action {a!r}")
        succ = br.lookup(a, br.sit)
        if succ is not None:
            return [Branch(succ, br.log, br.trace + ((a, succ),), br.diverged, br.iterations)]
        out = []
        for s in sorted(self.sem.successors(a, br.sit), key=sorted):
            log = tuple(sorted(br.log + (((a, br.sit), s),), key=_log_key))
            out.append(Branch(s, log, br.trace + ((a, s),), br.diverged, br.iterations))
        return out

    def eval_step(self, step, br: Branch, top: bool = False) -> list[Branch]:
        if br.sit is None:
            return [br]
        if isinstance(step, Act):
            return self.apply(step.name, br)
        if isinstance(step, If):
            t = self.sem.truth(br.sit, step.test)
            if t is ThreeValued.TRUE:
                return self.eval_plan(step.then, [br])
            if t is ThreeValued.FALSE:
                if step.orelse is None:
                    return [br]
                return self.eval_plan(step.orelse, [br])
            return [Branch(None, br.log, br.trace + ((_label(step), None),), False, br.iterations)]
        if isinstance(step, While):
            return self.eval_while(step, br, top)
        raise TypeError(f"not a plan step: {step!r}")

    def eval_while(self, step: While, br: Branch, top: bool = False) -> list[Branch]:
        label = _label(step)
        done: list[Branch] = []
        # work items: (branch, loop-head situations seen with the test true, count)
        work = [(br, frozenset(), 0)]
        while work:
            cur, seen, k = work.pop()
            if cur.sit is None:
                done.append(self._finish(cur, k, top))
                continue
            t = self.sem.truth(cur.sit, step.test)
            if t is ThreeValued.FALSE:
                done.append(self._finish(cur, k, top))
                continue
            if t is ThreeValued.UNKNOWN:
                nb = Branch(None, cur.log, cur.trace + ((label, None),), False, cur.iterations)
                done.append(self._finish(nb, k, top))
                continue
            if cur.sit in seen:
                nb = Branch(None, cur.log, cur.trace + ((label, None),), True, cur.iterations)
                done.append(self._finish(nb, k, top))
                continue
            if k >= self.loop_budget:
                raise LoopBudgetExceeded(
                    f"loop '{label}' exceeded {self.loop_budget} iterations")
            for nb in self.eval_plan(step.body, [cur]):
                work.append((nb, seen | {cur.sit}, k + 1))
        return _dedup(done)

    @staticmethod
    def _finish(br: Branch, k: int, top: bool) -> Branch:
        if not top:
            return br
        return Branch(br.sit, br.log, br.trace, br.diverged, br.iterations + (k,))

    # -- plans -----------------------------------------------------------------

    def eval_plan(self, plan, branches: list[Branch], top: bool = False) -> list[Branch]:
        for step in plan:
            nxt = []
            for br in branches:
                nxt.extend(self.eval_step(step, br, top))
            branches = _dedup(nxt)
        return branches

    def start(self) -> Branch:
        sit = self.sem.initial_situation()
        if not sit:
            raise DomainInconsistent("the initial situation is empty")
        return Branch(sit, (), (("initially", sit),))

    def run(self, plan) -> list[Outcome]:
        return [Outcome(b.sit, list(b.trace), b.diverged, b.iterations, b.log)
                for b in self.eval_plan(plan, [self.start()], top=True)]

    def answer(self, goal, plan, mode: Mode = Mode.DEFAULT) -> Answer:
        outcomes = self.run(plan)
        return Answer(self.verdict(goal, outcomes, mode), outcomes, self.sem)

    def verdict(self, goal, outcomes, mode: Mode = Mode.DEFAULT) -> Verdict:
        mode = Mode(mode)
        live = [o.result for o in outcomes if o.result is not None]
        if mode is Mode.DEFAULT and len(live) < len(outcomes):
            return Verdict.FAILED
        values = {self.sem.truth(s, goal) for s in live}
        if values <= {ThreeValued.TRUE}:
            return Verdict.YES
        if values == {ThreeValued.FALSE}:
            return Verdict.NO
        return Verdict.UNKNOWN


def _log_key(item):
    (a, s), succ = item
    return (a, sorted(s), sorted(succ))


def _dedup(branches: list[Branch]) -> list[Branch]:
    seen = {}
    for b in branches:
        seen.setdefault(b.key(), b)
    return list(seen.values())


def prepare(d: Domain, q: Query) -> Domain:
    """Check ``d`` and widen its fluent universe with fluents only ``q`` mentions."""
    report = validate_domain(d)
    if not report.ok:
        raise DomainError("; ".join(report.errors))
    for a in plan_actions(q.plan):
        if a not in d.actions:
            raise InvalidAction(f"unknown action {a!r} in query")
    extra = [l.fluent for l in q.goal] + plan_fluents(q.plan)
    return d.with_fluents(extra)


def entails(d: Domain, q: Query, mode="default", loop_budget: int = DEFAULT_LOOP_BUDGET,
            max_fluents: int = DEFAULT_MAX_FLUENTS) -> Answer:
    d = prepare(d, q)
    ev = Evaluator(d, loop_budget, max_fluents)
    return ev.answer(q.goal, q.plan, Mode(mode))


def exhaustive_no_sequence(d: Domain, goal, max_len: int,
                           max_fluents: int = DEFAULT_MAX_FLUENTS):
    """Return ``(True, None)`` if no action sequence up to ``max_len`` entails
    ``goal``, else ``(False, witness)`` for the shortest witness found first."""
    d = prepare(d, Query(tuple(goal), ()))
    ev = Evaluator(d, max_fluents=max_fluents)
    for n in range(max_len + 1):
        for seq in itertools.product(d.actions, repeat=n):
            plan = tuple(Act(a) for a in seq)
            if ev.answer(goal, plan).verdict is Verdict.YES:
                return False, list(seq)
    return True, None
