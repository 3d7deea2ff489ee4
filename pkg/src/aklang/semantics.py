"""Explicit-set semantics of A_k.

A state is an ``int`` bitmask over the domain's fluents (bit ``i`` set means
``domain.fluents[i]`` is true). A situation is a ``frozenset`` of states, so
set equality doubles as canonical structural equality.
"""

from __future__ import annotations

import enum
import itertools
from functools import lru_cache
from typing import Iterable, Sequence

from .domain import (
    Domain, EffectProp, KnowledgeLaw, Literal, NonDetProp, ValueProp,
    knowledge_precondition, potential_sensing_effects,
)
from .errors import (
    ContradictoryEffects, EmptySituation, FluentCapExceeded, InvalidAction,
    NoConsistentSensing,
)

DEFAULT_MAX_FLUENTS = 24

Situation = frozenset


class ThreeValued(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"


def _subsets(mask: int):
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class Semantics:
    """Transition machinery for one domain over a fixed fluent layout."""

    def __init__(self, domain: Domain, max_fluents: int = DEFAULT_MAX_FLUENTS):
        if len(domain.fluents) > max_fluents:
            raise FluentCapExceeded(
                f"domain has {len(domain.fluents)} fluents, cap is {max_fluents}")
        self.domain = domain
        self.n = len(domain.fluents)
        self.index = {f: i for i, f in enumerate(domain.fluents)}
        self._effects: dict[str, list] = {a: [] for a in domain.actions}
        self._nondet: dict[str, list] = {a: [] for a in domain.actions}
        for p in domain.propositions:
            if isinstance(p, EffectProp):
                pos, neg = self.cond_masks(p.preconds)
                self._effects[p.action].append(
                    (pos, neg, 1 << self.index[p.effect.fluent], p.effect.positive))
            elif isinstance(p, NonDetProp):
                pos, neg = self.cond_masks(p.preconds)
                self._nondet[p.action].append((pos, neg, 1 << self.index[p.fluent]))
        self._sensing = {}
        for a in domain.sensing:
            effs = []
            for f in potential_sensing_effects(domain, a):
                disj = [self.cond_masks(c) for c in knowledge_precondition(domain, a, f)]
                effs.append((1 << self.index[f], disj))
            self._sensing[a] = effs
        self.zero_model_outcomes = lru_cache(maxsize=None)(self._zero_model_outcomes)

    # -- encoding helpers ----------------------------------------------------

    def cond_masks(self, lits: Iterable[Literal]) -> tuple[int, int]:
        pos = neg = 0
        for l in lits:
            bit = 1 << self.index[l.fluent]
            if l.positive:
                pos |= bit
            else:
                neg |= bit
        return pos, neg

    def state(self, true_fluents: Iterable[str]) -> int:
        m = 0
        for f in true_fluents:
            m |= 1 << self.index[f]
        return m

    def situation(self, states: Iterable[Iterable[str]]) -> Situation:
        return frozenset(self.state(s) for s in states)

    def state_fluents(self, s: int) -> list[str]:
        return [f for i, f in enumerate(self.domain.fluents) if s >> i & 1]

    def render_state(self, s: int) -> str:
        return "{" + ", ".join(sorted(self.state_fluents(s))) + "}"

    def render_situation(self, sit: Situation) -> str:
        return "{" + ", ".join(sorted(self.render_state(s) for s in sit)) + "}"

    def situation_key(self, sit: Situation) -> list[list[str]]:
        """Sorted nested lists, the canonical JSON form of a situation."""
        return sorted(sorted(self.state_fluents(s)) for s in sit)

    # -- truth -----------------------------------------------------------------

    @staticmethod
    def holds(s: int, cond: tuple[int, int]) -> bool:
        pos, neg = cond
        return s & pos == pos and not s & neg

    def truth(self, sit: Situation, test: Sequence[Literal]) -> ThreeValued:
        if not sit:
            raise EmptySituation("truth value requested in the empty situation")
        cond = self.cond_masks(test)
        sat = [self.holds(s, cond) for s in sit]
        if all(sat):
            return ThreeValued.TRUE
        if not any(sat):
            return ThreeValued.FALSE
        return ThreeValued.UNKNOWN

    def initial_situation(self) -> Situation:
        pos, neg = self.cond_masks(p.literal for p in self.domain.of_type(ValueProp))
        if pos & neg:
            return frozenset()
        free = ((1 << self.n) - 1) & ~(pos | neg)
        return frozenset(pos | sub for sub in _subsets(free))

    # -- non-sensing actions -------------------------------------------------

    def _zero_model_outcomes(self, a: str, s: int) -> frozenset:
        plus = minus = 0
        for pos, neg, bit, positive in self._effects[a]:
            if s & pos == pos and not s & neg:
                if positive:
                    plus |= bit
                else:
                    minus |= bit
        clash = plus & minus
        if clash:
            f = self.domain.fluents[clash.bit_length() - 1]
            raise ContradictoryEffects(a, f, s)
        free = 0
        for pos, neg, bit in self._nondet[a]:
            if s & pos == pos and not s & neg:
                free |= bit
        free &= ~(plus | minus)
        base = (s | plus) & ~minus & ~free
        return frozenset(base | sub for sub in _subsets(free))

    def nonsensing_successors(self, a: str, sit: Situation) -> set[Situation]:
        if a in self.domain.sensing:
            raise InvalidAction(f"{a!r} is a sensing action")
        if a not in self._effects:
            raise InvalidAction(f"unknown action {a!r}")
        if not sit:
            raise EmptySituation("action applied to the empty situation")
        options = [self.zero_model_outcomes(a, s) for s in sorted(sit)]
        if all(len(o) == 1 for o in options):
            return {frozenset(next(iter(o)) for o in options)}
        out = set()
        for choice in itertools.product(*(sorted(o) for o in options)):
            out.add(frozenset(choice))
        return out

    # -- sensing actions -------------------------------------------------------

    def compatible(self, sit: Situation, bit: int, disj) -> list[Situation]:
        """Situations f,phi-compatible with ``sit``; ``disj`` holds mask pairs."""
        known = [bool(s & bit) for s in sit]
        if all(known) or not any(known):
            return [sit]
        off, neg_f, pos_f = set(), set(), set()
        for s in sit:
            if any(self.holds(s, c) for c in disj):
                (pos_f if s & bit else neg_f).add(s)
            else:
                off.add(s)
        return [frozenset(c) for c in (off, neg_f, pos_f) if c]

    def compatible_situations(self, sit: Situation, f: str,
                              phi: Sequence[Sequence[Literal]]) -> list[Situation]:
        return self.compatible(sit, 1 << self.index[f], [self.cond_masks(c) for c in phi])

    def sensing_successors(self, a: str, sit: Situation) -> set[Situation]:
        if a not in self._sensing:
            raise InvalidAction(f"{a!r} is not a sensing action")
        if not sit:
            raise EmptySituation("action applied to the empty situation")
        effs = self._sensing[a]
        if not effs:
            return {sit}
        parts = [self.compatible(sit, bit, disj) for bit, disj in effs]
        out = set()
        for choice in itertools.product(*parts):
            inter = frozenset.intersection(*choice)
            if inter:
                out.add(inter)
        if not out:
            raise NoConsistentSensing(f"no consistent outcome for {a!r}")
        return out

    def successors(self, a: str, sit: Situation) -> set[Situation]:
        if a in self.domain.sensing:
            return self.sensing_successors(a, sit)
        return self.nonsensing_successors(a, sit)


# Thin functional wrappers over a throwaway Semantics instance. Handy in
# scripts; hot paths should hold on to one Semantics object instead.

def truth_in_situation(d: Domain, sit, test) -> ThreeValued:
    return Semantics(d).truth(sit, test)


def initial_situation(d: Domain) -> Situation:
    return Semantics(d).initial_situation()


def zero_model_outcomes(d: Domain, a: str, s: int) -> frozenset:
    return Semantics(d).zero_model_outcomes(a, s)


def nonsensing_successors(d: Domain, a: str, sit) -> set:
    return Semantics(d).nonsensing_successors(a, sit)


def compatible_situations(d: Domain, sit, f: str, phi) -> list:
    return Semantics(d).compatible_situations(sit, f, phi)


def sensing_successors(d: Domain, a: str, sit) -> set:
    return Semantics(d).sensing_successors(a, sit)
