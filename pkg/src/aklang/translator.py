"""Compilation of A_k domains and queries into epistemic logic programs.

Schematic rules carry the single situation variable ``S``; grounding
substitutes situation terms ``s0`` and ``res(a, S)``. Query rules are
grounded by relevance: only ``find_situation`` instances that the plan can
actually reach within the depth bound are produced.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

from .domain import (
    Act, Domain, EffectProp, If, KnowledgeLaw, Literal, NonDetProp, Query,
    ValueProp, While, has_loops, knowledge_precondition, potential_sensing_effects,
)
from .elp import (
    Atom, BodyLiteral, Fn, Program, Rule, Var, elp_entails, know, naf, not_know, pos,
    world_views,
)
from .engine import Answer, Evaluator, Mode, Verdict, prepare
from .errors import DepthRequired, EncodingCollision

S = Var("S")
S1 = Var("S1")
S2 = Var("S2")
S0 = "s0"
TRUE = "true"
NIL = "nil"


def res(a: str, s):
    return Fn("res", (a, s))


def holds(c, s) -> Atom:
    return Atom("holds", (c, s))


def ab(c, a, s) -> Atom:
    return Atom("ab", (c, a, s))


def situation_depth(s) -> int:
    d = 0
    while isinstance(s, Fn):
        d += 1
        s = s.args[1]
    return d


def situation_actions(s) -> list[str]:
    out = []
    while isinstance(s, Fn):
        out.append(s.args[0])
        s = s.args[1]
    return out[::-1]


# -- encoding --------------------------------------------------------------------

@dataclass
class EncodingMap:
    """Fluent literals and auxiliary symbols as program constants."""

    fluents: tuple
    sensing_aux: dict = field(default_factory=dict)   # (action, fluent) -> p constant
    test_aux: dict = field(default_factory=dict)      # test tuple -> t_neg constant

    @staticmethod
    def lit(l: Literal) -> str:
        return l.fluent if l.positive else "neg_" + l.fluent

    def literal(self, c: str) -> Optional[Literal]:
        if c in self.fluents:
            return Literal(c)
        if c.startswith("neg_") and c[4:] in self.fluents:
            return Literal(c[4:], False)
        return None

    def p_const(self, a: str, f: str) -> str:
        return self.sensing_aux.setdefault((a, f), f"p_{f}_{a}")

    def t_neg(self, test: tuple) -> str:
        if test not in self.test_aux:
            self.test_aux[test] = f"t_neg_{len(self.test_aux) + 1}"
        return self.test_aux[test]

    def constants(self) -> list[str]:
        out = []
        for f in self.fluents:
            out += [f, "neg_" + f]
        for p in self.sensing_aux.values():
            out += [p, "neg_" + p]
        out += list(self.test_aux.values())
        return out

    def check(self, actions=()) -> None:
        seen: dict = {}
        for c in self.constants() + [TRUE]:
            if c in seen:
                raise EncodingCollision(f"constant {c!r} is produced twice")
            seen[c] = True
        for sym in itertools.chain(self.fluents, actions):
            if not sym[0].islower():
                raise EncodingCollision(f"symbol {sym!r} would read as a program variable")
        for f in self.fluents:
            if f == TRUE or f.startswith("neg_") or f.startswith("t_neg_"):
                raise EncodingCollision(f"fluent {f!r} clashes with a reserved constant")
            if f in (S0, NIL) or f.startswith("p_") and f in self.sensing_aux.values():
                raise EncodingCollision(f"fluent {f!r} clashes with a reserved constant")


def _h(enc: EncodingMap, lits, s) -> list[BodyLiteral]:
    return [pos(holds(enc.lit(l), s)) for l in lits]


# -- domain translation ---------------------------------------------------------------

def translate_domain(d: Domain, enc: Optional[EncodingMap] = None,
                     complete_sensing: bool = True) -> list[Rule]:
    """Schematic rules for ``d``; the only variable is ``S``.

    With ``complete_sensing`` each sensed fluent gets one extra rule that
    suppresses a successor in which the knowledge precondition is known but
    the fluent is still unknown. Without it such an uninformative world view
    survives and conditional plans after sensing cannot be answered.
    """
    enc = enc or EncodingMap(d.fluents)
    for a in sorted(d.sensing):
        for f in potential_sensing_effects(d, a):
            enc.p_const(a, f)
    enc.check(d.actions)
    rules: list[Rule] = []
    lits = [Literal(f, v) for f in d.fluents for v in (True, False)]

    # inertia, one rule per literal and action
    for a in d.actions:
        for l in lits:
            rules.append(Rule((holds(enc.lit(l), res(a, S)),),
                              (pos(holds(enc.lit(l), S)), naf(ab(enc.lit(-l), a, S)))))
    # or-classicalization
    for f in d.fluents:
        rules.append(Rule((holds(f, S0), holds("neg_" + f, S0))))
    # suppression
    for a in d.actions:
        rules.append(Rule((holds(TRUE, res(a, S)),), (pos(holds(TRUE, S)),)))
    for c in enc.constants():
        rules.append(Rule((holds(c, S),), (pos(holds(TRUE, S)),)))

    for p in d.propositions:
        if isinstance(p, ValueProp):
            rules.append(Rule((holds(enc.lit(p.literal), S0),)))
        elif isinstance(p, EffectProp):
            pre = _h(enc, p.preconds, S)
            c = enc.lit(p.effect)
            rules.append(Rule((holds(c, res(p.action, S)),), tuple(pre)))
            rules.append(Rule((ab(c, p.action, S),),
                              tuple(pre) + (naf(holds(TRUE, res(p.action, S))),)))
        elif isinstance(p, NonDetProp):
            pre = tuple(_h(enc, p.preconds, S))
            f, nf = p.fluent, "neg_" + p.fluent
            nxt = res(p.action, S)
            rules.append(Rule((holds(f, nxt),), (naf(holds(nf, nxt)),) + pre))
            rules.append(Rule((holds(nf, nxt),), (naf(holds(f, nxt)),) + pre))
            rules.append(Rule((ab(f, p.action, S),),
                              (naf(holds(nf, nxt)),) + pre + (naf(holds(TRUE, S)),)))
            rules.append(Rule((ab(nf, p.action, S),),
                              (naf(holds(f, nxt)),) + pre + (naf(holds(TRUE, S)),)))

    for a in sorted(d.sensing):
        for f in potential_sensing_effects(d, a):
            rules.extend(_sensing_rules(enc, d, a, f, complete_sensing))
    return rules


def _sensing_rules(enc: EncodingMap, d: Domain, a: str, f: str,
                   complete: bool = True) -> list[Rule]:
    p = enc.p_const(a, f)
    np_, nf = "neg_" + p, "neg_" + f
    nxt = res(a, S)
    out = []
    for disjunct in knowledge_precondition(d, a, f):
        out.append(Rule((holds(p, S),), tuple(_h(enc, disjunct, S))))
    out.append(Rule((holds(np_, S),), (naf(holds(p, S)),)))
    guard = (not_know(holds(f, S)), not_know(holds(nf, S)))
    head = (holds(TRUE, nxt),)
    # case 1: the knowledge precondition is not known to hold afterwards
    out.append(Rule(head, guard + (not_know(holds(p, nxt)), pos(holds(p, S)))))
    # case 2: f known false afterwards
    k2 = guard + (know(holds(nf, nxt)), know(holds(p, nxt)))
    out.append(Rule(head, k2 + (pos(holds(f, S)),)))
    out.append(Rule(head, k2 + (pos(holds(np_, S)),)))
    # case 3: f known true afterwards
    k3 = guard + (know(holds(f, nxt)), know(holds(p, nxt)))
    out.append(Rule(head, k3 + (pos(holds(nf, S)),)))
    out.append(Rule(head, k3 + (pos(holds(np_, S)),)))
    if complete:
        # the sensing must have taught something
        out.append(Rule(head, guard + (know(holds(p, nxt)), not_know(holds(f, nxt)),
                                       not_know(holds(nf, nxt)))))
    return out


# -- query translation -------------------------------------------------------------------

def _item_term(enc: EncodingMap, step):
    if isinstance(step, Act):
        return step.name
    cond = Fn("cond", tuple(enc.lit(l) for l in step.test))
    if isinstance(step, If):
        if step.orelse is None:
            return Fn("if", (cond, plan_term(enc, step.then)))
        return Fn("ite", (cond, plan_term(enc, step.then), plan_term(enc, step.orelse)))
    return Fn("while", (cond, plan_term(enc, step.body)))


def plan_term(enc: EncodingMap, plan: tuple):
    term = NIL
    for step in reversed(plan):
        term = Fn("cons", (_item_term(enc, step), term))
    return term


def _fs(p, s, s1) -> Atom:
    return Atom("find_situation", (p, s, s1))


def _k_true(enc, test, s) -> tuple:
    return tuple(know(holds(enc.lit(l), s)) for l in test)


def _k_false(enc, test, s) -> tuple:
    if len(test) == 1:
        return (know(holds(enc.lit(-test[0]), s)),)
    return (know(holds(enc.t_neg(test), s)),)


def _tests(plan):
    for step in plan:
        if isinstance(step, If):
            yield step.test
            yield from _tests(step.then)
            if step.orelse is not None:
                yield from _tests(step.orelse)
        elif isinstance(step, While):
            yield step.test
            yield from _tests(step.body)


def goal_constants(enc: EncodingMap, goal) -> tuple[list[str], str]:
    """Constants whose ``holds_after_plan`` atoms decide yes and no."""
    yes = [enc.lit(l) for l in goal]
    no = enc.lit(-goal[0]) if len(goal) == 1 else enc.t_neg(tuple(goal))
    return yes, no


def _aux_rules(enc: EncodingMap, q: Query) -> list[Rule]:
    tests = [t for t in _tests(q.plan) if len(t) > 1]
    if len(q.goal) > 1:
        tests.append(tuple(q.goal))
    out = []
    for t in dict.fromkeys(tests):
        c = enc.t_neg(t)
        for l in t:
            out.append(Rule((holds(c, S),), (pos(holds(enc.lit(-l), S)),)))
        out.append(Rule((holds(c, S),), (pos(holds(TRUE, S)),)))
    return out


def _templates(enc: EncodingMap, q: Query):
    """Yield ``(kind, plan suffix, rule)`` query-rule templates.

    Variables: ``S`` start situation, ``S2`` intermediate, ``S1`` end.
    """
    seen = set()

    def walk(plan):
        if plan in seen:
            return
        seen.add(plan)
        P = plan_term(enc, plan)
        if not plan:
            yield "nil", plan, Rule((_fs(P, S, S),))
            return
        step, rest = plan[0], plan[1:]
        R = plan_term(enc, rest)
        if isinstance(step, Act):
            yield "act", plan, Rule((_fs(P, S, S1),), (pos(_fs(R, res(step.name, S), S1)),))
        elif isinstance(step, If):
            T = plan_term(enc, step.then)
            yield "then", plan, Rule((_fs(P, S, S1),), _k_true(enc, step.test, S)
                                     + (pos(_fs(T, S, S2)), pos(_fs(R, S2, S1))))
            if step.orelse is None:
                yield "skip", plan, Rule((_fs(P, S, S1),), _k_false(enc, step.test, S)
                                         + (pos(_fs(R, S, S1)),))
            else:
                E = plan_term(enc, step.orelse)
                yield "else", plan, Rule((_fs(P, S, S1),), _k_false(enc, step.test, S)
                                         + (pos(_fs(E, S, S2)), pos(_fs(R, S2, S1))))
                yield from walk(step.orelse)
            yield from walk(step.then)
        else:
            B = plan_term(enc, step.body)
            yield "exit", plan, Rule((_fs(P, S, S1),), _k_false(enc, step.test, S)
                                     + (pos(_fs(R, S, S1)),))
            yield "loop", plan, Rule((_fs(P, S, S1),), _k_true(enc, step.test, S)
                                     + (pos(_fs(B, S, S2)), pos(_fs(P, S2, S1))))
            yield from walk(step.body)
        yield from walk(rest)

    return list(walk(tuple(q.plan)))


def translate_query_rules(q: Query, enc: EncodingMap) -> list[Rule]:
    """Schematic query rules (variables ``S``, ``S1``, ``S2``, ``F``)."""
    rules = [r for _, _, r in _templates(enc, q)]
    yes, no = goal_constants(enc, q.goal)
    P = plan_term(enc, q.plan)
    for c in yes + [no]:
        rules.append(Rule((Atom("holds_after_plan", (c, P)),),
                          (pos(_fs(P, S0, S)), pos(holds(c, S)))))
    return _aux_rules(enc, q) + rules


# -- grounding ----------------------------------------------------------------------------

def max_actions(plan) -> int:
    """Largest number of actions any branch of a loop-free plan executes."""
    n = 0
    for step in plan:
        if isinstance(step, Act):
            n += 1
        elif isinstance(step, If):
            n += max(max_actions(step.then),
                     max_actions(step.orelse) if step.orelse is not None else 0)
        else:
            raise DepthRequired("plans with loops need an explicit grounding depth")
    return n


def _reach(plan, depth: int):
    """Start situations and end situations of every reachable plan suffix."""
    ends: dict = {}
    pairs = {(plan, S0)}
    order = [(plan, S0)]

    def deps(P, s):
        """(needed pairs, ends of (P, s) under the current table)."""
        if not P:
            return [], {s}
        step, rest = P[0], P[1:]
        need, out = [], set()
        if isinstance(step, Act):
            if situation_depth(s) < depth:
                nxt = res(step.name, s)
                need.append((rest, nxt))
                out |= ends.get((rest, nxt), set())
            return need, out
        if isinstance(step, If):
            branches = [step.then, step.orelse if step.orelse is not None else ()]
            for br in branches:
                need.append((br, s))
                for s2 in ends.get((br, s), ()):
                    need.append((rest, s2))
                    out |= ends.get((rest, s2), set())
            return need, out
        need.append((rest, s))
        out |= ends.get((rest, s), set())
        need.append((step.body, s))
        for s2 in ends.get((step.body, s), ()):
            need.append((P, s2))
            out |= ends.get((P, s2), set())
        return need, out

    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(order):
            P, s = order[i]
            i += 1
            need, out = deps(P, s)
            for pr in need:
                if pr not in pairs:
                    pairs.add(pr)
                    order.append(pr)
                    changed = True
            cur = ends.setdefault((P, s), set())
            if not out <= cur:
                cur |= out
                changed = True
    return pairs, ends


def _subst(x, env):
    if isinstance(x, Var):
        return env[x]
    if isinstance(x, Fn):
        return Fn(x.name, tuple(_subst(a, env) for a in x.args))
    if isinstance(x, Atom):
        return Atom(x.pred, tuple(_subst(a, env) for a in x.args))
    return x


def _ground_rule(r: Rule, env) -> Rule:
    return Rule(tuple(_subst(h, env) for h in r.head),
                tuple(BodyLiteral(_subst(l.atom, env), l.modality, l.negated) for l in r.body))


def _rule_action(r: Rule) -> Optional[str]:
    """The action ``a`` when the rule mentions ``res(a, S)``."""
    def find(x):
        if isinstance(x, Fn):
            if x.name == "res" and x.args[1] == S:
                return x.args[0]
            for a in x.args:
                got = find(a)
                if got:
                    return got
        if isinstance(x, Atom):
            for a in x.args:
                got = find(a)
                if got:
                    return got
        return None
    for a in itertools.chain(r.head, (l.atom for l in r.body)):
        got = find(a)
        if got:
            return got
    return None


def _has_var(r: Rule) -> bool:
    def var(x):
        if isinstance(x, Var):
            return True
        if isinstance(x, (Fn, Atom)):
            return any(var(a) for a in x.args)
        return False
    return any(var(a) for a in itertools.chain(r.head, (l.atom for l in r.body)))


def full_universe(actions, depth: int) -> list:
    out = [S0]
    layer = [S0]
    for _ in range(depth):
        layer = [res(a, s) for s in layer for a in actions]
        out.extend(layer)
    return out


def ground_domain(rules, universe) -> list[Rule]:
    uni = set(universe)
    out = []
    for r in rules:
        if not _has_var(r):
            out.append(r)
            continue
        a = _rule_action(r)
        for s in universe:
            if a is not None and res(a, s) not in uni:
                continue
            out.append(_ground_rule(r, {S: s}))
    return out


@dataclass
class Grounding:
    program: Program
    universe: list
    depth: int
    encoding: EncodingMap
    plan: object


def ground(d: Domain, q: Query, depth: Union[int, str, None] = "auto",
           full: bool = False, enc: Optional[EncodingMap] = None,
           complete_sensing: bool = True) -> Grounding:
    """Ground translation of ``d`` plus the query rules of ``q``."""
    if depth in (None, "auto"):
        depth = max_actions(q.plan)
    depth = int(depth)
    if depth < 0:
        raise ValueError("depth must be non-negative")
    enc = enc or EncodingMap(d.fluents)
    dom_rules = translate_domain(d, enc, complete_sensing)
    aux = _aux_rules(enc, q)
    templates = _templates(enc, q)
    pairs, ends = _reach(tuple(q.plan), depth)

    if full:
        universe = full_universe(d.actions, depth)
    else:
        seen = dict.fromkeys([S0])
        for _, s in sorted(pairs, key=lambda pr: situation_depth(pr[1])):
            seen.setdefault(s)
        for v in ends.values():
            for s in v:
                seen.setdefault(s)
        universe = sorted(seen, key=lambda s: (situation_depth(s), str(s)))

    rules = ground_domain(dom_rules + aux, universe)
    rules += _ground_queries(templates, pairs, ends)
    yes, no = goal_constants(enc, q.goal)
    P = plan_term(enc, q.plan)
    for s in sorted(ends.get((tuple(q.plan), S0), ()), key=str):
        for c in yes + [no]:
            rules.append(Rule((Atom("holds_after_plan", (c, P)),),
                              (pos(_fs(P, S0, s)), pos(holds(c, s)))))
    return Grounding(Program(tuple(rules)), universe, depth, enc, P)


def _ground_queries(templates, pairs, ends) -> list[Rule]:
    starts: dict = {}
    for P, s in pairs:
        starts.setdefault(P, []).append(s)
    for v in starts.values():
        v.sort(key=str)
    out = []
    for kind, P, r in templates:
        for s in starts.get(P, ()):
            step = P[0] if P else None
            rest = P[1:]
            if kind == "nil":
                out.append(_ground_rule(r, {S: s}))
            elif kind == "act":
                nxt = res(step.name, s)
                for s1 in sorted(ends.get((rest, nxt), ()), key=str):
                    out.append(_ground_rule(r, {S: s, S1: s1}))
            elif kind in ("then", "else", "loop"):
                if kind == "loop":
                    sub = step.body
                else:
                    sub = step.then if kind == "then" else step.orelse
                tail = P if kind == "loop" else rest
                for s2 in sorted(ends.get((sub, s), ()), key=str):
                    for s1 in sorted(ends.get((tail, s2), ()), key=str):
                        out.append(_ground_rule(r, {S: s, S2: s2, S1: s1}))
            else:  # skip / exit
                for s1 in sorted(ends.get((rest, s), ()), key=str):
                    out.append(_ground_rule(r, {S: s, S1: s1}))
    return out


# -- cross-check against the semantics -------------------------------------------------------------

@dataclass
class CrosscheckReport:
    semantic: Answer
    elp_yes: bool
    elp_no: bool
    agree: bool
    depth: int
    rules: int
    world_views: int


def measured_depth(answer: Answer, domain: Domain) -> int:
    """Most actions executed along any branch of an evaluated plan."""
    if any(o.diverged for o in answer.outcomes):
        raise DepthRequired("a branch diverges; give an explicit depth")
    acts = set(domain.actions)
    return max((sum(1 for label, _ in o.trace if label in acts) for o in answer.outcomes),
               default=0)


def crosscheck(d: Domain, q: Query, depth: Union[int, str, None] = "auto",
               full: bool = False, method: str = "split",
               loop_budget: int = 10_000, complete_sensing: bool = True) -> CrosscheckReport:
    d = prepare(d, q)
    ev = Evaluator(d, loop_budget)
    answer = ev.answer(q.goal, q.plan, Mode.DEFAULT)
    if depth in (None, "auto"):
        depth = measured_depth(answer, d) if has_loops(q.plan) else max_actions(q.plan)
    g = ground(d, q, depth, full, complete_sensing=complete_sensing)
    views = world_views(g.program, method)
    yes, no = goal_constants(g.encoding, q.goal)
    hap = lambda c: Atom("holds_after_plan", (c, g.plan))  # noqa: E731
    elp_yes = all(elp_entails(g.program, hap(c), views=views) for c in yes)
    elp_no = elp_entails(g.program, hap(no), views=views)
    agree = ((answer.verdict is Verdict.YES) == elp_yes
             and (answer.verdict is Verdict.NO) == elp_no)
    return CrosscheckReport(answer, elp_yes, elp_no, agree, int(depth),
                            len(g.program), len(views))
