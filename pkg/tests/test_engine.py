import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from aklang import Act, If, Query, Verdict, While, entails, exhaustive_no_sequence, lit, parse_domain, parse_query
from aklang.engine import Branch, Evaluator, prepare
from aklang.errors import DomainInconsistent, InvalidAction, LoopBudgetExceeded

import oracles
from conftest import domain_from_seed, load, load_query

PROPS = settings(max_examples=1000, deadline=None)
seeds = st.integers(0, 2**32 - 1)


def q(text):
    return parse_query(text)


def test_conditional_plan_example():
    ans = entails(load("d1_r7.akd"), load_query("d1_r7_conditional.q"))
    assert ans.verdict is Verdict.YES
    assert len(ans.outcomes) == 2


def test_straight_line_with_known_switch():
    ans = entails(load("d1_switch_on.akd"), q("bulbFixed after [turnSwitch, changeBulb]."))
    assert ans.verdict is Verdict.YES


def test_single_change_is_unknown():
    assert entails(load("d1_r7.akd"), q("bulbFixed after [changeBulb].")).verdict is Verdict.UNKNOWN


def test_unknown_test_gives_failed():
    ans = entails(load("d1_r7.akd"), q("bulbFixed after [if switchOn then [turnSwitch]]."))
    assert ans.verdict is Verdict.FAILED
    assert ans.outcomes[0].result is None


def test_false_test_takes_else_branch():
    d = parse_domain("initially -f.\ninitially -g.\na causes g.\nb causes h.")
    assert entails(d, q("h, -g after [if f then [a] else [b]].")).verdict is Verdict.YES


def test_empty_plan():
    d = parse_domain("initially f.")
    ans = entails(d, q("f after []."))
    assert ans.verdict is Verdict.YES
    assert ans.outcomes[0].result == frozenset([1])


def test_goal_false_everywhere_is_no():
    assert entails(load("d1_r7.akd"), q("bulbFixed after [].")).verdict is Verdict.NO


def test_strict_vacuous_mode_ignores_empty_outcomes():
    d = load("d1_r7.akd")
    query = q("bulbFixed after [if switchOn then [turnSwitch]].")
    assert entails(d, query, mode="strict-vacuous").verdict is Verdict.YES
    assert entails(d, query).verdict is Verdict.FAILED


def test_corrected_ice_loop():
    ans = entails(load("d5.akd"), load_query("d5_loop.q"))
    assert ans.verdict is Verdict.YES
    assert all(o.iterations and o.iterations[0] <= 3 for o in ans.outcomes)
    assert not any(o.diverged for o in ans.outcomes)


def test_literal_ice_loop_is_not_yes():
    ans = entails(load("d5.akd"), load_query("d5_loop_literal.q"))
    assert ans.verdict is not Verdict.YES
    assert all(o.iterations == (0,) for o in ans.outcomes)


def test_bag_loop_diverges_everywhere():
    ans = entails(load("d4.akd"), load_query("d4_loop.q"))
    assert ans.verdict is Verdict.FAILED
    assert ans.outcomes and all(o.diverged and o.result is None for o in ans.outcomes)


@pytest.mark.parametrize("domain,query", [
    ("d5.akd", "d5_loop.q"), ("d5.akd", "d5_loop_literal.q"), ("d4.akd", "d4_loop.q")])
def test_loop_verdicts_match_branch_enumerator(domain, query):
    d, query = load(domain), load_query(query)
    runs = oracles.branch_runs(prepare(d, query), query.plan)
    assert entails(d, query).verdict.value == oracles.verdict_of(runs, query.goal)
    diverged = entails(d, query).outcomes
    assert any(o.diverged for o in diverged) == any(dv for _, dv in runs)


def test_loop_exit_when_test_false_at_entry():
    d = parse_domain("initially -f.\na causes f.")
    ans = entails(d, q("-f after [while f do [a]]."))
    assert ans.verdict is Verdict.YES and ans.outcomes[0].iterations == (0,)


def test_loop_budget():
    with pytest.raises(LoopBudgetExceeded):
        entails(load("d5.akd"), load_query("d5_loop.q"), loop_budget=1)


def test_inconsistent_domain():
    with pytest.raises(DomainInconsistent):
        entails(parse_domain("initially f.\ninitially -f."), q("f after []."))


def test_unknown_action_in_query():
    with pytest.raises(InvalidAction):
        entails(load("d1.akd"), q("bulbFixed after [fly]."))


def test_query_only_fluent_is_unknown():
    d = parse_domain("initially f.")
    assert entails(d, q("g after [].")).verdict is Verdict.UNKNOWN


def test_exhaustive_search_finds_witness():
    ok, witness = exhaustive_no_sequence(load("d1_switch_on.akd"), [lit("bulbFixed")], 2)
    assert not ok and witness == ["turnSwitch", "changeBulb"]


def test_exhaustive_search_trivial_goal():
    assert exhaustive_no_sequence(parse_domain("initially f."), [lit("f")], 0) == (False, [])


def test_exhaustive_search_no_witness():
    d = parse_domain("a causes g.")
    assert exhaustive_no_sequence(d, [lit("f")], 3) == (True, None)


def test_sensor_domain_has_short_entailing_sequence():
    # Without executability conditions a burnt bulb does not stop changeBulb,
    # so changeBulb, turnSwitch, changeBulb works from either switch position.
    d = load("d1_r7.akd")
    ok, witness = exhaustive_no_sequence(d, [lit("bulbFixed")], 4)
    assert not ok
    plan = tuple(Act(a) for a in witness)
    assert oracles.table_oracle(prepare(d, Query((lit("bulbFixed"),), plan)),
                                [lit("bulbFixed")], plan) == "yes"


# -- oracle agreement and invariants ----------------------------------------------------

def random_plan(d, rng, budget, loops=False, depth=0):
    plan = []
    while budget > 0 and rng.random() < 0.8:
        r = rng.random()
        test = (lit(("-" if rng.random() < .5 else "") + rng.choice(d.fluents)),)
        if r < 0.65 or depth >= 2:
            plan.append(Act(rng.choice(d.actions)))
            budget -= 1
        elif r < 0.85 or not loops:
            then = random_plan(d, rng, budget - 1, loops, depth + 1)
            orelse = random_plan(d, rng, budget - 1, loops, depth + 1) if rng.random() < .5 else None
            plan.append(If(test, then, orelse))
            budget -= 1 + max(oracles.plan_depth(then), oracles.plan_depth(orelse or ()))
        else:
            body = random_plan(d, rng, 2, False, depth + 1) or (Act(rng.choice(d.actions)),)
            plan.append(While(test, body))
            budget -= 2
    return tuple(plan)


@given(seeds, seeds)
@PROPS
def test_entailment_matches_transition_table_oracle(dseed, pseed):
    d = domain_from_seed(dseed)
    rng = random.Random(pseed)
    plan = random_plan(d, rng, 3)
    goal = (lit(rng.choice(d.fluents)),)
    want = oracles.table_oracle(d, goal, plan)
    assume(want is not None)
    assert entails(d, Query(goal, plan)).verdict.value == want


@given(seeds, seeds)
@PROPS
def test_loop_plans_match_branch_enumerator(dseed, pseed):
    d = domain_from_seed(dseed)
    rng = random.Random(pseed)
    plan = random_plan(d, rng, 5, loops=True)
    goal = (lit(rng.choice(d.fluents)),)
    ans = entails(d, Query(goal, plan))
    runs = oracles.branch_runs(d, plan)
    assert ans.verdict.value == oracles.verdict_of(runs, goal)
    assert {o.result for o in ans.outcomes if o.result is not None} == \
        {_as_mask(ans.sem, s) for s, _ in runs if s != oracles.EMPTY}


def _as_mask(sem, sit):
    return frozenset(sem.state(s) for s in sit)


@given(seeds, seeds)
@PROPS
def test_functional_consistency(dseed, pseed):
    d = domain_from_seed(dseed)
    rng = random.Random(pseed)
    plan = random_plan(d, rng, 6, loops=True)
    ev = Evaluator(d)
    for o in ev.run(plan):
        seen = {}
        prev = None
        for label, sit in o.trace:
            if label in d.actions and prev is not None and sit is not None:
                assert seen.setdefault((label, prev), sit) == sit
            if sit is not None:
                prev = sit
        for (a, s), t in o.log:
            assert seen.get((a, s), t) == t


def nest(test, body, k):
    return () if k == 0 else (If(test, body + nest(test, body, k - 1)),)


@given(seeds, seeds)
@PROPS
def test_while_unrolling_equivalence(dseed, pseed):
    d = domain_from_seed(dseed)
    rng = random.Random(pseed)
    test = (lit(("-" if rng.random() < .5 else "") + rng.choice(d.fluents)),)
    body = tuple(Act(a) for a in rng.choices(d.actions, k=rng.randint(1, 3)))
    ev = Evaluator(d)
    for o in ev.run((While(test, body),)):
        k = o.iterations[0]
        if o.diverged or o.result is None or k > 5:
            continue
        start = Branch(ev.sem.initial_situation(), o.log)
        (replay,) = ev.eval_plan(nest(test, body, k), [start])
        assert replay.sit == o.result
        assert replay.log == o.log


@given(seeds, seeds)
@PROPS
def test_sequence_composition(dseed, pseed):
    d = domain_from_seed(dseed)
    rng = random.Random(pseed)
    p1, p2 = random_plan(d, rng, 3), random_plan(d, rng, 3)
    ev = Evaluator(d)
    whole = {b.key() for b in ev.eval_plan(p1 + p2, [ev.start()])}
    split = {b.key() for b in ev.eval_plan(p2, ev.eval_plan(p1, [ev.start()]))}
    assert whole == split
