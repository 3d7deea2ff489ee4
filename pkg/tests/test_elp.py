import random

import pytest
from hypothesis import given, settings, strategies as st

from aklang import Atom, Fn, Program, Rule, belief_sets, elp_entails, modal_reduct, objective_reduct, world_views
from aklang.elp import Var, know, naf, not_know, pos
from aklang.errors import ModalLiteralPresent, NotGround, NoWorldView, SearchBudgetExceeded

import oracles
from conftest import load_program

PROPS = settings(max_examples=1000, deadline=None)
seeds = st.integers(0, 2**32 - 1)


def A(name, *args):
    return Atom(name, tuple(args))


def atoms(*names):
    return frozenset(A(*n) if isinstance(n, tuple) else A(n) for n in names)


def test_mutual_knowledge_has_two_views():
    views = world_views(load_program("mutual_k.elp"))
    assert views == [frozenset([atoms(("p", "a"))]), frozenset([atoms(("q", "a"))])]


def test_disjunction_has_one_view():
    views = world_views(load_program("disjunctive_k.elp"))
    assert views == [frozenset([atoms(("p", "a"), ("q", "a")), atoms(("p", "a"), ("q", "b"))])]


def _h(f, s):
    return A("holds", f, s)


def test_drop_fragment_belief_sets():
    s0 = "s0"
    s1 = Fn("res", ("drop", s0))
    common = {_h("solidIce", s0), _h("noDrops", s0), _h("neg_noDrops", s1),
              A("ab", "neg_noDrops", "drop", s0)}
    B1 = frozenset(common | {_h("solidIce", s1), A("ab", "solidIce", "drop", s0)})
    B2 = frozenset(common | {_h("neg_solidIce", s1), A("ab", "neg_solidIce", "drop", s0)})
    prog = load_program("drop_fragment.elp")
    assert belief_sets(prog) == {B1, B2}
    assert world_views(prog) == [frozenset({B1, B2})]
    assert elp_entails(prog, _h("neg_noDrops", s1))
    assert not elp_entails(prog, _h("solidIce", s1))


def test_objective_reduct():
    p = Program((Rule((A("p"),), (naf(A("q")),)), Rule((A("q"),), (pos(A("r")), naf(A("p"))))))
    assert objective_reduct(p, {A("q")}).rules == (Rule((A("q"),), (pos(A("r")),)),)
    assert len(objective_reduct(p, set())) == 2
    with pytest.raises(ModalLiteralPresent):
        objective_reduct(Program((Rule((A("p"),), (know(A("q")),)),)), set())


def test_modal_reduct():
    p = load_program("mutual_k.elp")
    red = modal_reduct(p, [atoms(("p", "a"))])
    assert red.rules == (Rule((A("p", "a"),), ()),)


def test_no_world_view():
    p = Program((Rule((A("p"),), (not_know(A("p")),)),))
    assert world_views(p) == []
    with pytest.raises(NoWorldView):
        elp_entails(p, A("p"))


def test_constraint_kills_all_belief_sets():
    p = Program((Rule((A("p"),), ()), Rule((), (pos(A("p")),))))
    assert belief_sets(p) == frozenset()
    assert world_views(p) == []


def test_nonground_program_rejected():
    p = Program((Rule((A("p", Var("S")),), ()),))
    with pytest.raises(NotGround):
        world_views(p)


def test_search_budget():
    rules = [Rule((A(f"p{i}"),), (not_know(A(f"q{i}")),)) for i in range(6)]
    rules += [Rule((A(f"q{i}"),), (not_know(A(f"p{i}")),)) for i in range(6)]
    # one layer with every subjective atom in it forces a guess over all of them
    rules += [Rule((A(f"p{i}"),), (pos(A(f"q{(i + 1) % 6}")),)) for i in range(6)]
    with pytest.raises(SearchBudgetExceeded):
        world_views(Program(tuple(rules)), method="guess", budget=16)


def test_unknown_method():
    with pytest.raises(ValueError):
        world_views(load_program("mutual_k.elp"), method="magic")


# -- random programs ----------------------------------------------------------------

def random_program(rng, n_atoms=4, n_rules=5, modal=True, constraints=True, disjunction=True):
    pool = [A(f"p{i}") for i in range(n_atoms)]
    kinds = ["pos", "naf"] + (["K", "NK"] if modal else [])
    rules = []
    for _ in range(rng.randint(1, n_rules)):
        lo = 0 if constraints and rng.random() < .15 else 1
        hi = 2 if disjunction else 1
        head = tuple(rng.sample(pool, rng.randint(lo, hi)))
        body = []
        for a in rng.sample(pool, rng.randint(0 if head else 1, 3)):
            k = rng.choice(kinds)
            body.append({"pos": pos, "naf": naf, "K": know, "NK": not_know}[k](a))
        rules.append(Rule(head, tuple(body)))
    return Program(tuple(rules))


@given(seeds)
@PROPS
def test_belief_sets_match_brute_force(seed):
    p = random_program(random.Random(seed), modal=False)
    assert belief_sets(p) == oracles.brute_belief_sets(p.rules)


@given(seeds)
@PROPS
def test_world_views_by_guessing_match_brute_force(seed):
    p = random_program(random.Random(seed))
    assert set(world_views(p, "guess")) == oracles.brute_world_views(p.rules)


@given(seeds)
@PROPS
def test_world_views_by_splitting_match_brute_force(seed):
    p = random_program(random.Random(seed), n_atoms=5, n_rules=6)
    assert set(world_views(p, "split")) == oracles.brute_world_views(p.rules)


@given(seeds)
@PROPS
def test_world_views_are_reduct_fixpoints(seed):
    p = random_program(random.Random(seed))
    for view in world_views(p):
        assert belief_sets(modal_reduct(p, view)) == view
        assert view


@given(seeds)
@PROPS
def test_modal_free_program_has_single_view(seed):
    p = random_program(random.Random(seed), modal=False)
    bs = belief_sets(p)
    views = world_views(p)
    assert views == ([bs] if bs else [])


@given(seeds)
@PROPS
def test_belief_sets_are_minimal_models_of_reduct(seed):
    p = random_program(random.Random(seed), modal=False)

    def model(red, W):
        return all(not {l.atom for l in r.body} <= W or set(r.head) & W for r in red)

    for B in belief_sets(p):
        red = objective_reduct(p, B)
        assert model(red, B)
        assert not any(model(red, V) for V in oracles.powerset(B) if V != B)


def test_split_solves_layers_beyond_the_guess_budget():
    # a stratified chain where splitting handles the layers one at a time
    rules = []
    for i in range(8):
        rules.append(Rule((A(f"a{i}"), A(f"b{i}")), ()))
        rules.append(Rule((A(f"c{i}"),), (not_know(A(f"a{i}")),)))
    p = Program(tuple(rules))
    split = world_views(p, "split")
    assert len(split) == 1 and len(split[0]) == 2 ** 8
    assert all(A("c0") in B for B in split[0])
    with pytest.raises(SearchBudgetExceeded):
        world_views(p, "guess", budget=2 ** 7)
