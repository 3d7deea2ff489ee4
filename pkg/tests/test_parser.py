import pytest
from hypothesis import given, settings, strategies as st

from aklang import (
    Act, Atom, EffectProp, Fn, If, KnowledgeLaw, NonDetProp, Query, ValueProp, While, lit,
    parse_domain, parse_elp, parse_query, render,
)
from aklang.domain import Domain
from aklang.elp import K, NEGK, OBJ, BodyLiteral, Program, Rule, Var
from aklang.errors import ParseError, RejectUnsupported
from aklang.parser import DOMAIN_KEYWORDS, parse_plan, render_plan

from conftest import DOMAINS, load

FLUENTS = ["f", "g", "h", "wet", "lightOn"]
ACTIONS = ["a", "b", "look", "pickUp"]


def test_value_proposition():
    d = parse_domain("initially -burnOut.")
    assert d.propositions == (ValueProp(lit("-burnOut")),)


def test_nondeterministic_proposition():
    (p,) = parse_domain("drop may affect solidIce if noDrops.").propositions
    assert p == NonDetProp("drop", "solidIce", (lit("noDrops"),))


def test_empty_domain():
    d = parse_domain("")
    assert d.propositions == () and d.fluents == ()


def test_spans_are_recorded():
    d = parse_domain("initially f.\n\na causes g if f.", "x.akd")
    span = d.propositions[1].span
    assert (span.file, span.line, span.col) == ("x.akd", 3, 1)
    assert (span.end_line, span.end_col) == (3, 17)


def test_example_query():
    q = parse_query("bulbFixed after [checkSwitch, if -switchOn then [changeBulb] "
                    "else [turnSwitch, changeBulb]].")
    assert q == Query((lit("bulbFixed"),), (
        Act("checkSwitch"),
        If((lit("-switchOn"),), (Act("changeBulb"),), (Act("turnSwitch"), Act("changeBulb")))))


def test_while_query():
    q = parse_query("iceInCups after [while solidIce do [drop, pickUp, checkIce], putIceInCups].")
    assert q.plan == (While((lit("solidIce"),), (Act("drop"), Act("pickUp"), Act("checkIce"))),
                      Act("putIceInCups"))


def test_empty_plan_query():
    q = parse_query("f after [].")
    assert q.goal == (lit("f"),) and q.plan == ()
    assert render_plan(()) == "[]"


def test_contradictory_test_rejected():
    with pytest.raises(ParseError):
        parse_query("f, -f after [].")
    with pytest.raises(ParseError):
        parse_query("g after [if f, -f then [a]].")


def test_parse_error_position():
    with pytest.raises(ParseError) as e:
        parse_domain("initially f.\na causes.", "bad.akd")
    assert (e.value.span.line, e.value.span.col) == (2, 9)
    assert e.value.message


def test_keywords_are_reserved():
    with pytest.raises(ParseError):
        parse_domain("initially then.")


def test_example_programs():
    p = parse_elp("q(a) :- -K p(a).\np(a) :- -K q(a).")
    assert len(p) == 2
    assert p.rules[0] == Rule((Atom("q", ("a",)),), (BodyLiteral(Atom("p", ("a",)), NEGK),))
    (r,) = parse_elp("q(a) or q(b).").rules
    assert r.head == (Atom("q", ("a",)), Atom("q", ("b",))) and r.body == ()


def test_m_operator_rejected():
    with pytest.raises(RejectUnsupported):
        parse_elp("p :- M q.")


def test_classical_negation_rejected():
    with pytest.raises(RejectUnsupported):
        parse_elp("-p :- q.")


def test_negated_subjective_literal_rejected():
    with pytest.raises(RejectUnsupported):
        parse_elp("p :- not K q.")


def test_variables_and_nested_terms():
    (r,) = parse_elp("holds(f,res(a,S)) :- holds(f,S), not ab(neg_f,a,S).").rules
    assert r.head[0] == Atom("holds", ("f", Fn("res", ("a", Var("S")))))
    assert r.body[1].negated


@pytest.mark.parametrize("name", sorted(p.name for p in DOMAINS.glob("*.akd")))
def test_fixture_domains_round_trip(name):
    d = load(name)
    assert parse_domain(render(d)) == d


def test_translated_program_round_trips():
    from aklang import ground
    d = load("d1_r7.akd")
    q = parse_query((DOMAINS / "d1_r7_conditional.q").read_text())
    prog = ground(d, q).program
    assert parse_elp(render(prog)) == prog


# -- generated ASTs ------------------------------------------------------------------

literals = st.builds(lambda f, v: lit(("" if v else "-") + f), st.sampled_from(FLUENTS), st.booleans())
precond = st.lists(literals, max_size=3)


def _test(draw_lits):
    seen = {}
    for l in draw_lits:
        seen.setdefault(l.fluent, l)
    return tuple(seen.values())


tests_ = st.lists(literals, min_size=1, max_size=3).map(_test)

propositions = st.one_of(
    st.builds(ValueProp, literals),
    st.builds(lambda a, l, p: EffectProp(a, l, tuple(p)), st.sampled_from(ACTIONS[:2]), literals, precond),
    st.builds(lambda f, p: KnowledgeLaw("look", f, tuple(p)), st.sampled_from(FLUENTS), precond),
    st.builds(lambda a, f, p: NonDetProp(a, f, tuple(p)), st.sampled_from(ACTIONS[2:]), st.sampled_from(FLUENTS), precond),
)


@given(st.lists(propositions, max_size=8))
@settings(max_examples=1000, deadline=None)
def test_domain_round_trip(props):
    d = Domain.build(props)
    assert parse_domain(render(d)) == d


plans = st.recursive(
    st.lists(st.builds(Act, st.sampled_from(ACTIONS)), max_size=3).map(tuple),
    lambda inner: st.lists(st.one_of(
        st.builds(Act, st.sampled_from(ACTIONS)),
        st.builds(If, tests_, inner, st.none() | inner),
        st.builds(While, tests_, inner),
    ), max_size=3).map(tuple),
    max_leaves=8,
)


@given(tests_, plans)
@settings(max_examples=1000, deadline=None)
def test_query_round_trip(goal, plan):
    q = Query(goal, plan)
    assert parse_query(render(q)) == q
    assert parse_plan(render_plan(plan)) == plan


consts = st.sampled_from(["a", "b", "s0", "neg_f"])
terms = st.recursive(consts | st.just(Var("S")),
                     lambda t: st.builds(lambda x, y: Fn("res", (x, y)), consts, t), max_leaves=3)
atoms = st.builds(lambda p, args: Atom(p, tuple(args)), st.sampled_from(["p", "q", "holds"]),
                  st.lists(terms, max_size=2))
body_lits = st.one_of(
    st.builds(lambda a, n: BodyLiteral(a, OBJ, n), atoms, st.booleans()),
    st.builds(lambda a, m: BodyLiteral(a, m), atoms, st.sampled_from([K, NEGK])),
)
rules = st.one_of(
    st.builds(lambda h, b: Rule(tuple(h), tuple(b)), st.lists(atoms, min_size=1, max_size=3),
              st.lists(body_lits, max_size=3)),
    st.builds(lambda b: Rule((), tuple(b)), st.lists(body_lits, min_size=1, max_size=3)),
)


@given(st.lists(rules, max_size=6))
@settings(max_examples=1000, deadline=None)
def test_program_round_trip(rs):
    p = Program(tuple(rs))
    assert parse_elp(render(p)) == p


VOCAB = sorted(DOMAIN_KEYWORDS) + ["f", "g", "a", "-", ",", ".", "[", "]", "(", ")", ":-",
                                   "K", "-K", "M", "not", "or", "S", "%", "\n", "p(a)", "@"]


@given(st.lists(st.sampled_from(VOCAB), max_size=25).map(" ".join))
@settings(max_examples=1000, deadline=None)
def test_parsers_are_total(text):
    for parse in (parse_domain, parse_query, parse_elp, parse_plan):
        try:
            parse(text)
        except ParseError:
            pass


@given(st.text(max_size=40))
@settings(max_examples=1000, deadline=None)
def test_parsers_are_total_on_arbitrary_text(text):
    for parse in (parse_domain, parse_query, parse_elp):
        try:
            parse(text)
        except ParseError:
            pass
