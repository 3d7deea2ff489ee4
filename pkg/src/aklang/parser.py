"""Text formats for domains (.akd), queries and epistemic programs (.elp).

Domain statements::

    fluents f, g.                      % optional declarations
    actions a.
    sensing look.
    initially -f.
    a causes f if g, -h.
    look causes to know g if f.
    a may affect h if f.

Queries: ``f, -g after [a, if f then [b] else [c], while -g do [a, look]].``

Programs: ``p(a) or q(a) :- r(a), not s(a), K t(a), -K u(a).``
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .domain import (
    Act, Domain, EffectProp, If, KnowledgeLaw, Literal, NonDetProp, Query,
    ValueProp, While, contradictory,
)
from .elp import K, NEGK, OBJ, Atom, BodyLiteral, Fn, Program, Rule, Var
from .errors import ParseError, RejectUnsupported, SourceSpan

DOMAIN_KEYWORDS = frozenset({
    "initially", "causes", "to", "know", "may", "affect", "if", "fluents",
    "actions", "sensing", "after", "while", "do", "then", "else",
})

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>:-|[-,.\[\]()])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str      # ident, punct or eof
    text: str
    line: int
    col: int
    end_line: int
    end_col: int


def tokenize(text: str, file: str = "<input>") -> list[Token]:
    toks = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            span = SourceSpan(file, line, col, line, col + 1)
            raise ParseError(span, f"unexpected character {text[pos]!r}")
        s = m.group()
        nl = s.count("\n")
        end_line = line + nl
        end_col = len(s) - s.rfind("\n") if nl else col + len(s)
        if m.lastgroup in ("ident", "punct"):
            toks.append(Token(m.lastgroup, s, line, col, end_line, end_col))
        pos = m.end()
        line, col = end_line, end_col
    toks.append(Token("eof", "", line, col, line, col))
    return toks


class _Reader:
    def __init__(self, text: str, file: str):
        self.file = file
        self.toks = tokenize(text, file)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def span(self, start: Token, end: Optional[Token] = None) -> SourceSpan:
        end = end or start
        return SourceSpan(self.file, start.line, start.col, end.end_line, end.end_col)

    def error(self, message: str, expected=(), cls=ParseError):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        return cls(self.span(t), f"{message}, found {found}", list(expected))

    def at(self, text: str) -> bool:
        return self.tok.kind != "eof" and self.tok.text == text

    def take(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}", [text])
        return self.take()

    def ident(self, what: str, reserved=DOMAIN_KEYWORDS) -> Token:
        t = self.tok
        if t.kind != "ident":
            raise self.error(f"expected {what}", [what])
        if t.text in reserved:
            raise self.error(f"reserved word cannot be used as {what}", [what])
        return self.take()


# -- domains and queries -----------------------------------------------------------

def _literal(r: _Reader) -> Literal:
    if r.at("-"):
        r.take()
        return Literal(r.ident("fluent").text, False)
    return Literal(r.ident("fluent").text)


def _literals(r: _Reader) -> tuple[Literal, ...]:
    out = [_literal(r)]
    while r.at(","):
        r.take()
        out.append(_literal(r))
    return tuple(out)


def _names(r: _Reader, what: str) -> list[str]:
    out = [r.ident(what).text]
    while r.at(","):
        r.take()
        out.append(r.ident(what).text)
    return out


def _test(r: _Reader) -> tuple[Literal, ...]:
    start = r.tok
    lits = _literals(r)
    if contradictory(lits):
        raise ParseError(r.span(start, r.toks[r.i - 1]),
                         "test condition contains a fluent and its negation")
    return tuple(dict.fromkeys(lits))


def parse_domain(text: str, file: str = "<domain>") -> Domain:
    r = _Reader(text, file)
    props = []
    fluents, actions, sensing = [], [], []
    declared = False
    while r.tok.kind != "eof":
        start = r.tok
        if r.at("fluents") or r.at("actions") or r.at("sensing"):
            kw = r.take().text
            names = _names(r, "fluent" if kw == "fluents" else "action")
            {"fluents": fluents, "actions": actions, "sensing": sensing}[kw].extend(names)
            declared = True
            r.expect(".")
            continue
        if r.at("initially"):
            r.take()
            lit = _literal(r)
            end = r.expect(".")
            props.append(ValueProp(lit, r.span(start, end)))
            continue
        a = r.ident("action or 'initially'").text
        if r.at("causes"):
            r.take()
            if r.at("to") and r.peek().text == "know":
                r.take()
                r.take()
                f = r.ident("fluent").text
                pre = _preconds(r)
                end = r.expect(".")
                props.append(KnowledgeLaw(a, f, pre, r.span(start, end)))
            else:
                lit = _literal(r)
                pre = _preconds(r)
                end = r.expect(".")
                props.append(EffectProp(a, lit, pre, r.span(start, end)))
        elif r.at("may"):
            r.take()
            r.expect("affect")
            f = r.ident("fluent").text
            pre = _preconds(r)
            end = r.expect(".")
            props.append(NonDetProp(a, f, pre, r.span(start, end)))
        else:
            raise r.error("expected 'causes' or 'may affect'", ["causes", "may"])
    return Domain.build(props, dict.fromkeys(fluents), dict.fromkeys(actions),
                        dict.fromkeys(sensing), declared)


def _preconds(r: _Reader) -> tuple[Literal, ...]:
    if r.at("if"):
        r.take()
        return _literals(r)
    return ()


def _plan(r: _Reader) -> tuple:
    r.expect("[")
    items = []
    if r.at("]"):
        r.take()
        return ()
    while True:
        items.append(_item(r))
        if r.at(","):
            r.take()
            continue
        r.expect("]")
        return tuple(items)


def _item(r: _Reader):
    if r.at("if"):
        r.take()
        test = _test(r)
        r.expect("then")
        then = _plan(r)
        orelse = None
        if r.at("else"):
            r.take()
            orelse = _plan(r)
        return If(test, then, orelse)
    if r.at("while"):
        r.take()
        test = _test(r)
        r.expect("do")
        return While(test, _plan(r))
    return Act(r.ident("action, 'if' or 'while'").text)


def parse_plan(text: str, file: str = "<plan>") -> tuple:
    r = _Reader(text, file)
    plan = _plan(r)
    if r.tok.kind != "eof":
        raise r.error("unexpected trailing input")
    return plan


def parse_query(text: str, file: str = "<query>") -> Query:
    r = _Reader(text, file)
    goal = _test(r)
    r.expect("after")
    plan = _plan(r)
    if r.at("."):
        r.take()
    if r.tok.kind != "eof":
        raise r.error("unexpected trailing input", ["."])
    return Query(goal, plan)


# -- epistemic programs --------------------------------------------------------------

ELP_KEYWORDS = frozenset({"not", "or"})


def _term(r: _Reader):
    t = r.ident("term", ELP_KEYWORDS)
    if r.at("("):
        return Fn(t.text, _args(r))
    if t.text[0].isupper() or t.text[0] == "_":
        return Var(t.text)
    return t.text


def _args(r: _Reader) -> tuple:
    r.expect("(")
    args = [_term(r)]
    while r.at(","):
        r.take()
        args.append(_term(r))
    r.expect(")")
    return tuple(args)


def _atom(r: _Reader) -> Atom:
    if r.at("-"):
        raise r.error("classical negation is not supported; encode it as a constant",
                      cls=RejectUnsupported)
    t = r.ident("atom", ELP_KEYWORDS)
    if t.text[0].isupper() and not r.at("("):
        raise ParseError(r.span(t), f"expected atom, found variable {t.text!r}", ["atom"])
    if r.at("("):
        return Atom(t.text, _args(r))
    return Atom(t.text)


def _modal_prefix(r: _Reader) -> Optional[str]:
    """Return K, -K or M when the next tokens open a subjective literal."""
    t, nxt = r.tok, r.peek()
    if t.kind == "ident" and t.text in ("K", "M") and nxt.kind == "ident":
        return t.text
    if t.text == "-" and nxt.text in ("K", "M") and r.peek(2).kind == "ident":
        return "-" + nxt.text
    return None


def _body_literal(r: _Reader) -> BodyLiteral:
    start = r.tok
    negated = False
    if r.at("not") and r.peek().kind == "ident":
        r.take()
        negated = True
    mod = _modal_prefix(r)
    if mod in ("M", "-M"):
        raise RejectUnsupported(r.span(r.tok), "the M operator is not supported", [])
    if mod is not None:
        if negated:
            raise RejectUnsupported(r.span(start),
                                    "default negation of a subjective literal is not supported", [])
        r.take()
        if mod == "-K":
            r.take()
        return BodyLiteral(_atom(r), K if mod == "K" else NEGK)
    return BodyLiteral(_atom(r), OBJ, negated)


def _rule(r: _Reader) -> Rule:
    head = []
    if not r.at(":-"):
        head.append(_atom(r))
        while r.at("or"):
            r.take()
            head.append(_atom(r))
    body = []
    if r.at(":-"):
        r.take()
        body.append(_body_literal(r))
        while r.at(","):
            r.take()
            body.append(_body_literal(r))
    elif not head:
        raise r.error("expected rule", ["atom", ":-"])
    r.expect(".")
    return Rule(tuple(head), tuple(body))


def parse_elp(text: str, file: str = "<program>") -> Program:
    r = _Reader(text, file)
    rules = []
    while r.tok.kind != "eof":
        rules.append(_rule(r))
    return Program(tuple(rules))


# -- rendering -------------------------------------------------------------------

def render_lits(lits) -> str:
    return ", ".join(map(str, lits))


def render_plan(plan) -> str:
    return "[" + ", ".join(_render_item(s) for s in plan) + "]"


def _render_item(step) -> str:
    if isinstance(step, Act):
        return step.name
    if isinstance(step, If):
        s = f"if {render_lits(step.test)} then {render_plan(step.then)}"
        if step.orelse is not None:
            s += f" else {render_plan(step.orelse)}"
        return s
    return f"while {render_lits(step.test)} do {render_plan(step.body)}"


def render_query(q: Query) -> str:
    return f"{render_lits(q.goal)} after {render_plan(q.plan)}."


def render_domain(d: Domain) -> str:
    lines = []
    if d.declared:
        for kw, names in (("fluents", d.declared_fluents), ("actions", d.declared_actions),
                          ("sensing", d.declared_sensing)):
            if names:
                lines.append(f"{kw} {', '.join(names)}.")
    lines.extend(str(p) for p in d.propositions)
    return "\n".join(lines) + ("\n" if lines else "")


def render_program(p: Program) -> str:
    return str(p)


def render(obj) -> str:
    if isinstance(obj, Domain):
        return render_domain(obj)
    if isinstance(obj, Query):
        return render_query(obj)
    if isinstance(obj, Program):
        return render_program(obj)
    if isinstance(obj, tuple):
        return render_plan(obj)
    raise TypeError(f"cannot render {type(obj).__name__}")
