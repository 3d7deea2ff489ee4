"""Command-line front end.

Exit codes::

    0  yes (check), agree (crosscheck), success otherwise
    1  no
    2  unknown
    3  failed (some branch reaches the empty situation)
    4  crosscheck disagreement
    10 other error
    11 file not found or unreadable
    12 parse error or unsupported construct
    13 domain error (invalid domain, unknown action, clashing effects)
    14 solver error (no world view, search budget)
    15 loop budget exceeded
    16 explicit grounding depth required
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

from .domain import Domain, Query, validate_domain
from .elp import world_views
from .engine import DEFAULT_LOOP_BUDGET, Evaluator, Mode, Verdict, prepare
from .errors import (
    AkError, DepthRequired, DomainError, ElpError, LoopBudgetExceeded, ParseError,
)
from .parser import parse_domain, parse_elp, parse_query, render_query
from .semantics import DEFAULT_MAX_FLUENTS, Semantics
from .translator import (
    EncodingMap, crosscheck, full_universe, ground, ground_domain, translate_domain,
    translate_query_rules,
)

EXIT_VERDICT = {Verdict.YES: 0, Verdict.NO: 1, Verdict.UNKNOWN: 2, Verdict.FAILED: 3}
EXIT_DISAGREE = 4
EXIT_ERROR, EXIT_FILE, EXIT_PARSE, EXIT_DOMAIN, EXIT_SOLVER, EXIT_BUDGET, EXIT_DEPTH = (
    10, 11, 12, 13, 14, 15, 16)

_COLORS = {"yes": "32", "no": "31", "unknown": "33", "failed": "35",
           "agree": "32", "disagree": "31"}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _color(word: str) -> str:
    if os.environ.get("AK_COLOR", "1") == "0" or not sys.stdout.isatty():
        return word
    code = _COLORS.get(word)
    return f"\033[{code}m{word}\033[0m" if code else word


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise CliError(EXIT_FILE, f"cannot read {path}: {e.strerror or e}") from e


def _domain(path) -> Domain:
    return parse_domain(_read(path), str(path))


def _query(args) -> Query:
    if args.query_file:
        return parse_query(_read(args.query_file), args.query_file)
    if not args.query:
        raise CliError(EXIT_ERROR, "a query is required (inline or --query-file)")
    return parse_query(args.query, "<query>")


def _emit(args, data: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def _sit_json(sem: Semantics, sit):
    return None if sit is None else sem.situation_key(sit)


def _sit_text(sem: Semantics, sit) -> str:
    return "{} (empty)" if sit is None else sem.render_situation(sit)


# -- commands ----------------------------------------------------------------------

def cmd_check(args) -> int:
    d = _domain(args.domain)
    q = _query(args)
    d = prepare(d, q)
    ev = Evaluator(d, args.loop_budget, args.max_fluents)
    ans = ev.answer(q.goal, q.plan, Mode(args.mode))
    sem = ev.sem
    word = ans.verdict.value
    lines = [f"query: {render_query(q)}", f"verdict: {_color(word)}"]
    branches = []
    for i, o in enumerate(ans.outcomes, 1):
        br = {"result": _sit_json(sem, o.result), "diverged": o.diverged,
              "loop_iterations": list(o.iterations)}
        if args.trace >= 1:
            br["trace"] = [[label, _sit_json(sem, s)] for label, s in o.trace]
            lines.append(f"branch {i}:" + (" diverged" if o.diverged else ""))
            for label, s in o.trace:
                lines.append(f"  {label:<16} {_sit_text(sem, s)}")
            if o.iterations:
                lines.append(f"  loop iterations: {', '.join(map(str, o.iterations))}")
        if args.trace >= 2:
            br["choices"] = [[a, sem.situation_key(s), sem.situation_key(t)]
                             for (a, s), t in o.log]
            for (a, s), t in o.log:
                lines.append(f"  choice {a}: {sem.render_situation(s)} -> "
                             f"{sem.render_situation(t)}")
        branches.append(br)
    if args.trace == 0:
        lines.append(f"branches: {len(ans.outcomes)}")
    data = {"query": render_query(q), "verdict": word, "mode": args.mode,
            "branches": branches}
    _emit(args, data, "\n".join(lines))
    return EXIT_VERDICT[ans.verdict]


def _sensing_labels(sem: Semantics, a: str, sit, result) -> list[str]:
    labels = []
    for bit, disj in sem._sensing[a]:
        f = sem.domain.fluents[bit.bit_length() - 1]
        cands = sem.compatible(sit, bit, disj)
        if len(cands) == 1 and cands[0] == sit:
            labels.append(f"{f} already known")
            continue
        for name, c in zip(("precondition false", f"learned -{f}", f"learned {f}"),
                           _partition(sem, sit, bit, disj)):
            if result <= c:
                labels.append(name if name.startswith("learned") else f"{f}: {name}")
                break
    return labels


def _partition(sem, sit, bit, disj):
    off, neg, pos = set(), set(), set()
    for s in sit:
        if any(sem.holds(s, c) for c in disj):
            (pos if s & bit else neg).add(s)
        else:
            off.add(s)
    return off, neg, pos


def cmd_transitions(args) -> int:
    d = _domain(args.domain)
    report = validate_domain(d)
    if not report.ok:
        raise DomainError("; ".join(report.errors))
    if args.action not in d.actions:
        raise CliError(EXIT_DOMAIN, f"unknown action {args.action!r}")
    sem = Semantics(d, args.max_fluents)
    sit = sem.initial_situation()
    if not sit:
        raise CliError(EXIT_DOMAIN, "the initial situation is empty")
    succ = sorted(sem.successors(args.action, sit), key=sem.situation_key)
    sensing = args.action in d.sensing
    lines = [f"initial: {sem.render_situation(sit)}",
             f"{args.action} ({'sensing' if sensing else 'non-sensing'}): "
             f"{len(succ)} successor(s)"]
    items = []
    for i, s in enumerate(succ, 1):
        item = {"situation": sem.situation_key(s)}
        line = f"  {i}. {sem.render_situation(s)}"
        if sensing:
            item["labels"] = _sensing_labels(sem, args.action, sit, s)
            line += "  [" + "; ".join(item["labels"]) + "]"
        items.append(item)
        lines.append(line)
    data = {"action": args.action, "sensing": sensing,
            "initial": sem.situation_key(sit), "successors": items}
    _emit(args, data, "\n".join(lines))
    return 0


def _depth(args):
    if args.depth == "auto":
        return "auto"
    try:
        n = int(args.depth)
    except ValueError:
        raise CliError(EXIT_ERROR, "--depth must be a non-negative integer or 'auto'")
    if n < 0:
        raise CliError(EXIT_ERROR, "--depth must be non-negative")
    return n


def cmd_translate(args) -> int:
    d = _domain(args.domain)
    report = validate_domain(d)
    if not report.ok:
        raise DomainError("; ".join(report.errors))
    has_query = bool(args.query or args.query_file)
    q = _query(args) if has_query else None
    if q is not None:
        d = prepare(d, q)
    complete = not args.literal_sensing
    if args.emit_schematic:
        enc = EncodingMap(d.fluents)
        rules = translate_domain(d, enc, complete)
        if q is not None:
            rules += translate_query_rules(q, enc)
        print("\n".join(map(str, rules)))
        return 0
    if q is not None:
        g = ground(d, q, _depth(args), args.full_universe, complete_sensing=complete)
        rules = g.program.rules
    else:
        depth = _depth(args)
        depth = 1 if depth == "auto" else depth
        rules = ground_domain(translate_domain(d, None, complete),
                              full_universe(d.actions, depth))
    print("\n".join(map(str, rules)))
    return 0


def cmd_worldviews(args) -> int:
    prog = parse_elp(_read(args.program), args.program)
    views = world_views(prog, args.method)
    rendered = [sorted(sorted(map(str, B)) for B in A) for A in views]
    lines = [f"world views: {len(views)}"]
    for i, A in enumerate(rendered, 1):
        lines.append(f"view {i}:")
        for B in A:
            lines.append("  {" + ", ".join(B) + "}")
    _emit(args, {"world_views": rendered}, "\n".join(lines))
    if not views:
        print("no world view", file=sys.stderr)
        return EXIT_SOLVER
    return 0


def cmd_crosscheck(args) -> int:
    d = _domain(args.domain)
    q = _query(args)
    r = crosscheck(d, q, _depth(args), args.full_universe, args.method,
                   args.loop_budget, complete_sensing=not args.literal_sensing)
    word = "agree" if r.agree else "disagree"
    data = {"query": render_query(q), "semantic": r.semantic.verdict.value,
            "elp_goal": r.elp_yes, "elp_negated_goal": r.elp_no, "agree": r.agree,
            "depth": r.depth, "rules": r.rules, "world_views": r.world_views}
    text = "\n".join([
        f"query: {render_query(q)}",
        f"semantic verdict: {r.semantic.verdict.value}",
        f"program entails goal: {str(r.elp_yes).lower()}",
        f"program entails negated goal: {str(r.elp_no).lower()}",
        f"depth {r.depth}, {r.rules} ground rules, {r.world_views} world view(s)",
        f"result: {_color(word)}",
    ])
    _emit(args, data, text)
    return 0 if r.agree else EXIT_DISAGREE


_HEADER = re.compile(r"^%\s*(domain|expect)\s*:\s*(\S+)\s*$", re.M)


def run_suite(args) -> int:
    """Run every ``*.q`` file in a directory. Each file names its domain with
    a ``% domain: file.akd`` comment and may state ``% expect: yes``."""
    root = Path(args.suite)
    if not root.is_dir():
        raise CliError(EXIT_FILE, f"not a directory: {root}")
    failures = 0
    rows = []
    for qf in sorted(root.glob("*.q")):
        text = _read(qf)
        meta = dict(_HEADER.findall(text))
        if "domain" not in meta:
            rows.append({"query": qf.name, "status": "skipped (no domain header)"})
            continue
        try:
            d = prepare(_domain(root / meta["domain"]), q := parse_query(text, str(qf)))
            ev = Evaluator(d, args.loop_budget, args.max_fluents)
            got = ev.answer(q.goal, q.plan, Mode(args.mode)).verdict.value
        except AkError as e:
            got = f"error: {e}"
        want = meta.get("expect")
        ok = want is None or want == got
        failures += not ok
        rows.append({"query": qf.name, "domain": meta["domain"], "verdict": got,
                     "expected": want, "ok": ok})
    lines = []
    for r in rows:
        if "ok" not in r:
            lines.append(f"SKIP {r['query']}: {r['status']}")
            continue
        exp = f" (expected {r['expected']})" if r["expected"] else ""
        lines.append(f"{'PASS' if r['ok'] else 'FAIL'} {r['query']}: {r['verdict']}{exp}")
    lines.append(f"{len(rows) - failures}/{len(rows)} ok")
    _emit(args, {"results": rows}, "\n".join(lines))
    return 0 if failures == 0 else 1


# -- argument parsing ----------------------------------------------------------------

def _positive(s: str) -> int:
    n = int(s)
    if n <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _common(top: bool) -> argparse.ArgumentParser:
    # Subcommands repeat the global flags; their defaults are suppressed so a
    # flag given before the subcommand is not reset.
    def dflt(v):
        return v if top else argparse.SUPPRESS
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=["text", "json"], default=dflt("text"))
    p.add_argument("--mode", choices=[m.value for m in Mode], default=dflt("default"),
                   help="strict-vacuous ignores branches ending in the empty situation")
    p.add_argument("--loop-budget", type=_positive, default=dflt(DEFAULT_LOOP_BUDGET))
    p.add_argument("--max-fluents", type=_positive, default=dflt(DEFAULT_MAX_FLUENTS))
    p.add_argument("--trace", type=int, choices=[0, 1, 2], default=dflt(0))
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common(False)

    grounding = argparse.ArgumentParser(add_help=False)
    grounding.add_argument("--depth", default="auto", help="N or auto")
    grounding.add_argument("--full-universe", action="store_true",
                           help="ground over every action sequence up to the depth")
    grounding.add_argument("--literal-sensing", action="store_true",
                           help="omit the rule that forces sensing to be informative")

    def query_args(p):
        p.add_argument("query", nargs="?", help="inline query text")
        p.add_argument("--query-file")

    ap = argparse.ArgumentParser(prog="aklang", parents=[_common(True)],
                                 description="Reason about A_k domains and queries.")
    ap.add_argument("--suite", metavar="DIR",
                    help="run every .q file of DIR against its declared domain")
    sub = ap.add_subparsers(dest="command")

    p = sub.add_parser("check", parents=[common], help="answer a query")
    p.add_argument("domain")
    query_args(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("transitions", parents=[common],
                       help="successors of the initial situation under an action")
    p.add_argument("domain")
    p.add_argument("action")
    p.set_defaults(func=cmd_transitions)

    p = sub.add_parser("translate", parents=[common, grounding],
                       help="emit the epistemic logic program")
    p.add_argument("domain")
    query_args(p)
    p.add_argument("--emit-schematic", action="store_true",
                   help="print rules with the situation variable S")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("worldviews", parents=[common], help="solve an .elp file")
    p.add_argument("program")
    p.add_argument("--method", choices=["split", "guess"], default="split")
    p.set_defaults(func=cmd_worldviews)

    p = sub.add_parser("crosscheck", parents=[common, grounding],
                       help="compare the semantic answer with the translated program")
    p.add_argument("domain")
    query_args(p)
    p.add_argument("--method", choices=["split", "guess"], default="split")
    p.set_defaults(func=cmd_crosscheck)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.suite:
            return run_suite(args)
        if not args.command:
            ap.print_usage(sys.stderr)
            return EXIT_ERROR
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except DomainError as e:
        print(f"domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except ElpError as e:
        print(f"solver error: {e}", file=sys.stderr)
        return EXIT_SOLVER
    except LoopBudgetExceeded as e:
        print(f"loop budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except DepthRequired as e:
        print(f"depth required: {e}", file=sys.stderr)
        return EXIT_DEPTH
    except AkError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
