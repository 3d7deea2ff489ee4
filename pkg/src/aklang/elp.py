"""Ground epistemic logic programs: belief sets, reducts and world views.

Only the fragment the translation needs is supported: disjunctive heads,
default negation on objective atoms, and ``K`` / ``-K`` on atoms in rule
bodies. Classical negation is absent; ``neg_f`` is just another constant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

import networkx as nx

from .errors import ModalLiteralPresent, NoWorldView, NotGround, SearchBudgetExceeded

DEFAULT_SEARCH_BUDGET = 2 ** 20


# -- terms and rules -----------------------------------------------------------

class Var(NamedTuple):
    name: str

    def __str__(self):
        return self.name


class Fn(NamedTuple):
    name: str
    args: tuple

    def __str__(self):
        return f"{self.name}({','.join(map(str, self.args))})"


class Atom(NamedTuple):
    pred: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(map(str, self.args))})"


OBJ, K, NEGK = "obj", "K", "-K"


class BodyLiteral(NamedTuple):
    atom: Atom
    modality: str = OBJ
    negated: bool = False

    def __str__(self):
        if self.modality != OBJ:
            return f"{self.modality} {self.atom}"
        return f"not {self.atom}" if self.negated else str(self.atom)


def pos(atom) -> BodyLiteral:
    return BodyLiteral(atom)


def naf(atom) -> BodyLiteral:
    return BodyLiteral(atom, OBJ, True)


def know(atom) -> BodyLiteral:
    return BodyLiteral(atom, K)


def not_know(atom) -> BodyLiteral:
    return BodyLiteral(atom, NEGK)


class Rule(NamedTuple):
    head: tuple
    body: tuple = ()

    def __str__(self):
        head = " or ".join(map(str, self.head))
        if not self.body:
            return head + "."
        body = ", ".join(map(str, self.body))
        return f"{head} :- {body}." if head else f":- {body}."

    @property
    def modal(self) -> bool:
        return any(l.modality != OBJ for l in self.body)


def term_ground(t) -> bool:
    if isinstance(t, Var):
        return False
    if isinstance(t, Fn):
        return all(term_ground(x) for x in t.args)
    return True


def atom_ground(a: Atom) -> bool:
    return all(term_ground(t) for t in a.args)


@dataclass(frozen=True)
class Program:
    rules: tuple

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __str__(self):
        return "\n".join(map(str, self.rules)) + ("\n" if self.rules else "")

    def atoms(self) -> set:
        out = set()
        for r in self.rules:
            out.update(r.head)
            out.update(l.atom for l in r.body)
        return out

    def is_ground(self) -> bool:
        return all(atom_ground(a) for a in self.atoms())

    def modal_atoms(self) -> set:
        return {l.atom for r in self.rules for l in r.body if l.modality != OBJ}


def _rules(p) -> tuple:
    return p.rules if isinstance(p, Program) else tuple(p)


def _require_ground(rules) -> None:
    for r in rules:
        for a in itertools.chain(r.head, (l.atom for l in r.body)):
            if not atom_ground(a):
                raise NotGround(f"rule is not ground: {r}")


# -- reducts -------------------------------------------------------------------

def objective_reduct(program, W) -> Program:
    """Gelfond-Lifschitz reduct of a modal-free program with respect to ``W``."""
    W = set(W)
    out = []
    for r in _rules(program):
        if r.modal:
            raise ModalLiteralPresent(f"modal literal in {r}")
        if any(l.negated and l.atom in W for l in r.body):
            continue
        out.append(Rule(r.head, tuple(l for l in r.body if not l.negated)))
    return Program(tuple(out))


def known(atom, A) -> bool:
    return all(atom in B for B in A)


def modal_reduct(program, A) -> Program:
    """Remove rules whose subjective literals are false in ``A``; strip the rest."""
    A = [set(B) for B in A]
    cache: dict = {}
    out = []
    for r in _rules(program):
        keep = True
        for l in r.body:
            if l.modality == OBJ:
                continue
            if l.atom not in cache:
                cache[l.atom] = known(l.atom, A)
            if cache[l.atom] != (l.modality == K):
                keep = False
                break
        if keep:
            out.append(Rule(r.head, tuple(l for l in r.body if l.modality == OBJ)))
    return Program(tuple(out))


# -- answer-set enumeration over integer atoms -------------------------------

class _Solver:
    """Enumerates the answer sets of a ground disjunctive program.

    ``rules`` are triples ``(heads, pos, neg)`` of int tuples over atoms
    ``0..n-1``. The search assigns atoms with unit propagation on rules and
    on support, then checks each total candidate for minimality.
    """

    def __init__(self, n: int, rules):
        self.n = n
        self.rules = [(tuple(h), tuple(p), tuple(q)) for h, p, q in rules]
        self.head_of = [[] for _ in range(n)]
        self.touch = [[] for _ in range(n)]
        for i, (h, p, q) in enumerate(self.rules):
            for a in h:
                self.head_of[a].append(i)
            for a in set(h) | set(p) | set(q):
                self.touch[a].append(i)

    def _set(self, a, v):
        cur = self.val[a]
        if cur is None:
            self.val[a] = v
            self.trail.append(a)
            self.queue.append(a)
            return True
        return cur == v

    def _body(self, r):
        """(False, _) if the body is false, else (True, undecided literals)."""
        val = self.val
        _, p, q = self.rules[r]
        und = []
        for a in p:
            v = val[a]
            if v is False:
                return False, None
            if v is None:
                und.append((a, True))
        for a in q:
            v = val[a]
            if v is True:
                return False, None
            if v is None:
                und.append((a, False))
        return True, und

    def _check_rule(self, r):
        h = self.rules[r][0]
        alive, und = self._body(r)
        if not alive:
            return True
        val = self.val
        hund = []
        for a in h:
            v = val[a]
            if v is True:
                return True
            if v is None:
                hund.append(a)
        if not und:
            if not hund:
                return False
            if len(hund) == 1:
                return self._set(hund[0], True)
        elif not hund and len(und) == 1:
            a, want = und[0]
            return self._set(a, not want)
        return True

    def _check_support(self, a):
        val = self.val
        if val[a] is False:
            return True
        supp = []
        for r in self.head_of[a]:
            h = self.rules[r][0]
            if any(b != a and val[b] is True for b in h):
                continue
            alive, _ = self._body(r)
            if alive:
                supp.append(r)
                if len(supp) > 1:
                    return True
        if not supp:
            return self._set(a, False) if val[a] is None else False
        if val[a] is True:
            h, p, q = self.rules[supp[0]]
            return (all(self._set(b, True) for b in p)
                    and all(self._set(b, False) for b in q)
                    and all(self._set(b, False) for b in h if b != a))
        return True

    def _propagate(self):
        rules = self.rules
        while self.queue:
            a = self.queue.pop()
            heads = {a}
            for r in self.touch[a]:
                if not self._check_rule(r):
                    return False
                heads.update(rules[r][0])
            for b in heads:
                if not self._check_support(b):
                    return False
        return True

    def _undo(self, mark):
        while len(self.trail) > mark:
            self.val[self.trail.pop()] = None
        self.queue.clear()

    def enumerate(self) -> list[frozenset]:
        n = self.n
        self.val = [None] * n
        self.trail: list[int] = []
        self.queue = list(range(n))
        found = []
        stack: list[list] = []   # [trail mark, atom, tried both values]
        ok = self._propagate()
        while True:
            if ok:
                a = next((i for i in range(n) if self.val[i] is None), None)
                if a is None:
                    M = frozenset(i for i in range(n) if self.val[i])
                    if self._minimal(M):
                        found.append(M)
                    ok = False
                    continue
                stack.append([len(self.trail), a, False])
                ok = self._set(a, True) and self._propagate()
                continue
            while stack and stack[-1][2]:
                self._undo(stack.pop()[0])
            if not stack:
                return found
            top = stack[-1]
            self._undo(top[0])
            top[2] = True
            ok = self._set(top[1], False) and self._propagate()

    def _minimal(self, M) -> bool:
        red = []
        for h, p, q in self.rules:
            if any(a in M for a in q) or not all(a in M for a in p):
                continue
            hm = tuple(a for a in h if a in M)
            if not hm:
                return False
            red.append((hm, p))
        if all(len(h) == 1 for h, _ in red):
            return _least_model(red) == M
        # search for a model strictly inside M
        clauses = [(frozenset(h), frozenset(p)) for h, p in red]
        clauses.append((frozenset(), frozenset(M)))
        return not _sat(clauses)


def _least_model(horn) -> frozenset:
    by_atom: dict = {}
    count = []
    out = set()
    stack = []
    for i, (h, p) in enumerate(horn):
        count.append(len(set(p)))
        for a in set(p):
            by_atom.setdefault(a, []).append(i)
        if not p:
            stack.append(h[0])
    while stack:
        a = stack.pop()
        if a in out:
            continue
        out.add(a)
        for i in by_atom.get(a, ()):
            count[i] -= 1
            if count[i] == 0:
                stack.append(horn[i][0][0])
    return frozenset(out)


def _sat(clauses) -> bool:
    """Tiny DPLL; clauses are (positive atoms, negated atoms) pairs."""
    assign: dict = {}

    def solve(cls):
        while True:
            unit = None
            rest = []
            for P, N in cls:
                if any(assign.get(a) is True for a in P) or any(assign.get(a) is False for a in N):
                    continue
                fp = [a for a in P if a not in assign]
                fn = [a for a in N if a not in assign]
                if not fp and not fn:
                    return False
                if len(fp) + len(fn) == 1:
                    unit = (fp[0], True) if fp else (fn[0], False)
                rest.append((P, N))
            if not rest:
                return True
            cls = rest
            if unit is None:
                break
            assign[unit[0]] = unit[1]
        P, N = cls[0]
        a = next(x for x in itertools.chain(P, N) if x not in assign)
        for v in (False, True):
            saved = dict(assign)
            assign[a] = v
            if solve(cls):
                return True
            assign.clear()
            assign.update(saved)
        return False

    return solve(list(clauses))


class _Index:
    def __init__(self):
        self.ids: dict = {}
        self.atoms: list = []

    def __call__(self, a) -> int:
        i = self.ids.get(a)
        if i is None:
            i = self.ids[a] = len(self.atoms)
            self.atoms.append(a)
        return i


def _encode(rules, idx: _Index):
    out = []
    for r in rules:
        if r.modal:
            raise ModalLiteralPresent(f"modal literal in {r}")
        out.append((tuple(idx(a) for a in r.head),
                    tuple(idx(l.atom) for l in r.body if not l.negated),
                    tuple(idx(l.atom) for l in r.body if l.negated)))
    return out


def belief_sets(program) -> frozenset:
    """All belief sets of a ground, modal-free program."""
    rules = _rules(program)
    _require_ground(rules)
    idx = _Index()
    enc = _encode(rules, idx)
    found = _Solver(len(idx.atoms), enc).enumerate()
    return frozenset(frozenset(idx.atoms[i] for i in M) for M in found)


# -- world views -----------------------------------------------------------------

def _check_reduct_fixpoint(rules, A) -> bool:
    return belief_sets(modal_reduct(rules, A)) == frozenset(A)


def world_views(program, method: str = "split", budget: int = DEFAULT_SEARCH_BUDGET) -> list:
    """All world views, each a frozenset of belief sets, in canonical order.

    ``guess`` enumerates truth values of every subjective atom at once.
    ``split`` solves the program bottom-up along its dependency layers and
    only guesses subjective atoms local to a layer; it is used when every
    partial belief set is guaranteed to extend (no constraints, head-cycle
    free, no odd loop through negation) and falls back to ``guess`` otherwise.
    """
    rules = _rules(program)
    _require_ground(rules)
    if method == "split" and _split_safe(rules):
        views = _world_views_split(rules, budget)
    elif method in ("split", "guess"):
        views = _world_views_guess(rules, budget)
    else:
        raise ValueError(f"unknown method {method!r}")
    return sorted(views, key=_view_key)


def _view_key(view):
    return sorted(sorted(map(str, B)) for B in view)


def _world_views_guess(rules, budget):
    modal = sorted({l.atom for r in rules for l in r.body if l.modality != OBJ}, key=str)
    if 2 ** len(modal) > budget:
        raise SearchBudgetExceeded(
            f"{len(modal)} subjective atoms exceed the search budget of {budget}")
    views = set()
    for k in range(len(modal) + 1):
        for T in itertools.combinations(modal, k):
            T = set(T)
            red = []
            for r in rules:
                if all(l.modality == OBJ or (l.atom in T) == (l.modality == K) for l in r.body):
                    red.append(Rule(r.head, tuple(l for l in r.body if l.modality == OBJ)))
            A = belief_sets(red)
            if not A:
                continue
            if all(known(x, A) == (x in T) for x in modal):
                views.add(A)
    return views


def _signed_edges(rules):
    """Objective dependency edges after shifting disjunctive heads."""
    for r in rules:
        for h in r.head:
            for l in r.body:
                if l.modality == OBJ:
                    yield l.atom, h, l.negated
            for g in r.head:
                if g != h:
                    yield g, h, True


def _split_safe(rules) -> bool:
    if any(not r.head for r in rules):
        return False
    # head-cycle freedom on the positive graph
    pg = nx.DiGraph()
    for r in rules:
        for h in r.head:
            pg.add_node(h)
            for l in r.body:
                if l.modality == OBJ and not l.negated:
                    pg.add_edge(l.atom, h)
    comp = {}
    for i, c in enumerate(nx.strongly_connected_components(pg)):
        for a in c:
            comp[a] = i
    for r in rules:
        if len(r.head) > 1 and len({comp[h] for h in r.head}) < len(set(r.head)):
            return False
    # no odd cycle through negation in the shifted program
    g = nx.DiGraph()
    for u, v, neg in _signed_edges(rules):
        if g.has_edge(u, v):
            g[u][v]["signs"].add(neg)
        else:
            g.add_edge(u, v, signs={neg})
    for c in nx.strongly_connected_components(g):
        if len(c) == 1:
            (a,) = c
            if g.has_edge(a, a) and True in g[a][a]["signs"]:
                return False
            continue
        parity: dict = {}
        start = next(iter(c))
        parity[start] = False
        stack = [start]
        while stack:
            u = stack.pop()
            for v in g.successors(u):
                if v not in c:
                    continue
                for neg in g[u][v]["signs"]:
                    want = parity[u] ^ neg
                    if v not in parity:
                        parity[v] = want
                        stack.append(v)
                    elif parity[v] != want:
                        return False
    return True


def _layers(rules):
    """Group atoms into batches solvable bottom-up; returns lists of atom sets."""
    g = nx.DiGraph()
    for r in rules:
        for h in r.head:
            g.add_node(h)
            for l in r.body:
                g.add_edge(l.atom, h)
            for h2 in r.head:
                if h2 != h:
                    g.add_edge(h, h2)
        for l in r.body:
            g.add_node(l.atom)
    cond = nx.condensation(g)
    members = cond.graph["mapping"]
    sccs: dict = {}
    for a, c in members.items():
        sccs.setdefault(c, set()).add(a)
    modal_of: dict = {}
    for r in rules:
        if r.head:
            c = members[r.head[0]]
            modal_of.setdefault(c, set()).update(
                l.atom for l in r.body if l.modality != OBJ)
    order = list(nx.lexicographical_topological_sort(cond, key=lambda c: min(map(str, sccs[c]))))
    batches, cur = [], set()
    for c in order:
        atoms = sccs[c]
        needs = modal_of.get(c, set())
        if cur and any(x in cur and x not in atoms for x in needs):
            batches.append(cur)
            cur = set()
        cur |= atoms
    if cur:
        batches.append(cur)
    return batches


def _world_views_split(rules, budget):
    batches = _layers(rules)
    where = {}
    for i, b in enumerate(batches):
        for a in b:
            where[a] = i
    by_batch: list[list] = [[] for _ in batches]
    for r in rules:
        by_batch[where[r.head[0]]].append(r)

    # partial views: collections of belief sets over the atoms solved so far
    views = {frozenset([frozenset()])}
    for i, brules in enumerate(by_batch):
        if not brules:
            continue
        modal = {l.atom for r in brules for l in r.body if l.modality != OBJ}
        local = sorted((x for x in modal if where[x] == i), key=str)
        outer = [x for x in modal if where[x] != i]
        lower = {l.atom for r in brules for l in r.body
                 if l.modality == OBJ and where.get(l.atom) != i}
        if 2 ** len(local) > budget:
            raise SearchBudgetExceeded(
                f"{len(local)} subjective atoms in one layer exceed the budget of {budget}")
        cache: dict = {}
        nxt = set()
        for A in views:
            kv = {x: known(x, A) for x in outer}
            for k in range(len(local) + 1):
                for T in itertools.combinations(local, k):
                    truth = dict(kv)
                    truth.update((x, x in T) for x in local)
                    red = [r for r in brules
                           if all(l.modality == OBJ or truth[l.atom] == (l.modality == K)
                                  for l in r.body)]
                    rkey = frozenset(id(r) for r in red)
                    coll = []
                    for B in A:
                        key = (rkey, B & lower)
                        ext = cache.get(key)
                        if ext is None:
                            ext = cache[key] = _extend(red, B)
                        coll.extend(B | E for E in ext)
                    if not coll:
                        continue
                    if all(known(x, coll) == (x in T) for x in local):
                        nxt.add(frozenset(coll))
        views = nxt
        if not views:
            break
    return views


def _extend(rules, B) -> list:
    """Belief sets of ``rules`` with lower-layer atoms fixed by ``B``."""
    heads = {h for r in rules for h in r.head}
    out = []
    for r in rules:
        body = []
        dead = False
        for l in r.body:
            if l.modality != OBJ:
                continue
            if l.atom in heads:
                body.append(l)
            elif (l.atom in B) == l.negated:
                dead = True
                break
        if not dead:
            out.append(Rule(r.head, tuple(body)))
    idx = _Index()
    enc = _encode(out, idx)
    return [frozenset(idx.atoms[i] for i in M)
            for M in _Solver(len(idx.atoms), enc).enumerate()]


def elp_entails(program, atom, method: str = "split", views: Optional[list] = None) -> bool:
    """True iff ``atom`` belongs to every belief set of every world view."""
    if views is None:
        views = world_views(program, method)
    if not views:
        raise NoWorldView("the program has no world view")
    return all(atom in B for A in views for B in A)
