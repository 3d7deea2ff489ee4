"""Random small domains and exhaustive plan families for cross-checking."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional

from .domain import (
    Act, Domain, EffectProp, If, KnowledgeLaw, Literal, NonDetProp, Query, ValueProp,
    validate_domain,
)
from .errors import ContradictoryEffects
from .semantics import Semantics


def _lits(rng: random.Random, fluents, k: int) -> tuple[Literal, ...]:
    fs = rng.sample(list(fluents), min(k, len(fluents)))
    return tuple(Literal(f, rng.random() < 0.5) for f in fs)


def random_domain(rng: random.Random, max_fluents: int = 3, max_actions: int = 2,
                  max_laws: int = 1, nondet: bool = True) -> Domain:
    """One random domain; may be unusable, see :func:`usable`."""
    fluents = [f"f{i}" for i in range(1, rng.randint(1, max_fluents) + 1)]
    actions = [f"a{i}" for i in range(1, rng.randint(1, max_actions) + 1)]
    sensing = []
    props = []
    n_laws = rng.randint(0, max_laws)
    if n_laws and len(actions) > 1 or n_laws and rng.random() < 0.5:
        sensing = [actions.pop()]
        for _ in range(n_laws):
            f = rng.choice(fluents)
            props.append(KnowledgeLaw(sensing[0], f, _lits(rng, fluents, rng.randint(0, 1))))
    for f in fluents:
        r = rng.random()
        if r < 0.3:
            props.append(ValueProp(Literal(f, True)))
        elif r < 0.6:
            props.append(ValueProp(Literal(f, False)))
    for a in actions:
        for _ in range(rng.randint(0, 3)):
            eff = _lits(rng, fluents, 1)[0]
            props.append(EffectProp(a, eff, _lits(rng, fluents, rng.randint(0, 1))))
        if nondet and rng.random() < 0.25:
            props.append(NonDetProp(a, rng.choice(fluents),
                                    _lits(rng, fluents, rng.randint(0, 1))))
    return Domain.build(props, fluents, actions, sensing, declared=True)


def usable(d: Domain) -> bool:
    """Valid, with a non-empty initial situation and no clashing effects anywhere."""
    if not validate_domain(d).ok:
        return False
    sem = Semantics(d)
    if not sem.initial_situation():
        return False
    try:
        for a in d.actions:
            if a in d.sensing:
                continue
            for s in range(1 << sem.n):
                sem.zero_model_outcomes(a, s)
    except ContradictoryEffects:
        return False
    return True


def random_domains(n: int, seed: int = 0, **kw) -> Iterator[Domain]:
    rng = random.Random(seed)
    made = 0
    while made < n:
        d = random_domain(rng, **kw)
        if usable(d):
            made += 1
            yield d


def sequences(actions, max_len: int) -> Iterator[tuple]:
    for n in range(max_len + 1):
        for seq in itertools.product(actions, repeat=n):
            yield tuple(Act(a) for a in seq)


def conditionals(d: Domain, rng: random.Random, k: int, max_len: int = 3) -> list[tuple]:
    """``k`` random plans with one single-literal conditional, at most
    ``max_len`` actions along any branch."""
    out = []
    for _ in range(k):
        pre = tuple(Act(a) for a in rng.choices(d.actions, k=rng.randint(0, max_len - 1)))
        room = max_len - len(pre)
        then = tuple(Act(a) for a in rng.choices(d.actions, k=rng.randint(0, room)))
        orelse = None
        if rng.random() < 0.5:
            orelse = tuple(Act(a) for a in rng.choices(d.actions, k=rng.randint(0, room)))
        test = (Literal(rng.choice(d.fluents), rng.random() < 0.5),)
        out.append(pre + (If(test, then, orelse),))
    return out


@dataclass
class SweepResult:
    domains: int
    checks: int
    disagreements: list

    @property
    def ok(self) -> bool:
        return not self.disagreements


def _check_domain(args) -> tuple[int, list]:
    from .translator import crosscheck
    d, seed, n_cond, max_len = args
    rng = random.Random(seed)
    plans = list(sequences(d.actions, max_len)) + conditionals(d, rng, n_cond, max_len)
    bad, n = [], 0
    for plan in plans:
        for f in d.fluents:
            q = Query((Literal(f),), plan)
            r = crosscheck(d, q)
            n += 1
            if not r.agree:
                bad.append((d, q, r.semantic.verdict, r.elp_yes, r.elp_no))
    return n, bad


def sweep(n_domains: int = 200, seed: int = 0, n_cond: int = 4, max_len: int = 3,
          processes: Optional[int] = None, **kw) -> SweepResult:
    """Cross-check every goal fluent after every plan of the family on
    ``n_domains`` random domains."""
    doms = list(random_domains(n_domains, seed, **kw))
    jobs = [(d, seed * 100_003 + i, n_cond, max_len) for i, d in enumerate(doms)]
    if processes == 1:
        results = map(_check_domain, jobs)
    else:
        import multiprocessing
        with multiprocessing.Pool(processes) as pool:
            results = pool.map(_check_domain, jobs, chunksize=4)
    checks, bad = 0, []
    for n, b in results:
        checks += n
        bad.extend(b)
    return SweepResult(len(doms), checks, bad)
