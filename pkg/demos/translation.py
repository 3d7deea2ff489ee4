"""
From domains to epistemic logic programs
========================================

Every domain and query compiles to an epistemic logic program whose world
views correspond to the models of the domain. Here we compile the bulb
domain, solve the program, and compare the answer with direct evaluation.
"""

# %%
from pathlib import Path

from aklang import crosscheck, ground, parse_domain, parse_query, world_views
from aklang.translator import S0

DOMAINS = Path(__file__).resolve().parent.parent / "domains"
d = parse_domain((DOMAINS / "d1_r7.akd").read_text())
q = parse_query("bulbFixed after [checkSwitch, if switchOn then [turnSwitch], changeBulb].")

g = ground(d, q)
print(len(g.program), "ground rules over", [str(s) for s in g.universe])

# %% [markdown]
# Each world view fixes one outcome of the sensing action. The view in
# which the switch turned out to be on routes the plan through turnSwitch.
# The third view floods the sensing successor with every literal; it
# contains every atom and so never blocks an entailment.

# %%
views = world_views(g.program)
for v in views:
    known = frozenset.intersection(*v)
    ends = sorted(str(a.args[2]) for a in known
                  if a.pred == "find_situation" and a.args[1] == S0)
    print(len(v), "belief sets, plan ends in", ends)

# %%
r = crosscheck(d, q)
print("semantic:", r.semantic.verdict.value, " program:", r.elp_yes, " agree:", r.agree)

# %% [markdown]
# The sensing rules include one extra constraint that removes a world view
# in which sensing taught nothing. Dropping it leaves that view in place
# and the program no longer entails the goal.

# %%
r = crosscheck(d, q, complete_sensing=False)
print("literal sensing rules, agree:", r.agree, " world views:", r.world_views)
