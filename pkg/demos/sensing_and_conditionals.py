"""
Sensing and conditional plans
=============================

A robot must fix a light bulb. Changing the bulb only works when the
switch is off, and the robot can check the switch when the bulb is not
burnt out. We ask whether a plan that senses first and then branches
achieves the goal.
"""

# %%
from pathlib import Path

from aklang import Semantics, entails, exhaustive_no_sequence, lit, parse_domain, parse_query

DOMAINS = Path(__file__).resolve().parent.parent / "domains"
d = parse_domain((DOMAINS / "d1_r7.akd").read_text())
print((DOMAINS / "d1_r7.akd").read_text())

# %% [markdown]
# The initial situation holds every state consistent with what the robot
# is told. The switch position is unknown, so there are two states.

# %%
sem = Semantics(d)
s0 = sem.initial_situation()
print("initial:", sem.render_situation(s0))

# %% [markdown]
# Sensing splits the situation. Each successor is one way the world might
# turn out; the planner must be ready for all of them.

# %%
for s in sorted(sem.successors("checkSwitch", s0), key=sem.situation_key):
    print("after checkSwitch:", sem.render_situation(s))

# %%
q = parse_query("bulbFixed after [checkSwitch, if -switchOn then [changeBulb] "
                "else [turnSwitch, changeBulb]].")
ans = entails(d, q)
print("verdict:", ans.verdict.value)
for o in ans.outcomes:
    print("  " + " -> ".join(label for label, _ in o.trace))

# %% [markdown]
# A single changeBulb is not enough, but a longer sequence without any
# sensing also works. The domain has no executability conditions, so
# changing a bulb that burns out does not block later actions.

# %%
print(entails(d, parse_query("bulbFixed after [changeBulb].")).verdict.value)
print(exhaustive_no_sequence(d, [lit("bulbFixed")], 4))

# %% [markdown]
# A test whose truth value is unknown sends the branch to the empty
# situation, and the query fails.

# %%
ans = entails(d, parse_query("bulbFixed after [if switchOn then [turnSwitch], changeBulb]."))
print(ans.verdict.value)
