"""
While loops over situations
===========================

An agent drops a bag of ice until the ice breaks, checking after every
drop. Loops are evaluated branch by branch; a branch that returns to a
situation it has already seen at the loop head is reported as diverged.
"""

# %%
from collections import Counter
from pathlib import Path

from aklang import entails, parse_domain, parse_query

DOMAINS = Path(__file__).resolve().parent.parent / "domains"
ice = parse_domain((DOMAINS / "d5.akd").read_text())
print((DOMAINS / "d5.akd").read_text())

# %%
q = parse_query((DOMAINS / "d5_loop.q").read_text())
ans = entails(ice, q)
print("verdict:", ans.verdict.value, "over", len(ans.outcomes), "branches")
print("iterations per branch:", dict(sorted(Counter(o.iterations[0] for o in ans.outcomes).items())))
longest = max(ans.outcomes, key=lambda o: o.iterations[0])
print(" -> ".join(label for label, _ in longest.trace))

# %% [markdown]
# With the loop test negated the body never runs: the ice starts solid,
# so the loop exits at once and the goal is not guaranteed.

# %%
literal = parse_query((DOMAINS / "d5_loop_literal.q").read_text())
print(entails(ice, literal).verdict.value)

# %% [markdown]
# A loop whose body cannot change the test keeps revisiting the same
# situation and diverges.

# %%
bag = parse_domain((DOMAINS / "d4.akd").read_text())
ans = entails(bag, parse_query((DOMAINS / "d4_loop.q").read_text()))
print(ans.verdict.value, [o.diverged for o in ans.outcomes])
