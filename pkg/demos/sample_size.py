# %% [markdown]
# # How many users are enough?
#
# The sample size that makes every empirical payoff eps-accurate for all
# players at once, with probability 1 - delta. ``d`` is the total
# pseudo-dimension: two players fitting lines with intercepts give d = 4.

# %%
from regeq import sample_size

for eps in (0.5, 0.25, 0.1, 0.05):
    row = [sample_size(eps, delta, 4, 2) for delta in (0.1, 0.01)]
    print(f"eps={eps:<5} delta=0.1: {row[0]:>10,d}   delta=0.01: {row[1]:>10,d}")
