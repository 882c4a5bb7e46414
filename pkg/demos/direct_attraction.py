# %% [markdown]
# # Most-accurate-wins: no approximate equilibrium
#
# Users are uniform on three unit squares forming a U. Each user pays only the
# player whose prediction is closest. Whatever line player 1 picks, player 2
# has a reply worth about 2/3, so no profile gives both players more than
# 1/2 + 1/6 - eps.

# %%
import numpy as np

from regeq.direct import U, deviation_search, example2_sampler

points = example2_sampler(20_000, seed=0)
for h in [(0.0, 1.0), (0.0, 5.0), (1.0, 0.0), (-1.0, 3.0), (0.5, 0.75)]:
    res = deviation_search(h, points)
    crosses = [sq.crossed_by(*h) for sq in U.squares]
    print(f"h={h} crosses L/C/R={crosses}: best reply {np.round(res.best, 4)} earns {float(res.payoff):.4f}")
