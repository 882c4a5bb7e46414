# %% [markdown]
# # Exact best responses
#
# The best linear response enumerates every realisable pattern of
# inside/above/below over the sample and returns the most valuable one.
# On small samples we can check it against trying all 3^m patterns.

# %%
import time

import numpy as np

from regeq import LinearStrategy, Profile, Sample, best_linear_response, brute_force_response, rival_weights
from regeq.pvf import tags_str

rng = np.random.default_rng(4)
x = rng.uniform(0, 5, 8)
sample = Sample(np.column_stack([x, np.ones(8)]), 2 * x + 1 + rng.normal(size=8), np.full(8, 0.7))

# %%
profile = Profile((LinearStrategy([0.0, 0.0]), LinearStrategy([2.0, 1.0])))
w = rival_weights(sample, profile, 0)
print("credit available per user:", [str(v) for v in w.values])

best_linear_response(sample, w)  # first call loads the compiled kernels
t0 = time.time()
br = best_linear_response(sample, w)
t_fast = time.time() - t0
t0 = time.time()
bf = brute_force_response(sample, w)
t_slow = time.time() - t0
print(f"enumeration: payoff {br.payoff}, cell {tags_str(br.cell)}, {t_fast * 1e3:.1f} ms")
print(f"brute force: payoff {bf.payoff}, cell {tags_str(bf.cell)}, {t_slow * 1e3:.1f} ms")
print("patterns kept per level:", br.level_sizes)

# %% [markdown]
# Growth with m at d = 2: the number of realisable patterns grows roughly
# like m^2, far below 3^m.

# %%
for m in (10, 20, 40, 80):
    xs = rng.uniform(0, 5, m)
    s = Sample(np.column_stack([xs, np.ones(m)]), 2 * xs + 1 + rng.normal(size=m), np.ones(m))
    w = rival_weights(s, Profile.zeros(1, 2), 0)
    t0 = time.time()
    r = best_linear_response(s, w)
    print(f"m={m:3d} final patterns {r.level_sizes[-1]:6d}  payoff {float(r.payoff):.3f}  {time.time() - t0:.2f}s")
