# %% [markdown]
# # Shared credit and the potential
#
# Four users on a line, two players. A user pays one unit, split evenly among
# the players whose prediction lands inside its tolerance tube.

# %%
from fractions import Fraction

import numpy as np

from regeq import LinearStrategy, Profile, Sample, empirical_payoffs, potential

X = np.array([[0.0, 1.0], [1.0, 1.0], [2.0, 1.0], [3.0, 1.0]])  # x with an intercept column
y = np.array([1.0, 3.0, 5.0, 2.0])
sample = Sample(X, y, np.full(4, 0.5))

steep = LinearStrategy([2.0, 1.0])  # hits users 1-3
flat = LinearStrategy([0.0, 2.0])   # hits user 4 only
profile = Profile((steep, flat))
print("payoffs:", empirical_payoffs(sample, profile))
print("potential:", potential(sample, profile))

# %% [markdown]
# Player 2 copies player 1. Her payoff change equals the potential change,
# exactly, in rational arithmetic.

# %%
copy = profile.replace(1, steep)
d_pay = empirical_payoffs(sample, copy)[1] - empirical_payoffs(sample, profile)[1]
d_phi = potential(sample, copy) - potential(sample, profile)
print(f"payoff change {d_pay}, potential change {d_phi}")
assert d_pay == d_phi == Fraction(3, 8) - Fraction(1, 4)
