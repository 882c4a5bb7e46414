# %% [markdown]
# # A high-capacity player can hide behind the sample
#
# Users are uniform on [0, 2]; label 0 left of 1, label 1 right of it, all
# tolerances 1/2. Player 1 may use a strategy that predicts 0 on the sample
# points but behaves like the indicator of [1, 2] elsewhere; on the sample it
# looks exactly like the constant 0.

# %%
from regeq import Profile, empirical_payoffs, example1_exact_payoffs, example1_sampler
from regeq.synth import EXAMPLE1_PROFILES

for tag in EXAMPLE1_PROFILES:
    print(tag, "population payoffs:", [str(p) for p in example1_exact_payoffs(tag)])

# %% [markdown]
# Fresh users (not the training sample) see the almost-everywhere behaviour,
# so the Monte-Carlo payoffs converge to the closed forms.

# %%
fresh = example1_sampler(10_000, seed=1)
for tag, prof in EXAMPLE1_PROFILES.items():
    emp = empirical_payoffs(fresh, Profile(prof))
    print(tag, "Monte Carlo:", [round(float(p), 3) for p in emp])
