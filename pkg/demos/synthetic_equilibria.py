# %% [markdown]
# # Equilibria on the four synthetic conditions
#
# Two line-fitting players, exact better-response dynamics from the zero
# profile, 100 users per dataset. Each run writes an SVG scatter: green stars
# are satisfied by both players, red circles only by player 1, blue squares
# only by player 2, black crosses by nobody.
#
# About 30-60 s per dataset; pass a condition name to run just one.

# %%
import sys
from pathlib import Path

from regeq import Profile, exact_pne, generate, preset
from regeq.game import empirical_payoffs, indicator_matrix
from regeq.plot import scatter_svg
from regeq.report import ownership_tags
from regeq.synth import CONDITIONS, LEVELS

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)
conditions = sys.argv[1:] or CONDITIONS

# %%
for cond in conditions:
    for level in LEVELS:
        sample = generate(preset(cond, level), 100, seed=0).with_intercept()
        trace = exact_pne(sample, Profile.zeros(2, 2))
        tags = ownership_tags(indicator_matrix(sample, trace.profile))
        pay = empirical_payoffs(sample, trace.profile)
        lines = [tuple(h.coeffs) for h in trace.profile]
        svg = scatter_svg(sample.X[:, 0], sample.y, tags, lines, title=f"{cond} / {level}")
        (out / f"{cond}_{level}.svg").write_text(svg)
        print(f"{cond:9s} {level:6s} steps={trace.n_steps} both={tags.count('both'):3d} "
              f"none={tags.count('none'):3d} payoffs=({float(pay[0]):.2f}, {float(pay[1]):.2f})")
