"""Self-checks behind ``regeq verify``: best responses against brute force,
and the potential identity on random unilateral deviations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .best_response import best_linear_response, brute_force_response, rival_weights
from .game import LinearStrategy, Profile, Sample, empirical_payoffs, potential


@dataclass(frozen=True)
class TrialResult:
    passed: bool
    text: str


def random_game(rng, m: int, d: int, n_players: int) -> tuple[Sample, Profile]:
    """Small random empirical game with mixed tolerances and a random profile."""
    X = rng.normal(size=(m, d))
    y = rng.normal(size=m)
    t = rng.choice([0.0, 0.25, 0.5, 1.0], size=m)
    sample = Sample(X, y, t)
    strategies = []
    for _ in range(n_players):
        if rng.random() < 0.3:
            # a strategy that interpolates one user, so ties on the boundary occur
            j = rng.integers(m)
            h = rng.normal(size=d)
            h += (y[j] - X[j] @ h) * X[j] / (X[j] @ X[j])
        else:
            h = rng.normal(size=d)
        strategies.append(LinearStrategy(h))
    return sample, Profile(tuple(strategies))


def oracle_trials(trials: int, m_cap: int, d_cap: int, seed) -> Iterator[TrialResult]:
    rng = np.random.default_rng(seed)
    for k in range(trials):
        m = int(rng.integers(1, m_cap + 1))
        d = int(rng.integers(1, d_cap + 1))
        N = int(rng.integers(2, 4))
        sample, profile = random_game(rng, m, d, N)
        i = int(rng.integers(N))
        w = rival_weights(sample, profile, i)
        fast = best_linear_response(sample, w).payoff
        slow = brute_force_response(sample, w).payoff
        ok = fast == slow
        yield TrialResult(ok, f"oracle trial {k}: m={m} d={d} N={N} player={i + 1} "
                              f"blr={fast} brute={slow} {'PASS' if ok else 'FAIL'}")


def potential_trials(deviations: int, seed, m_cap: int = 30, n_cap: int = 5
                     ) -> Iterator[TrialResult]:
    rng = np.random.default_rng(seed)
    for k in range(deviations):
        m = int(rng.integers(1, m_cap + 1))
        d = int(rng.integers(1, 4))
        N = int(rng.integers(1, n_cap + 1))
        sample, profile = random_game(rng, m, d, N)
        i = int(rng.integers(N))
        other = random_game(rng, m, d, 1)[1][0]
        after = profile.replace(i, other)
        dpi = empirical_payoffs(sample, after)[i] - empirical_payoffs(sample, profile)[i]
        dphi = potential(sample, after) - potential(sample, profile)
        ok = dpi == dphi
        yield TrialResult(ok, f"deviation {k}: m={m} N={N} player={i + 1} "
                              f"dpi={dpi} dphi={dphi} {'PASS' if ok else 'FAIL'}")
