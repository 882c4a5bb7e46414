"""Exact best responses for a player choosing a linear strategy."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import _simplex
from .game import (
    LinearStrategy,
    Profile,
    Sample,
    empirical_payoffs,
    exact,
    indicator_matrix,
    payoff_denominator,
)
from .pvf import DEFAULT_SIGMA, LPNumericError, Tag, solve_pvf

DEFAULT_CELL_CAP = 10**6
DEFAULT_BRUTE_FORCE_CAP = 10


class ResourceCapError(RuntimeError):
    """An enumeration grew past its configured bound."""


@dataclass(frozen=True)
class RivalWeights:
    """Credit player ``i`` would earn on each user if she satisfied it."""

    values: tuple[Fraction, ...]
    n_players: int

    def __len__(self):
        return len(self.values)

    def scaled(self) -> np.ndarray:
        """Integer weights ``lcm(1..N) * w_j``."""
        L = payoff_denominator(self.n_players)
        return np.array([int(w * L) for w in self.values], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class BestResponseResult:
    strategy: LinearStrategy
    payoff: Fraction
    cell: tuple[Tag, ...]
    level_sizes: tuple[int, ...] = field(default=(), compare=False)


def rival_weights(sample: Sample, profile: Profile, i: int) -> RivalWeights:
    N = profile.n_players
    if not 0 <= i < N:
        raise IndexError(f"player {i} not in profile of {N}")
    hits = indicator_matrix(sample, profile)
    rivals = hits.sum(axis=0) - hits[i]
    return RivalWeights(tuple(Fraction(1, int(k) + 1) for k in rivals), N)


def _payoff_of(cells: np.ndarray, weights: RivalWeights) -> np.ndarray:
    return (cells == Tag.INSIDE).astype(np.int64) @ weights.scaled()


def _as_fraction(num: int, weights: RivalWeights) -> Fraction:
    return Fraction(int(num), payoff_denominator(weights.n_players) * len(weights))


def _finish(sample, weights, cell, sigma, level_sizes=()) -> BestResponseResult:
    res = solve_pvf(sample, cell, sigma)
    if not res.feasible:
        raise LPNumericError(f"chosen cell lost feasibility on re-solve: {cell}")
    num = int(_payoff_of(np.asarray(cell, dtype=np.int8)[None, :], weights)[0])
    return BestResponseResult(
        res.witness, _as_fraction(num, weights), tuple(Tag(int(g)) for g in cell),
        tuple(int(k) for k in level_sizes),
    )


def best_linear_response(sample: Sample, weights: RivalWeights, *,
                         sigma: float = DEFAULT_SIGMA,
                         cap: int = DEFAULT_CELL_CAP) -> BestResponseResult:
    """Maximise player ``i``'s empirical payoff over all linear strategies.

    Enumerates every realisable inside/above/below pattern of the sample by
    extending feasible prefixes one user at a time, then picks the pattern
    with the largest credit (ties: lexicographically smallest, INSIDE <
    ABOVE < BELOW) and solves for a strategy realising it.  Cost grows like
    ``m ** d``; ``cap`` bounds the number of patterns kept per level.
    """
    if len(weights) != sample.m:
        raise ValueError(f"{len(weights)} weights for a sample of {sample.m}")
    status, cells, _, sizes = _simplex.enumerate_cells(
        sample.X, sample.y, sample.t, float(sigma), int(cap))
    if status == _simplex.CAP_EXCEEDED:
        raise ResourceCapError(f"more than {cap} feasible patterns at one level")
    if status == _simplex.NUMERIC:
        raise LPNumericError("LP failed during cell enumeration")
    scores = _payoff_of(cells, weights)
    best = int(np.argmax(scores))  # first maximum = lexicographically smallest
    return _finish(sample, weights, cells[best], sigma, sizes)


def brute_force_response(sample: Sample, weights: RivalWeights, *,
                         sigma: float = DEFAULT_SIGMA,
                         cap: int = DEFAULT_BRUTE_FORCE_CAP) -> BestResponseResult:
    """Reference best response: try all ``3**m`` full patterns."""
    m = sample.m
    if m > cap:
        raise ResourceCapError(f"brute force limited to m <= {cap}, got {m}")
    W = weights.scaled()
    best_num, best_cell = -1, None
    for cell in itertools.product((Tag.INSIDE, Tag.ABOVE, Tag.BELOW), repeat=m):
        if not solve_pvf(sample, cell, sigma).feasible:
            continue
        num = int(sum(W[j] for j in range(m) if cell[j] == Tag.INSIDE))
        if num > best_num:
            best_num, best_cell = num, cell
    return _finish(sample, weights, best_cell, sigma)


def epsilon_better_response(sample: Sample, profile: Profile, i: int, eps, **kw
                            ) -> Optional[LinearStrategy]:
    """A strategy gaining at least ``eps`` for player ``i``, or ``None``."""
    eps = exact(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    current = empirical_payoffs(sample, profile)[i]
    if current + eps > 1:
        return None
    br = best_linear_response(sample, rival_weights(sample, profile, i), **kw)
    if br.payoff >= current + eps:
        return br.strategy
    return None


def realizable_fit(sample: Sample, sigma: float = DEFAULT_SIGMA):
    """Exact interpolation: every user inside a zero-width tube."""
    zero_tol = sample.with_tolerance(0.0)
    return solve_pvf(zero_tol, np.full(sample.m, Tag.INSIDE, dtype=np.int8), sigma)
