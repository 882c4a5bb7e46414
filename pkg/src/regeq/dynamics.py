"""Better-response dynamics, the sampling-based equilibrium learners, and
the sample-size bound."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .best_response import (
    best_linear_response,
    epsilon_better_response,
    realizable_fit,
    rival_weights,
)
from .game import (
    _accurate,
    Profile,
    Sample,
    empirical_payoffs,
    exact,
    indicator_matrix,
    payoff_quantum,
    payoffs_from_hits,
    potential,
)

ROUND_ROBIN = "round-robin"
RANDOM_SWEEP = "random"

Responder = Callable[[Sample, Profile, int, Fraction], Optional[object]]


class DynamicsInvariantError(RuntimeError):
    """Dynamics broke a guarantee that holds by theorem (a bug, not bad luck)."""


class RealizabilityError(RuntimeError):
    def __init__(self, player: int):
        super().__init__(f"no linear strategy interpolates the sample for player {player}")
        self.player = player


@dataclass(frozen=True)
class SampleSizeQuery:
    eps: float
    delta: float
    d: int
    n_players: int

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"d must be a positive integer, got {self.d}")
        if int(self.n_players) != self.n_players or self.n_players < 1:
            raise ValueError(f"n_players must be a positive integer, got {self.n_players}")


def sample_size_bound(eps: float, delta: float, d: int, n_players: int) -> float:
    """Right-hand side of the uniform-convergence sample bound (natural logs)."""
    e2 = eps * eps
    return (320 * d / e2 * math.log(160 * d / e2)
            + 160 * d * math.log(2 * math.e) / e2
            + 16 / e2 * math.log(4 * n_players / delta))


def sample_size(q: SampleSizeQuery | float, delta: float | None = None,
                d: int | None = None, n_players: int | None = None) -> int:
    """Smallest m for which every empirical payoff is eps-close w.p. 1 - delta.

    ``d`` is the sum of the players' pseudo-dimensions.  Accepts either a
    :class:`SampleSizeQuery` or the four numbers.
    """
    if not isinstance(q, SampleSizeQuery):
        q = SampleSizeQuery(q, delta, d, n_players)
    return math.ceil(sample_size_bound(q.eps, q.delta, q.d, q.n_players))


def linear_pseudo_dimension(n: int, intercept: bool) -> int:
    return n + 1 if intercept else n


@dataclass(frozen=True)
class Step:
    iteration: int
    player: int
    old_payoff: Fraction
    new_payoff: Fraction
    potential_before: Fraction
    potential_after: Fraction


@dataclass(frozen=True)
class DynamicsTrace:
    steps: tuple[Step, ...]
    profile: Profile
    reason: str
    eps: Fraction
    queries: int = 0

    @property
    def n_steps(self) -> int:
        return len(self.steps)


def step_bound(n_players: int, eps) -> int:
    """Potential-based cap on the number of improving steps."""
    return math.ceil((math.log(n_players) + 1) / float(eps))


def exact_eps(sample: Sample, eps, n_players: int) -> Fraction:
    """Round ``eps`` up to the payoff grid; equivalent threshold, exact type."""
    q = payoff_quantum(sample.m, n_players)
    eps = exact(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    return math.ceil(eps / q) * q


def linear_responder(**kw) -> Responder:
    def respond(sample, profile, i, eps):
        return epsilon_better_response(sample, profile, i, eps, **kw)
    return respond


class FiniteClassResponder:
    """Better responses over an explicit finite list of strategies."""

    def __init__(self, candidates: Sequence):
        self.candidates = list(candidates)
        if not self.candidates:
            raise ValueError("a finite class needs at least one strategy")

    def __call__(self, sample, profile, i, eps):
        hits = indicator_matrix(sample, profile)
        current = payoffs_from_hits(hits)[i]
        best, best_pay = None, None
        for h in self.candidates:
            hits[i] = _accurate(h.predict(sample.X), sample.y, sample.t)
            pay = payoffs_from_hits(hits)[i]
            if best_pay is None or pay > best_pay:
                best, best_pay = h, pay
        return best if best_pay >= current + eps else None


def _player_orders(n: int, order: str, rng):
    while True:
        if order == ROUND_ROBIN:
            yield list(range(n))
        elif order == RANDOM_SWEEP:
            yield list(rng.permutation(n))
        else:
            raise ValueError(f"unknown order policy {order!r}")


def run_dynamics(sample: Sample, initial: Profile, eps, order: str = ROUND_ROBIN, *,
                 seed=None, responders: Sequence[Responder] | Responder | None = None,
                 **br_kw) -> DynamicsTrace:
    """Let players take eps-better responses until none exists.

    Players are polled in sweeps (fixed order or a fresh random permutation
    per sweep); the first improving player moves and polling continues with
    the next player.  Stops once every player has been polled since the last
    move.  The potential rises by at least ``eps`` per move, so the
    run is cut off with :class:`DynamicsInvariantError` well before the
    theoretical step bound could be exceeded.
    """
    N = initial.n_players
    eps = exact_eps(sample, eps, N)
    if responders is None:
        responders = linear_responder(**br_kw)
    if callable(responders):
        responders = [responders] * N
    if len(responders) != N:
        raise ValueError(f"{len(responders)} responders for {N} players")

    bound = step_bound(N, eps)
    max_sweeps = bound + N
    rng = np.random.default_rng(seed)
    profile = initial
    phi = potential(sample, profile)
    steps: list[Step] = []
    idle: set[int] = set()
    queries = 0
    for sweep, players in enumerate(_player_orders(N, order, rng)):
        if sweep >= max_sweeps:
            raise DynamicsInvariantError(f"no convergence after {max_sweeps} sweeps")
        for i in players:
            queries += 1
            h = responders[i](sample, profile, i, eps)
            if h is None:
                idle.add(i)
                if len(idle) == N:
                    return DynamicsTrace(tuple(steps), profile, "converged", eps, queries)
                continue
            idle.clear()
            old = empirical_payoffs(sample, profile)[i]
            nxt = profile.replace(i, h)
            new = empirical_payoffs(sample, nxt)[i]
            phi_new = potential(sample, nxt)
            if new - old < eps or phi_new - phi != new - old:
                raise DynamicsInvariantError(
                    f"step by player {i}: payoff {old}->{new}, potential {phi}->{phi_new}")
            steps.append(Step(len(steps), i, old, new, phi, phi_new))
            if len(steps) > bound:
                raise DynamicsInvariantError(f"more than {bound} improving steps")
            profile, phi = nxt, phi_new
    raise AssertionError("unreachable")


def exact_pne(sample: Sample, initial: Profile, order: str = ROUND_ROBIN, **kw) -> DynamicsTrace:
    """Dynamics at the payoff-grid resolution, which end at an exact empirical PNE."""
    q = payoff_quantum(sample.m, initial.n_players)
    trace = run_dynamics(sample, initial, q, order, **kw)
    return DynamicsTrace(trace.steps, trace.profile, "exact", trace.eps, trace.queries)


def audit_pne(sample: Sample, profile: Profile, **br_kw) -> list[Fraction]:
    """Best-response gain available to each player (all zero at an exact PNE)."""
    pay = empirical_payoffs(sample, profile)
    gains = []
    for i in range(profile.n_players):
        br = best_linear_response(sample, rival_weights(sample, profile, i), **br_kw)
        gains.append(br.payoff - pay[i])
    return gains


def _draw(generator, m: int, rng) -> Sample:
    s = generator(m, rng)
    if not isinstance(s, Sample) or s.m != m:
        raise RuntimeError(f"generator returned {type(s).__name__} instead of {m} examples")
    return s


def algorithm1(generator, eps: float, delta: float, d: int, n_players: int, seed, *,
               initial: Profile | None = None, order: str = ROUND_ROBIN,
               responders=None, **br_kw):
    """Sample ``m_{eps/4, delta}`` users and run eps/2-better-response dynamics.

    ``generator(m, rng)`` must return a :class:`Sample`.  With probability at
    least ``1 - delta`` over the sample the returned profile is an eps-PNE of
    the population game; what is checked here is only that it is an empirical
    eps/2-PNE.  Returns ``(profile, sample, trace)``.
    """
    m = sample_size(eps / 4, delta, d, n_players)
    rng = np.random.default_rng(seed)
    sample = _draw(generator, m, rng)
    if initial is None:
        initial = Profile.zeros(n_players, sample.dim)
    trace = run_dynamics(sample, initial, exact(eps) / 2, order, seed=rng,
                         responders=responders, **br_kw)
    return trace.profile, sample, trace


def algorithm4(generator, eps: float, delta: float, d: int, n_players: int, seed):
    """Realizable direct-attraction learner: every player interpolates the sample.

    Returns ``(profile, sample)``; with probability at least ``1 - delta``
    the profile is an eps-PNE of the direct-attraction game.
    """
    m = sample_size(eps / 2, delta, d, n_players)
    rng = np.random.default_rng(seed)
    sample = _draw(generator, m, rng)
    strategies = []
    for i in range(n_players):
        res = realizable_fit(sample)
        if not res.feasible:
            raise RealizabilityError(i)
        strategies.append(res.witness)
    return Profile(tuple(strategies)), sample
