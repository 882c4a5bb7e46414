import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from regeq.best_response import (
    ResourceCapError,
    RivalWeights,
    best_linear_response,
    brute_force_response,
    epsilon_better_response,
    realizable_fit,
    rival_weights,
)
from regeq.game import LinearStrategy, Profile, Sample, empirical_payoffs, indicator_matrix
from regeq.pvf import Tag, check_witness, solve_pvf

from strategies import games


def _exhaustive_best(sample, weights):
    """Highest payoff over every {inside, above, below} pattern, by definition."""
    best = Fraction(-1)
    for cell in itertools.product((Tag.INSIDE, Tag.ABOVE, Tag.BELOW), repeat=sample.m):
        if solve_pvf(sample, cell).feasible:
            val = sum((w for w, c in zip(weights.values, cell) if c == Tag.INSIDE), Fraction(0))
            best = max(best, val / sample.m)
    return best


def test_rival_weights_cases():
    s = Sample([[1.0], [2.0]], [0.0, 0.0], [0.1, 0.1])
    miss = Profile((LinearStrategy([0.0]), LinearStrategy([9.0])))
    assert rival_weights(s, miss, 0).values == (1, 1)
    hit = Profile((LinearStrategy([5.0]), LinearStrategy([0.0]), LinearStrategy([0.0])))
    assert rival_weights(s, hit, 0).values == (Fraction(1, 3), Fraction(1, 3))


@given(games(min_n=2), st.data())
def test_rival_weights_ignore_own_strategy(g, data):
    sample, profile = g
    i = data.draw(st.integers(0, profile.n_players - 1))
    other = LinearStrategy(np.full(sample.dim, 0.25))
    assert rival_weights(sample, profile, i) == rival_weights(sample, profile.replace(i, other), i)


@given(games(min_n=2), st.data())
def test_rival_weights_do_not_grow_when_a_rival_covers_more(g, data):
    sample, profile = g
    N = profile.n_players
    i = data.draw(st.integers(0, N - 1))
    k = data.draw(st.integers(0, N - 1).filter(lambda v: v != i))
    hits = indicator_matrix(sample, profile)
    others = [LinearStrategy(np.full(sample.dim, c)) for c in (-1.0, 0.0, 0.5, 1.0)]
    for h in others:
        new_hits = indicator_matrix(sample, profile.replace(k, h))
        if np.all(new_hits[k] >= hits[k]):
            before = rival_weights(sample, profile, i).values
            after = rival_weights(sample, profile.replace(k, h), i).values
            assert all(a <= b for a, b in zip(after, before))


def test_single_player_full_coverage():
    X = np.column_stack([np.arange(6.0), np.ones(6)])
    s = Sample(X, 2 * X[:, 0] + 1 + np.array([0.1, -0.2, 0.0, 0.3, -0.1, 0.2]), np.full(6, 0.5))
    br = best_linear_response(s, RivalWeights((Fraction(1),) * 6, 1))
    assert br.payoff == 1


@pytest.mark.parametrize("w", [Fraction(1), Fraction(1, 2), Fraction(1, 3)])
def test_one_point(w):
    s = Sample([[2.0]], [1.0], [0.0])
    wts = RivalWeights((w,), 3)
    assert best_linear_response(s, wts).payoff == w
    assert brute_force_response(s, wts).payoff == w


def test_unreachable_tube_never_inside():
    # user 2 sits at x = 0 with y far from 0: no homogeneous line reaches it
    s = Sample([[1.0], [0.0]], [1.0, 5.0], [0.1, 0.1])
    wts = RivalWeights((Fraction(1), Fraction(1)), 1)
    for br in (best_linear_response(s, wts), brute_force_response(s, wts)):
        assert br.cell[1] != Tag.INSIDE
        assert br.payoff == Fraction(1, 2)


@settings(max_examples=60)
@given(games(max_m=6, max_d=3, min_n=2, max_n=3), st.data())
def test_matches_exhaustive_definition(g, data):
    sample, profile = g
    i = data.draw(st.integers(0, profile.n_players - 1))
    w = rival_weights(sample, profile, i)
    br = best_linear_response(sample, w)
    assert br.payoff == _exhaustive_best(sample, w)
    assert br.payoff == brute_force_response(sample, w).payoff


@settings(max_examples=60)
@given(games(max_m=10, max_d=3, min_n=2, max_n=4), st.data())
def test_certificate(g, data):
    sample, profile = g
    i = data.draw(st.integers(0, profile.n_players - 1))
    br = best_linear_response(sample, rival_weights(sample, profile, i))
    assert check_witness(sample, br.cell, br.strategy)
    assert empirical_payoffs(sample, profile.replace(i, br.strategy))[i] == br.payoff
    # the best response is at least as good as staying put
    assert br.payoff >= empirical_payoffs(sample, profile)[i]


def test_tie_break_is_lexicographic():
    # one user, any pattern feasible; all-inside wins over everything
    s = Sample([[1.0], [1.0]], [0.0, 0.0], [1.0, 1.0])
    w = RivalWeights((Fraction(0), Fraction(0)), 1)
    # zero weights: every feasible cell ties, the smallest is all-inside
    assert best_linear_response(s, w).cell == (Tag.INSIDE, Tag.INSIDE)
    assert brute_force_response(s, w).cell == (Tag.INSIDE, Tag.INSIDE)


def test_blr_agrees_with_brute_force_on_cells():
    rng = np.random.default_rng(3)
    for _ in range(25):
        m, d = int(rng.integers(1, 8)), int(rng.integers(1, 4))
        s = Sample(rng.normal(size=(m, d)), rng.normal(size=m), rng.choice([0.0, 0.3, 1.0], m))
        w = RivalWeights(tuple(Fraction(1, int(k)) for k in rng.integers(1, 4, m)), 3)
        a, b = best_linear_response(s, w), brute_force_response(s, w)
        assert (a.payoff, a.cell) == (b.payoff, b.cell)


def test_anti_rival_independence():
    rng = np.random.default_rng(11)
    X = np.column_stack([rng.uniform(0, 5, 12), np.ones(12)])
    s = Sample(X, 2 * X[:, 0] + rng.normal(size=12), np.full(12, 0.8))
    rival = LinearStrategy([2.0, 0.0])
    nudged = LinearStrategy([2.0, 1e-6])
    p1 = Profile((LinearStrategy([0.0, 0.0]), rival))
    p2 = Profile((LinearStrategy([0.0, 0.0]), nudged))
    assert np.array_equal(indicator_matrix(s, p1), indicator_matrix(s, p2))
    assert best_linear_response(s, rival_weights(s, p1, 0)).cell == \
        best_linear_response(s, rival_weights(s, p2, 0)).cell


def test_caps():
    rng = np.random.default_rng(0)
    s = Sample(rng.normal(size=(11, 2)), rng.normal(size=11), np.ones(11))
    w = RivalWeights((Fraction(1),) * 11, 1)
    with pytest.raises(ResourceCapError):
        brute_force_response(s, w)
    with pytest.raises(ResourceCapError):
        best_linear_response(s, w, cap=5)


def test_weight_length_checked():
    s = Sample([[1.0]], [0.0], [1.0])
    with pytest.raises(ValueError):
        best_linear_response(s, RivalWeights((Fraction(1), Fraction(1)), 1))


# -- eps-better responses ------------------------------------------------------

def _two_player_line_game():
    X = np.column_stack([np.arange(5.0), np.ones(5)])
    return Sample(X, X[:, 0], np.full(5, 0.25))


def test_no_response_at_best_response():
    s = _two_player_line_game()
    p = Profile((LinearStrategy([1.0, 0.0]), LinearStrategy([9.0, 9.0])))
    assert epsilon_better_response(s, p, 0, Fraction(1, 100)) is None


def test_eps_above_one_never_responds():
    s = _two_player_line_game()
    p = Profile.zeros(2, 2)
    assert epsilon_better_response(s, p, 0, Fraction(3, 2)) is None


def test_exact_eps_improvement_is_returned():
    s = _two_player_line_game()
    p = Profile((LinearStrategy([0.0, 0.0]), LinearStrategy([9.0, 9.0])))
    current = empirical_payoffs(s, p)[0]
    best = best_linear_response(s, rival_weights(s, p, 0)).payoff
    gain = best - current
    assert gain > 0
    h = epsilon_better_response(s, p, 0, gain)
    assert h is not None and empirical_payoffs(s, p.replace(0, h))[0] - current >= gain
    assert epsilon_better_response(s, p, 0, gain + Fraction(1, 1000)) is None


def test_eps_must_be_positive():
    with pytest.raises(ValueError):
        epsilon_better_response(_two_player_line_game(), Profile.zeros(2, 2), 0, 0)


# -- realizable fit ------------------------------------------------------------

def test_realizable_collinear():
    X = np.column_stack([[0.0, 1.0, 2.5, 4.0], np.ones(4)])
    s = Sample(X, 3 * X[:, 0] - 2, np.ones(4))
    r = realizable_fit(s)
    assert r.feasible
    assert np.allclose(r.witness.predict(s.X), s.y, atol=1e-9)


def test_realizable_contradiction():
    s = Sample([[1.0, 1.0], [1.0, 1.0]], [0.0, 1.0], [5.0, 5.0])
    assert not realizable_fit(s).feasible


def test_realizable_noiseless_generator():
    rng = np.random.default_rng(5)
    X = np.column_stack([rng.uniform(0, 5, (200, 2)), np.ones(200)])
    s = Sample(X, X @ np.array([1.5, -0.5, 2.0]), np.zeros(200))
    r = realizable_fit(s)
    assert r.feasible and np.max(np.abs(r.witness.predict(X) - s.y)) < 1e-8
