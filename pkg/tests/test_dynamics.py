import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from regeq.best_response import best_linear_response, rival_weights
from regeq.direct import direct_empirical_payoffs
from regeq.dynamics import (
    RANDOM_SWEEP,
    ROUND_ROBIN,
    DynamicsInvariantError,
    FiniteClassResponder,
    RealizabilityError,
    SampleSizeQuery,
    algorithm1,
    algorithm4,
    audit_pne,
    exact_eps,
    exact_pne,
    linear_pseudo_dimension,
    run_dynamics,
    sample_size,
    step_bound,
)
from regeq.game import Profile, Sample, empirical_payoffs, payoff_denominator
from regeq.synth import H0, H1, H_SAMPLE_TO_ZERO_AE, example1_sampler, realizable_linear_generator

mpmath.mp.dps = 50


def sample_size_oracle(eps, delta, d, N):
    e, dl = mpmath.mpf(eps), mpmath.mpf(delta)
    rhs = (320 * d / e**2 * mpmath.log(160 * d / e**2)
           + 160 * d * mpmath.log(2 * mpmath.e) / e**2
           + 16 / e**2 * mpmath.log(4 * N / dl))
    return int(mpmath.ceil(rhs))


# -- sample size ---------------------------------------------------------------

@pytest.mark.parametrize("eps, delta, d, N", [
    (0.25, 0.1, 4, 2), (0.1, 0.05, 2, 2), (0.5, 0.01, 6, 3), (0.05, 0.2, 1, 5), (0.9, 0.5, 10, 10),
])
def test_sample_size_matches_high_precision(eps, delta, d, N):
    assert sample_size(eps, delta, d, N) == sample_size_oracle(eps, delta, d, N)
    assert sample_size(SampleSizeQuery(eps, delta, d, N)) == sample_size_oracle(eps, delta, d, N)


_eps = st.floats(0.01, 0.99)
_delta = st.floats(0.001, 0.99)


@given(_eps, _eps, _delta, _delta, st.integers(1, 50), st.integers(1, 50), st.integers(1, 20), st.integers(1, 20))
def test_sample_size_monotone(e1, e2, d1, d2, k1, k2, n1, n2):
    lo_e, hi_e = sorted((e1, e2))
    lo_d, hi_d = sorted((d1, d2))
    assert sample_size(hi_e, d1, k1, n1) <= sample_size(lo_e, d1, k1, n1)
    assert sample_size(e1, hi_d, k1, n1) <= sample_size(e1, lo_d, k1, n1)
    assert sample_size(e1, d1, min(k1, k2), n1) <= sample_size(e1, d1, max(k1, k2), n1)
    assert sample_size(e1, d1, k1, min(n1, n2)) <= sample_size(e1, d1, k1, max(n1, n2))


@given(_eps, st.integers(1, 100))
def test_doubling_d_more_than_doubles_leading_term(eps, d):
    def lead(k):
        return 320 * k / eps**2 * math.log(160 * k / eps**2)
    assert lead(2 * d) > 2 * lead(d)


@pytest.mark.parametrize("bad", [(0, 0.1, 1, 1), (1, 0.1, 1, 1), (0.5, 0, 1, 1), (0.5, 1.5, 1, 1),
                                 (0.5, 0.1, 0, 1), (0.5, 0.1, 1.5, 1), (0.5, 0.1, 1, 0)])
def test_sample_size_ranges(bad):
    with pytest.raises(ValueError):
        sample_size(*bad)


def test_pseudo_dimension():
    assert linear_pseudo_dimension(1, True) == 2
    assert linear_pseudo_dimension(3, False) == 3


# -- dynamics ------------------------------------------------------------------

def _random_game(seed, m=15, N=2):
    rng = np.random.default_rng(seed)
    x = rng.uniform(0, 5, m)
    X = np.column_stack([x, np.ones(m)])
    y = np.where(rng.random(m) < 0.5, 2 * x + 1, -x + 6) + 0.3 * rng.normal(size=m)
    return Sample(X, y, np.full(m, 0.5)), Profile.zeros(N, 2)


def test_exact_eps_rounds_up_to_the_grid():
    s, _ = _random_game(0, m=10)
    q = Fraction(1, 20)
    assert exact_eps(s, 0.05, 2) == q
    assert exact_eps(s, 0.051, 2) == 2 * q
    assert exact_eps(s, Fraction(1, 1000), 3) == Fraction(1, 60)
    with pytest.raises(ValueError):
        exact_eps(s, 0, 2)


@pytest.mark.parametrize("seed", range(4))
@pytest.mark.parametrize("order", [ROUND_ROBIN, RANDOM_SWEEP])
def test_eps_dynamics_guarantees(seed, order):
    s, init = _random_game(seed, N=2 + seed % 2)
    eps = Fraction(1, 10)
    tr = run_dynamics(s, init, eps, order, seed=seed)
    N = init.n_players
    assert tr.n_steps <= step_bound(N, tr.eps)
    for st_ in tr.steps:
        assert st_.potential_after - st_.potential_before == st_.new_payoff - st_.old_payoff >= tr.eps
        assert float(st_.potential_after) <= math.log(N) + 1 + 1e-9
    # the end point is an eps-PNE
    assert all(g < tr.eps for g in audit_pne(s, tr.profile))
    assert tr.reason == "converged"


def test_already_at_equilibrium():
    s, init = _random_game(1)
    first = exact_pne(s, init)
    again = run_dynamics(s, first.profile, Fraction(1, 1000))
    assert again.n_steps == 0
    assert again.profile == first.profile


@pytest.mark.parametrize("seed, N", [(0, 2), (1, 3), (2, 2)])
def test_exact_mode_passes_audit(seed, N):
    s, init = _random_game(seed, m=14, N=N)
    tr = exact_pne(s, init)
    assert tr.reason == "exact"
    assert all(g == 0 for g in audit_pne(s, tr.profile))
    assert tr.n_steps <= math.ceil(s.m * payoff_denominator(N) * (math.log(N) + 1))
    if N <= 2:
        assert tr.n_steps <= math.ceil(s.m * N * (math.log(N) + 1))


def test_single_player_one_step():
    s, _ = _random_game(3)
    tr = exact_pne(s, Profile.zeros(1, 2))
    assert tr.n_steps <= 1
    best = best_linear_response(s, rival_weights(s, tr.profile, 0)).payoff
    assert empirical_payoffs(s, tr.profile)[0] == best


def test_different_orders_both_reach_equilibria():
    s, init = _random_game(5, N=3)
    a = exact_pne(s, init, ROUND_ROBIN)
    b = exact_pne(s, init, RANDOM_SWEEP, seed=9)
    for tr in (a, b):
        assert all(g == 0 for g in audit_pne(s, tr.profile))


def test_lying_responder_is_caught():
    s, init = _random_game(0)

    def liar(sample, profile, i, eps):
        return profile[i]  # claims an improvement but changes nothing
    with pytest.raises(DynamicsInvariantError):
        run_dynamics(s, init, Fraction(1, 10), responders=liar)


def test_unknown_order():
    s, init = _random_game(0)
    with pytest.raises(ValueError):
        run_dynamics(s, init, Fraction(1, 10), "backwards")


def test_responder_count_checked():
    s, init = _random_game(0)
    with pytest.raises(ValueError):
        run_dynamics(s, init, Fraction(1, 10), responders=[FiniteClassResponder([H0])])


@settings(max_examples=25)
@given(st.integers(0, 10_000), st.integers(1, 4))
def test_finite_class_dynamics_property(seed, N):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 25))
    s = Sample(rng.uniform(0, 2, (m, 1)), rng.integers(0, 2, m).astype(float), np.full(m, 0.5))
    cls = [H0, H1, H_SAMPLE_TO_ZERO_AE]
    init = Profile(tuple(cls[int(k)] for k in rng.integers(0, 3, N)))
    tr = run_dynamics(s, init, Fraction(1, 20), responders=FiniteClassResponder(cls))
    assert tr.n_steps <= step_bound(N, tr.eps)
    pay = empirical_payoffs(s, tr.profile)
    for i in range(N):
        for h in cls:
            assert empirical_payoffs(s, tr.profile.replace(i, h))[i] < pay[i] + tr.eps


# -- the sampling learners -----------------------------------------------------

def _example1_generator(m, rng):
    return example1_sampler(m, rng)


def test_algorithm1_with_a_finite_class():
    eps, delta, d, N = 0.8, 0.1, 3, 3
    cls = FiniteClassResponder([H0, H1, H_SAMPLE_TO_ZERO_AE])
    init = Profile((H0, H0, H0))
    profile, sample, trace = algorithm1(_example1_generator, eps, delta, d, N, seed=4,
                                        initial=init, responders=cls)
    assert sample.m == sample_size(eps / 4, delta, d, N)
    assert trace.eps >= Fraction(eps) / 2
    pay = empirical_payoffs(sample, profile)
    for i in range(N):
        for h in cls.candidates:
            assert empirical_payoffs(sample, profile.replace(i, h))[i] - pay[i] < Fraction(eps) / 2
    again = algorithm1(_example1_generator, eps, delta, d, N, seed=4, initial=init, responders=cls)
    assert again[1].same_as(sample) and again[2].steps == trace.steps


def test_algorithm4_realizable():
    eps, delta, N = 0.9, 0.1, 2
    gen = realizable_linear_generator([2.0, 1.0])
    d = N * linear_pseudo_dimension(1, True)
    profile, sample = algorithm4(gen, eps, delta, d, N, seed=1)
    assert sample.m == sample_size(eps / 2, delta, d, N)
    for h in profile:
        assert np.max(np.abs(h.predict(sample.X) - sample.y)) < 1e-7
    assert direct_empirical_payoffs(sample, profile) == (Fraction(1, 2), Fraction(1, 2))


def test_algorithm4_rejects_noisy_data():
    def noisy(m, rng):
        x = rng.uniform(0, 5, m)
        return Sample(np.column_stack([x, np.ones(m)]), 2 * x + rng.normal(size=m), np.zeros(m))
    with pytest.raises(RealizabilityError) as e:
        algorithm4(noisy, 0.9, 0.1, 4, 2, seed=0)
    assert e.value.player == 0
