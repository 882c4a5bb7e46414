"""Competitive regression: players pick linear predictors and each user
credits the players whose prediction lands within its tolerance.

The package computes exact empirical payoffs and the potential, exact best
linear responses by enumerating realisable inside/above/below patterns,
better-response dynamics that end at (approximate) pure equilibria, the
sample size that makes empirical equilibria approximately correct, the
synthetic regression conditions, and the direct-attraction variant in which
only the most accurate player is paid.
"""

from .best_response import (
    BestResponseResult,
    ResourceCapError,
    RivalWeights,
    best_linear_response,
    brute_force_response,
    epsilon_better_response,
    realizable_fit,
    rival_weights,
)
from .direct import (
    PointLabel,
    PointSet,
    RegionU,
    U,
    deviation_search,
    direct_empirical_payoffs,
    example2_sampler,
    winners,
)
from .dynamics import (
    RANDOM_SWEEP,
    ROUND_ROBIN,
    DynamicsInvariantError,
    DynamicsTrace,
    FiniteClassResponder,
    RealizabilityError,
    SampleSizeQuery,
    algorithm1,
    algorithm4,
    audit_pne,
    exact_pne,
    run_dynamics,
    sample_size,
    step_bound,
)
from .game import (
    DimensionError,
    EmptySampleError,
    Example,
    LinearStrategy,
    Profile,
    Sample,
    empirical_payoffs,
    indicator,
    payoff_quantum,
    potential,
    weight,
)
from .pvf import LPNumericError, PVFResult, Tag, solve_pvf
from .synth import DistributionSpec, example1_exact_payoffs, example1_sampler, generate, preset

__version__ = "0.1.0"
