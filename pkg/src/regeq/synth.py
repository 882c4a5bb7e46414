"""Seeded synthetic users: the four one-dimensional regression conditions and
the two-region distribution used to show that sample-fitted opponents can be
misled by a high-capacity player."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .game import Sample

LINEAR = "linear"
VSHAPE = "vshape"
XSHAPE = "xshape"
PIECEWISE = "piecewise"
EXAMPLE1 = "example1"
CONDITIONS = (LINEAR, VSHAPE, XSHAPE, PIECEWISE)
LEVELS = ("high", "medium", "low")

PRESET_PARAMS = {
    LINEAR: {"a": 2.0, "b": 1.0},
    VSHAPE: {"a": 5.0, "b": 1.0, "x0": 2.5},
    XSHAPE: {"a1": 5.0, "b1": 0.0, "a2": -5.0, "b2": 25.0},
    PIECEWISE: {"a1": 10.0, "b1": 1.0, "a2": 2.0, "b2": 18.0, "x0": 2.5},
}

TOLERANCES = {
    LINEAR: {"high": Fraction(3, 2), "medium": Fraction(2, 3), "low": Fraction(1, 3)},
    VSHAPE: {"high": Fraction(2), "medium": Fraction(1), "low": Fraction(1, 2)},
    XSHAPE: {"high": Fraction(2), "medium": Fraction(1), "low": Fraction(1, 2)},
    PIECEWISE: {"high": Fraction(3), "medium": Fraction(3, 2), "low": Fraction(1, 2)},
}


@dataclass(frozen=True)
class DistributionSpec:
    condition: str
    params: dict = field(default_factory=dict)
    x_range: tuple[float, float] = (0.0, 5.0)
    noise_sd: float = 1.0
    tolerance: float = 1.0
    seed: int | None = None

    def __post_init__(self):
        if self.condition not in CONDITIONS:
            raise ValueError(f"unknown condition {self.condition!r}; choose from {CONDITIONS}")
        lo, hi = self.x_range
        if not lo < hi:
            raise ValueError(f"empty x range {self.x_range}")
        if self.tolerance < 0:
            raise ValueError("tolerance must be nonnegative")
        if self.noise_sd < 0:
            raise ValueError("noise_sd must be nonnegative")
        missing = set(PRESET_PARAMS[self.condition]) - set(self.params)
        if missing:
            raise ValueError(f"{self.condition} needs parameters {sorted(missing)}")


def preset(condition: str, level: str = "high", seed: int | None = None) -> DistributionSpec:
    """The published parameters and tolerance for one condition and level."""
    if condition not in CONDITIONS:
        raise ValueError(f"unknown condition {condition!r}")
    if level not in LEVELS:
        raise ValueError(f"unknown tolerance level {level!r}; choose from {LEVELS}")
    return DistributionSpec(condition, dict(PRESET_PARAMS[condition]),
                            tolerance=float(TOLERANCES[condition][level]), seed=seed)


def _mean(spec: DistributionSpec, x: np.ndarray, rng) -> np.ndarray:
    p = spec.params
    if spec.condition == LINEAR:
        return p["a"] * x + p["b"]
    if spec.condition == VSHAPE:
        return p["a"] * np.abs(x - p["x0"]) + p["b"]
    if spec.condition == XSHAPE:
        first = rng.random(x.shape[0]) < 0.5
        return np.where(first, p["a1"] * x + p["b1"], p["a2"] * x + p["b2"])
    return np.where(x <= p["x0"], p["a1"] * x + p["b1"], p["a2"] * x + p["b2"])


def generate(spec: DistributionSpec, m: int, seed=None) -> Sample:
    """Draw ``m`` users: x uniform on the range, mean curve plus N(0, sd) noise.

    Raw one-dimensional instances are returned; call
    :meth:`Sample.with_intercept` before fitting affine strategies.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    rng = np.random.default_rng(spec.seed if seed is None else seed)
    lo, hi = spec.x_range
    x = rng.uniform(lo, hi, m)
    mean = _mean(spec, x, rng)
    y = mean + spec.noise_sd * rng.standard_normal(m)
    return Sample(x[:, None], y, np.full(m, float(spec.tolerance)))


def generator_for(spec: DistributionSpec, intercept: bool = True):
    """Adapter to the ``generator(m, rng)`` protocol of the learners."""
    def draw(m, rng):
        s = generate(replace(spec, seed=None), m, seed=rng)
        return s.with_intercept() if intercept else s
    return draw


def realizable_linear_generator(coeffs, x_range=(0.0, 5.0), intercept: bool = True):
    """Noiseless labels from a fixed line: every player can fit them exactly."""
    coeffs = np.asarray(coeffs, dtype=float)

    def draw(m, rng):
        n = coeffs.shape[0] - (1 if intercept else 0)
        X = rng.uniform(*x_range, size=(m, n))
        if intercept:
            X = np.column_stack([X, np.ones(m)])
        return Sample(X, X @ coeffs, np.zeros(m))
    return draw


# -- two-region distribution ----------------------------------------------

EXAMPLE1_TOLERANCE = 0.5


def example1_sampler(m: int, seed=None) -> Sample:
    """Half the mass on ``x in [0,1)`` with label 0, half on ``[1,2]`` with label 1."""
    if m < 1:
        raise ValueError("m must be at least 1")
    rng = np.random.default_rng(seed)
    upper = rng.random(m) < 0.5
    x = np.where(upper, rng.uniform(1.0, 2.0, m), rng.uniform(0.0, 1.0, m))
    return Sample(x[:, None], upper.astype(float), np.full(m, EXAMPLE1_TOLERANCE))


@dataclass(frozen=True)
class ConstantStrategy:
    value: float

    def predict(self, X):
        return np.full(np.asarray(X).shape[0], float(self.value))


@dataclass(frozen=True)
class IntervalIndicator:
    """Predicts 1 on ``[lo, hi]`` (first feature) and 0 elsewhere."""

    lo: float = 1.0
    hi: float = 2.0

    def predict(self, X):
        x = np.asarray(X, dtype=float)[:, 0]
        return ((x >= self.lo) & (x <= self.hi)).astype(float)


H0 = ConstantStrategy(0.0)
H1 = ConstantStrategy(1.0)
# away from the (measure-zero) sample the deceptive strategy equals this
H_SAMPLE_TO_ZERO_AE = IntervalIndicator(1.0, 2.0)

EXAMPLE1_PROFILES = {
    "profile-h": (H_SAMPLE_TO_ZERO_AE, H1, H1),
    "profile-h-prime": (H0, H1, H1),
}


def example1_exact_payoffs(tag: str) -> tuple[Fraction, Fraction, Fraction]:
    """Population payoffs of the two three-player profiles, in closed form.

    Each half of the mass is worth 1/2 and is split evenly among the players
    accurate on it.
    """
    if tag not in EXAMPLE1_PROFILES:
        raise ValueError(f"unknown profile {tag!r}; choose from {sorted(EXAMPLE1_PROFILES)}")
    half = Fraction(1, 2)
    profile = EXAMPLE1_PROFILES[tag]
    total = [Fraction(0)] * len(profile)
    # every strategy here is constant on each half, so one probe per half suffices
    for probe, label in ((0.5, 0.0), (1.5, 1.0)):
        hits = [abs(h.predict(np.array([[probe]]))[0] - label) <= EXAMPLE1_TOLERANCE
                for h in profile]
        k = sum(hits)
        for i, hit in enumerate(hits):
            if hit:
                total[i] += half / k
    return tuple(total)
