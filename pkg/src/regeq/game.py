"""Users, samples, strategies and the shared-credit payoff machinery.

A user is a triple ``(x, y, t)``: instance, label and tolerance.  A player
satisfies the user when her prediction lands within ``t`` of ``y``; a user
satisfied by ``k`` players splits one unit of credit evenly among them.

Payoffs and the potential are exact :class:`fractions.Fraction` values.
Predictions are floating point; the accuracy test allows an absolute slack of
:data:`INDICATOR_ATOL` so that witnesses lying on a tube boundary are not
lost to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Protocol, Sequence

import numpy as np

INDICATOR_ATOL = 1e-9


class DimensionError(ValueError):
    """Instance and strategy dimensions disagree."""


class EmptySampleError(ValueError):
    """An operation that averages over users received none."""


class Predictor(Protocol):
    def predict(self, X: np.ndarray) -> np.ndarray: ...


def _frozen_array(a, ndim: int, name: str) -> np.ndarray:
    arr = np.array(a, dtype=float, ndmin=ndim)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Example:
    x: np.ndarray
    y: float
    t: float

    def __post_init__(self):
        object.__setattr__(self, "x", _frozen_array(self.x, 1, "x"))
        y, t = float(self.y), float(self.t)
        if not np.isfinite(y) or not np.isfinite(t):
            raise ValueError("label and tolerance must be finite")
        if t < 0:
            raise ValueError(f"tolerance must be nonnegative, got {t}")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "t", t)


@dataclass(frozen=True, eq=False)
class Sample:
    """An ordered batch of users stored column-wise.

    ``X`` has shape ``(m, n)``.  Use :meth:`with_intercept` to append the
    constant feature that turns homogeneous strategies into affine ones.
    """

    X: np.ndarray
    y: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        X = _frozen_array(self.X, 2, "X")
        y = _frozen_array(self.y, 1, "y")
        t = _frozen_array(self.t, 1, "t")
        if X.shape[0] == 0:
            raise EmptySampleError("a sample needs at least one example")
        if not (X.shape[0] == y.shape[0] == t.shape[0]):
            raise ValueError(
                f"length mismatch: X has {X.shape[0]} rows, y {y.shape[0]}, t {t.shape[0]}"
            )
        if np.any(t < 0):
            raise ValueError("tolerances must be nonnegative")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "t", t)

    @classmethod
    def from_examples(cls, examples: Iterable[Example]) -> "Sample":
        examples = list(examples)
        if not examples:
            raise EmptySampleError("a sample needs at least one example")
        dims = {e.x.shape[0] for e in examples}
        if len(dims) != 1:
            raise DimensionError(f"examples have mixed dimensions {sorted(dims)}")
        return cls(
            np.stack([e.x for e in examples]),
            np.array([e.y for e in examples]),
            np.array([e.t for e in examples]),
        )

    @property
    def m(self) -> int:
        return self.X.shape[0]

    @property
    def dim(self) -> int:
        return self.X.shape[1]

    def __len__(self) -> int:
        return self.m

    def __getitem__(self, j: int) -> Example:
        return Example(self.X[j], self.y[j], self.t[j])

    @property
    def examples(self) -> list[Example]:
        return [self[j] for j in range(self.m)]

    def with_intercept(self) -> "Sample":
        return Sample(np.column_stack([self.X, np.ones(self.m)]), self.y, self.t)

    def with_tolerance(self, t) -> "Sample":
        return Sample(self.X, self.y, np.broadcast_to(np.asarray(t, float), (self.m,)))

    def same_as(self, other: "Sample") -> bool:
        return (
            self.X.shape == other.X.shape
            and np.array_equal(self.X, other.X)
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.t, other.t)
        )


@dataclass(frozen=True, eq=False)
class LinearStrategy:
    """A coefficient vector; predicts ``<coeffs, x>``."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen_array(self.coeffs, 1, "coeffs"))

    @classmethod
    def zeros(cls, d: int) -> "LinearStrategy":
        return cls(np.zeros(d))

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.dim:
            raise DimensionError(
                f"strategy has dimension {self.dim}, instances have {X.shape[-1]}"
            )
        return X @ self.coeffs

    def __eq__(self, other):
        if not isinstance(other, LinearStrategy):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self):
        return f"LinearStrategy({self.coeffs.tolist()})"


@dataclass(frozen=True)
class Profile:
    strategies: tuple

    def __post_init__(self):
        strategies = tuple(self.strategies)
        if not strategies:
            raise ValueError("a profile needs at least one player")
        dims = {h.dim for h in strategies if isinstance(h, LinearStrategy)}
        if len(dims) > 1:
            raise DimensionError(f"linear strategies have mixed dimensions {sorted(dims)}")
        object.__setattr__(self, "strategies", strategies)

    @classmethod
    def zeros(cls, n_players: int, d: int) -> "Profile":
        return cls(tuple(LinearStrategy.zeros(d) for _ in range(n_players)))

    @property
    def n_players(self) -> int:
        return len(self.strategies)

    def __len__(self):
        return len(self.strategies)

    def __getitem__(self, i: int):
        return self.strategies[i]

    def __iter__(self):
        return iter(self.strategies)

    def replace(self, i: int, h) -> "Profile":
        s = list(self.strategies)
        s[i] = h
        return Profile(tuple(s))


def predict(h: LinearStrategy, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionError("predict expects a single instance vector")
    return float(h.predict(x[None, :])[0])


def _accurate(pred, y, t):
    return np.abs(pred - y) <= t + INDICATOR_ATOL


def indicator(z: Example, h: Predictor) -> int:
    pred = h.predict(z.x[None, :])[0]
    return int(_accurate(pred, z.y, z.t))


def indicator_matrix(sample: Sample, profile: Profile) -> np.ndarray:
    """Boolean ``(N, m)`` matrix of who satisfies whom."""
    return np.stack([_accurate(h.predict(sample.X), sample.y, sample.t) for h in profile])


def weight(z: Example, profile: Profile, i: int) -> Fraction:
    if not 0 <= i < profile.n_players:
        raise IndexError(f"player {i} not in profile of {profile.n_players}")
    hits = [indicator(z, h) for h in profile]
    if not hits[i]:
        return Fraction(0)
    return Fraction(1, sum(hits))


@lru_cache(maxsize=None)
def payoff_denominator(n_players: int) -> int:
    """lcm(1..N): every per-user credit is an integer multiple of 1/lcm."""
    return lcm(*range(1, n_players + 1))


@lru_cache(maxsize=None)
def _harmonic_table(n_players: int) -> np.ndarray:
    L = payoff_denominator(n_players)
    # table[k] = L * (1 + 1/2 + ... + 1/k), an integer
    return np.array([sum(L // q for q in range(1, k + 1)) for k in range(n_players + 1)],
                    dtype=object)


def payoffs_from_hits(hits: np.ndarray) -> tuple[Fraction, ...]:
    """Exact empirical payoffs from a boolean ``(N, m)`` hit matrix."""
    N, m = hits.shape
    if m == 0:
        raise EmptySampleError("empirical payoffs need a nonempty sample")
    L = payoff_denominator(N)
    counts = hits.sum(axis=0)
    out = []
    for row in hits:
        by_k = np.bincount(counts[row], minlength=N + 1)
        out.append(Fraction(sum(int(c) * (L // k) for k, c in enumerate(by_k) if k), L * m))
    return tuple(out)


def empirical_payoffs(sample: Sample, profile: Profile) -> tuple[Fraction, ...]:
    return payoffs_from_hits(indicator_matrix(sample, profile))


def potential_from_hits(hits: np.ndarray) -> Fraction:
    N, m = hits.shape
    if m == 0:
        raise EmptySampleError("the potential needs a nonempty sample")
    table = _harmonic_table(N)
    counts = hits.sum(axis=0)
    total = sum(int(table[k]) * int(c) for k, c in enumerate(np.bincount(counts, minlength=N + 1)))
    return Fraction(total, payoff_denominator(N) * m)


def potential(sample: Sample, profile: Profile) -> Fraction:
    """Sum over users of the harmonic number of their satisfier count, over m."""
    return potential_from_hits(indicator_matrix(sample, profile))


def payoff_quantum(m: int, n_players: int) -> Fraction:
    """Smallest possible positive payoff change under a unilateral deviation.

    Credits live in ``{1, 1/2, ..., 1/N}`` so differences are multiples of
    ``1 / (m * lcm(1..N))``; for ``N >= 3`` this is finer than ``1/(mN)``.
    """
    return Fraction(1, m * payoff_denominator(n_players))


def exact(value) -> Fraction:
    """Exact rational for a threshold; floats are read as their shortest
    decimal form, so ``0.05`` becomes ``1/20`` rather than the binary value."""
    return Fraction(repr(value)) if isinstance(value, float) else Fraction(value)


def as_profile(strategies: Sequence) -> Profile:
    return strategies if isinstance(strategies, Profile) else Profile(tuple(strategies))
