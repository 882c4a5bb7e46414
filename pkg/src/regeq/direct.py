"""Direct attraction: each user pays the player(s) closest to her label.

Tolerances play no role here and the game is constant-sum.  The module also
carries the three-square distribution on which no approximate pure
equilibrium exists between two line-fitting players, and a search for the
deviation witnessing that.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .game import EmptySampleError, LinearStrategy, Profile, Sample, payoff_denominator

DEFAULT_ETA = 1e-3


@dataclass(frozen=True, eq=False)
class PointLabel:
    x: np.ndarray
    y: float

    def __post_init__(self):
        x = np.array(self.x, dtype=float, ndmin=1)
        if not np.all(np.isfinite(x)) or not np.isfinite(self.y):
            raise ValueError("point and label must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", float(self.y))


@dataclass(frozen=True, eq=False)
class PointSet:
    """Column-wise labelled points (no tolerances)."""

    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = np.array(self.X, dtype=float, ndmin=2)
        y = np.array(self.y, dtype=float, ndmin=1)
        if X.shape[0] != y.shape[0]:
            raise ValueError("X and y lengths differ")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    def __len__(self):
        return self.X.shape[0]

    def __getitem__(self, j) -> PointLabel:
        return PointLabel(self.X[j], self.y[j])

    def __iter__(self):
        return (self[j] for j in range(len(self)))

    def with_intercept(self) -> "PointSet":
        return PointSet(np.column_stack([self.X, np.ones(len(self))]), self.y)


def as_points(points) -> PointSet:
    if isinstance(points, PointSet):
        return points
    if isinstance(points, Sample):
        return PointSet(points.X, points.y)
    points = list(points)
    if not points:
        return PointSet(np.zeros((0, 1)), np.zeros(0))
    return PointSet(np.stack([p.x for p in points]), np.array([p.y for p in points]))


def _errors(P: PointSet, profile) -> np.ndarray:
    return np.stack([np.abs(h.predict(P.X) - P.y) for h in profile])


def winners(z: PointLabel, profile: Profile) -> set[int]:
    """Players whose prediction error on ``z`` is minimal (ties included)."""
    err = _errors(PointSet(z.x[None, :], [z.y]), profile)[:, 0]
    return set(np.flatnonzero(err <= err.min()).tolist())


def _payoffs_from_errors(err: np.ndarray) -> tuple[Fraction, ...]:
    N, m = err.shape
    if m == 0:
        raise EmptySampleError("direct payoffs need at least one point")
    best = err <= err.min(axis=0)
    counts = best.sum(axis=0)
    L = payoff_denominator(N)
    out = []
    for row in best:
        by_k = np.bincount(counts[row], minlength=N + 1)
        out.append(Fraction(sum(int(c) * (L // k) for k, c in enumerate(by_k) if k), L * m))
    return tuple(out)


def direct_empirical_payoffs(points, profile: Profile) -> tuple[Fraction, ...]:
    """Average credit when every point pays its most accurate player(s).

    ``points`` may be a :class:`PointSet`, a list of :class:`PointLabel`, or a
    :class:`Sample` (whose tolerances are ignored).
    """
    return _payoffs_from_errors(_errors(as_points(points), profile))


# -- the three-square region ------------------------------------------------

@dataclass(frozen=True)
class Square:
    x0: float
    y0: float
    side: float = 1.0

    def contains(self, x, y):
        return ((x >= self.x0) & (x <= self.x0 + self.side)
                & (y >= self.y0) & (y <= self.y0 + self.side))

    def crossed_by(self, a: float, b: float) -> bool:
        """Does the line ``y = a x + b`` meet the closed square?"""
        lo = min(a * self.x0, a * (self.x0 + self.side)) + b
        hi = max(a * self.x0, a * (self.x0 + self.side)) + b
        return hi >= self.y0 and lo <= self.y0 + self.side


@dataclass(frozen=True)
class RegionU:
    left: Square = Square(0.0, 1.0)
    center: Square = Square(1.0, 0.0)
    right: Square = Square(2.0, 1.0)

    @property
    def squares(self) -> tuple[Square, Square, Square]:
        return (self.left, self.center, self.right)

    @property
    def area(self) -> float:
        return sum(s.side ** 2 for s in self.squares)

    def contains(self, x, y):
        return self.left.contains(x, y) | self.center.contains(x, y) | self.right.contains(x, y)

    def which(self, x, y) -> np.ndarray:
        """Index 0/1/2 of the containing square, -1 outside."""
        out = np.full(np.shape(x), -1)
        for k, s in reversed(list(enumerate(self.squares))):
            out = np.where(s.contains(x, y), k, out)
        return out


U = RegionU()


def example2_sampler(m: int, seed=None, region: RegionU = U) -> PointSet:
    """Uniform points on the union of three unit squares (raw 1-D instances)."""
    if m < 1:
        raise ValueError("m must be at least 1")
    rng = np.random.default_rng(seed)
    sq = rng.integers(0, 3, m)
    corners = np.array([[s.x0, s.y0] for s in region.squares])
    pts = corners[sq] + rng.random((m, 2))
    return PointSet(pts[:, :1], pts[:, 1])


# -- deviation search ---------------------------------------------------------

def default_grid(lo: float = -10.0, hi: float = 10.0, n: int = 41) -> np.ndarray:
    a, b = np.meshgrid(np.linspace(lo, hi, n), np.linspace(lo, hi, n), indexing="ij")
    return np.column_stack([a.ravel(), b.ravel()])


def analytic_candidates(h_fixed: Sequence[float], eta: float = DEFAULT_ETA,
                        pivots: Sequence[float] = (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0)
                        ) -> np.ndarray:
    """Lines hugging ``h_fixed``: parallel shifts, small rotations about points
    on it, and near-horizontal lines just above ``y = 1``."""
    a, b = map(float, h_fixed)
    cands = [(a, b + eta), (a, b - eta), (a, b + 3 * eta), (a, b - 3 * eta),
             (0.0, 1.0 + eta), (0.0, 1.0 + 3 * eta)]
    for px in pivots:
        for da in (eta, -eta):
            # rotate about (px, a*px + b)
            cands.append((a + da, b - da * px))
    return np.array(cands)


def _line_payoffs(x: np.ndarray, y: np.ndarray, fixed, cands: np.ndarray) -> np.ndarray:
    """Deviator's direct payoff (as twice-count numerators) for each candidate."""
    e_fixed = np.abs(fixed[0] * x + fixed[1] - y)
    out = np.empty(cands.shape[0], dtype=np.int64)
    chunk = max(1, 2_000_000 // max(1, x.shape[0]))
    for s in range(0, cands.shape[0], chunk):
        c = cands[s:s + chunk]
        e = np.abs(c[:, :1] * x[None, :] + c[:, 1:] - y[None, :])
        out[s:s + chunk] = 2 * (e < e_fixed).sum(axis=1) + (e == e_fixed).sum(axis=1)
    return out


@dataclass(frozen=True)
class DeviationResult:
    best: tuple[float, float]
    payoff: Fraction
    candidates: np.ndarray
    payoffs: np.ndarray  # float, one per candidate


def deviation_search(h_fixed: Sequence[float], points, grid: np.ndarray | None = None,
                     eta: float = DEFAULT_ETA) -> DeviationResult:
    """Best reply line against ``h_fixed = (a, b)`` among grid and analytic candidates.

    A witness finder, not an optimiser: it evaluates the deviator's direct
    payoff on ``points`` for every candidate line and returns the best (ties
    go to the lexicographically smallest ``(a, b)``).
    """
    P = as_points(points)
    if len(P) == 0:
        raise EmptySampleError("deviation search needs points")
    if P.X.shape[1] != 1:
        raise ValueError("deviation search works with one-dimensional instances")
    if grid is None:
        grid = default_grid()
    grid = np.asarray(grid, dtype=float).reshape(-1, 2)
    if grid.shape[0] == 0:
        raise ValueError("empty candidate grid")
    cands = np.vstack([grid, analytic_candidates(h_fixed, eta)])
    fixed = np.asarray(h_fixed, dtype=float)
    nums = _line_payoffs(P.X[:, 0], P.y, fixed, cands)
    top = nums.max()
    tied = np.flatnonzero(nums == top)
    k = tied[np.lexsort((cands[tied, 1], cands[tied, 0]))[0]]
    m = len(P)
    return DeviationResult((float(cands[k, 0]), float(cands[k, 1])),
                           Fraction(int(top), 2 * m), cands, nums / (2 * m))


def line_profile(*lines) -> Profile:
    return Profile(tuple(LinearStrategy(np.asarray(l, dtype=float)) for l in lines))
