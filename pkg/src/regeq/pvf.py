"""Partial vector feasibility.

Given a sample and a tag per user (inside the tube, strictly above it,
strictly below it, or unconstrained), find a linear strategy realising the
tags.  Strictness is enforced with a uniform margin: the LP maximises a
slack ``s`` in ``[0, 1]`` shared by all above/below rows and the tag vector
is declared feasible when the optimum reaches ``sigma``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Optional, Sequence

import numpy as np

from . import _simplex
from .game import DimensionError, LinearStrategy, Sample

DEFAULT_SIGMA = 1e-7


class Tag(IntEnum):
    # order matters: ties in the best response are broken lexicographically
    INSIDE = _simplex.INSIDE
    ABOVE = _simplex.ABOVE
    BELOW = _simplex.BELOW
    FREE = _simplex.FREE

    @property
    def symbol(self) -> str:
        return "1ab0"[self.value]


class LPNumericError(RuntimeError):
    """The LP solver failed for numerical reasons (not a verdict of infeasibility)."""


@dataclass(frozen=True, eq=False)
class PVFResult:
    witness: Optional[LinearStrategy]
    slack: float = 0.0

    @property
    def feasible(self) -> bool:
        return self.witness is not None

    def __bool__(self):
        return self.feasible


def as_tags(v: Sequence) -> np.ndarray:
    """Coerce tags (Tag members, ints or a ``"1ab0"`` string) to an int8 array."""
    if isinstance(v, str):
        v = ["1ab0".index(c) for c in v]
    arr = np.asarray([int(g) for g in v], dtype=np.int8)
    if arr.size and (arr.min() < 0 or arr.max() > 3):
        raise ValueError("tags must be INSIDE, ABOVE, BELOW or FREE")
    return arr


def solve_pvf(sample: Sample, v, sigma: float = DEFAULT_SIGMA) -> PVFResult:
    """Find a strategy realising the tag vector ``v``, or report infeasibility.

    Raises :class:`LPNumericError` when the solver cannot certify either
    outcome.
    """
    tags = as_tags(v)
    if tags.shape[0] != sample.m:
        raise DimensionError(f"tag vector has length {tags.shape[0]}, sample has {sample.m}")
    status, h, s = _simplex.pvf_kernel(sample.X, sample.y, sample.t, tags, float(sigma))
    if status == _simplex.NUMERIC:
        raise LPNumericError(f"LP failed on tag vector {tags_str(tags)}")
    if status != _simplex.FEASIBLE:
        return PVFResult(None, float(s))
    return PVFResult(LinearStrategy(h), float(s))


def check_witness(sample: Sample, v, h: LinearStrategy, sigma: float = DEFAULT_SIGMA,
                  atol: float = 1e-9) -> bool:
    """Directly re-check every constraint of ``v`` against ``h``."""
    tags = as_tags(v)
    r = h.predict(sample.X) - sample.y
    t = sample.t
    scale = atol * (1.0 + np.abs(sample.y) + t)
    ok_in = np.abs(r) <= t + scale
    ok_ab = r >= t + sigma - scale
    ok_bl = r <= -t - sigma + scale
    ok = np.where(tags == Tag.INSIDE, ok_in,
                  np.where(tags == Tag.ABOVE, ok_ab,
                           np.where(tags == Tag.BELOW, ok_bl, True)))
    return bool(np.all(ok))


def tags_str(v) -> str:
    return "".join("1ab0"[int(g)] for g in v)
