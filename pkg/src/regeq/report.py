"""Equilibrium reports: who satisfies which user, and every number needed to
re-derive the payoffs from the dataset and the final coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dynamics import DynamicsTrace, step_bound
from .game import LinearStrategy, Profile, Sample, indicator_matrix, payoffs_from_hits, potential_from_hits


def ownership_tag(column: Sequence[bool]) -> str:
    """Label of one user given which players satisfy it.

    ``both`` (two players) or ``all``, ``only-i``, ``none``; for three or
    more players a partial set is written ``some:1+3``.  Players are
    numbered from 1.
    """
    col = [bool(c) for c in column]
    n, k = len(col), sum(col)
    if k == 0:
        return "none"
    if k == n:
        return "both" if n == 2 else "all"
    if k == 1:
        return f"only-{col.index(True) + 1}"
    return "some:" + "+".join(str(i + 1) for i, c in enumerate(col) if c)


def ownership_tags(hits: np.ndarray) -> list[str]:
    return [ownership_tag(hits[:, j]) for j in range(hits.shape[1])]


def _frac(q: Fraction) -> dict:
    return {"exact": f"{q.numerator}/{q.denominator}", "decimal": float(q)}


@dataclass(frozen=True)
class EquilibriumReport:
    coefficients: list[list[float]]
    payoffs: tuple[Fraction, ...]
    potential: Fraction
    tags: list[str]
    trace: dict
    exact_pne: bool
    audit_gains: tuple[Fraction, ...] | None = None

    @classmethod
    def build(cls, sample: Sample, profile: Profile, trace: DynamicsTrace | None = None,
              audit_gains: Sequence[Fraction] | None = None) -> "EquilibriumReport":
        hits = indicator_matrix(sample, profile)
        summary = {}
        if trace is not None:
            summary = {
                "reason": trace.reason,
                "eps": _frac(trace.eps),
                "n_steps": trace.n_steps,
                "step_bound": step_bound(profile.n_players, trace.eps),
                "queries": trace.queries,
                "movers": [s.player + 1 for s in trace.steps],
            }
        exact = audit_gains is not None and all(g <= 0 for g in audit_gains)
        return cls(
            [h.coeffs.tolist() for h in profile],
            payoffs_from_hits(hits),
            potential_from_hits(hits),
            ownership_tags(hits),
            summary,
            exact,
            None if audit_gains is None else tuple(audit_gains),
        )

    @property
    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for t in self.tags:
            out[t] = out.get(t, 0) + 1
        return out

    def to_json(self) -> dict:
        d = {
            "n_players": len(self.coefficients),
            "m": len(self.tags),
            "coefficients": self.coefficients,
            "payoffs": [_frac(p) for p in self.payoffs],
            "potential": _frac(self.potential),
            "ownership_counts": self.counts,
            "ownership": self.tags,
            "trace": self.trace,
            "exact_pne": self.exact_pne,
        }
        if self.audit_gains is not None:
            d["audit_gains"] = [_frac(g) for g in self.audit_gains]
        return d


def recheck(report: dict, sample: Sample) -> list[str]:
    """Recompute a JSON report from its coefficients; list every mismatch."""
    profile = Profile(tuple(LinearStrategy(c) for c in report["coefficients"]))
    hits = indicator_matrix(sample, profile)
    problems = []
    pay = payoffs_from_hits(hits)
    if [Fraction(p["exact"]) for p in report["payoffs"]] != list(pay):
        problems.append("payoffs")
    if Fraction(report["potential"]["exact"]) != potential_from_hits(hits):
        problems.append("potential")
    if report["ownership"] != ownership_tags(hits):
        problems.append("ownership")
    if sum(report["ownership_counts"].values()) != sample.m:
        problems.append("ownership_counts")
    return problems
