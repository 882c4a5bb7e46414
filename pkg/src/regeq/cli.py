"""``regeq`` command line: synthetic data, dynamics runs, sample sizes, the
direct-attraction deviation search, self-verification and the realizable
learner.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 resource cap hit, 4 verification failure (or no witness found).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path

from . import checks
from .best_response import DEFAULT_BRUTE_FORCE_CAP, DEFAULT_CELL_CAP, ResourceCapError, realizable_fit
from .direct import DEFAULT_ETA, default_grid, deviation_search, direct_empirical_payoffs, example2_sampler, line_profile
from .dynamics import (
    RANDOM_SWEEP,
    ROUND_ROBIN,
    DynamicsInvariantError,
    RealizabilityError,
    algorithm4,
    audit_pne,
    exact_pne,
    run_dynamics,
    sample_size,
)
from .game import DimensionError, EmptySampleError, Profile, Sample, indicator_matrix
from .io import DataError, atomic_write, read_csv, sample_to_csv
from .plot import scatter_svg
from .pvf import LPNumericError
from .report import EquilibriumReport, ownership_tags
from .synth import CONDITIONS, EXAMPLE1, LEVELS, example1_sampler, generate, preset, realizable_linear_generator

OK, USAGE, DATA, RESOURCE, VERIFY = 0, 1, 2, 3, 4


class ConfigError(ValueError):
    def __init__(self, field: str, msg: str):
        super().__init__(f"{field}: {msg}")
        self.field = field


@dataclass(frozen=True)
class GameConfig:
    """Everything a dynamics run depends on; checked by :meth:`validate`."""

    n_players: int = 2
    intercept: bool = True
    eps: float | None = None  # None: exact dynamics at the payoff resolution
    delta: float = 0.1
    seed: int | None = None
    order: str = ROUND_ROBIN
    data: str | None = None
    condition: str | None = None
    level: str = "high"
    m: int = 100
    cell_cap: int = DEFAULT_CELL_CAP

    def validate(self) -> "GameConfig":
        if int(self.n_players) != self.n_players or self.n_players < 1:
            raise ConfigError("n_players", f"must be a positive integer, got {self.n_players}")
        if self.eps is not None and not 0 < self.eps < 1:
            raise ConfigError("eps", f"must lie in (0, 1), got {self.eps}")
        if not 0 < self.delta < 1:
            raise ConfigError("delta", f"must lie in (0, 1), got {self.delta}")
        if self.order not in (ROUND_ROBIN, RANDOM_SWEEP):
            raise ConfigError("order", f"must be {ROUND_ROBIN!r} or {RANDOM_SWEEP!r}")
        if (self.data is None) == (self.condition is None):
            raise ConfigError("data", "give exactly one of a dataset file or a synthetic condition")
        if self.condition is not None:
            if self.condition not in CONDITIONS + (EXAMPLE1,):
                raise ConfigError("condition", f"unknown {self.condition!r}")
            if self.condition != EXAMPLE1 and self.level not in LEVELS:
                raise ConfigError("level", f"unknown {self.level!r}; choose from {LEVELS}")
            if self.m < 1:
                raise ConfigError("m", "must be at least 1")
            if self.seed is None:
                raise ConfigError("seed", "required for synthetic data")
        if self.order == RANDOM_SWEEP and self.seed is None:
            raise ConfigError("seed", "required for the random order policy")
        if self.cell_cap < 1:
            raise ConfigError("cell_cap", "must be positive")
        return self

    @classmethod
    def from_json(cls, path) -> "GameConfig":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError("config", str(e)) from None
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown field")
        return cls(**raw)

    def load_sample(self) -> Sample:
        if self.data is not None:
            s = read_csv(self.data)
        elif self.condition == EXAMPLE1:
            s = example1_sampler(self.m, self.seed)
        else:
            s = generate(preset(self.condition, self.level), self.m, seed=self.seed)
        return s.with_intercept() if self.intercept else s


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _fraction(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None


def _emit(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        atomic_write(path, text)


# -- subcommands ---------------------------------------------------------------

def cmd_synth(a) -> int:
    if a.m < 1:
        raise ConfigError("m", "must be at least 1")
    if a.condition == EXAMPLE1:
        s = example1_sampler(a.m, a.seed)
    else:
        spec = preset(a.condition, a.level)
        if a.tolerance is not None:
            spec = replace(spec, tolerance=float(a.tolerance))
        s = generate(spec, a.m, seed=a.seed)
    _emit(a.out, sample_to_csv(s))
    return OK


def _config_from_args(a) -> GameConfig:
    base = GameConfig.from_json(a.config) if a.config else GameConfig()
    over = {f.name: getattr(a, f.name) for f in fields(GameConfig)
            if getattr(a, f.name, None) is not None}
    if a.no_intercept:
        over["intercept"] = False
    return replace(base, **over).validate()


def _trace_csv(trace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["iteration", "player", "old_payoff", "new_payoff", "potential_before", "potential_after"])
    for s in trace.steps:
        w.writerow([s.iteration, s.player + 1, s.old_payoff, s.new_payoff,
                    s.potential_before, s.potential_after])
    return buf.getvalue()


def cmd_dynamics(a) -> int:
    cfg = _config_from_args(a)
    sample = cfg.load_sample()
    initial = Profile.zeros(cfg.n_players, sample.dim)
    kw = dict(seed=cfg.seed, cap=cfg.cell_cap)
    if cfg.eps is None:
        trace = exact_pne(sample, initial, cfg.order, **kw)
        gains = audit_pne(sample, trace.profile, cap=cfg.cell_cap)
    else:
        trace = run_dynamics(sample, initial, cfg.eps, cfg.order, **kw)
        gains = None
    report = EquilibriumReport.build(sample, trace.profile, trace, gains)
    doc = report.to_json()
    doc["config"] = {f.name: getattr(cfg, f.name) for f in fields(cfg)}
    _emit(a.out, json.dumps(doc, indent=2) + "\n")
    if a.trace:
        atomic_write(a.trace, _trace_csv(trace))
    if a.plot:
        raw_dim = sample.dim - (1 if cfg.intercept else 0)
        if raw_dim != 1:
            print("plot skipped: only one-dimensional instances can be drawn", file=sys.stderr)
        else:
            lines = [(h.coeffs[0], h.coeffs[1] if cfg.intercept else 0.0) for h in trace.profile]
            atomic_write(a.plot, scatter_svg(sample.X[:, 0], sample.y, report.tags, lines))
    if cfg.eps is None and not report.exact_pne:
        print("audit failed: some player still has an improving response", file=sys.stderr)
        return VERIFY
    return OK


def cmd_sample_size(a) -> int:
    print(sample_size(a.eps, a.delta, a.d, a.players))
    return OK


def cmd_direct(a) -> int:
    if a.m < 1:
        raise ConfigError("m", "must be at least 1")
    if a.grid_n < 1 or not a.grid_lo <= a.grid_hi:
        raise ConfigError("grid", "need grid-n >= 1 and grid-lo <= grid-hi")
    if a.eta <= 0:
        raise ConfigError("eta", "must be positive")
    points = example2_sampler(a.m, a.seed)
    res = deviation_search(a.h, points, default_grid(a.grid_lo, a.grid_hi, a.grid_n), a.eta)
    pay = direct_empirical_payoffs(points.with_intercept(), line_profile(a.h, res.best))
    found = res.payoff >= a.threshold
    doc = {
        "h_fixed": list(a.h),
        "m": a.m,
        "seed": a.seed,
        "best_deviation": list(res.best),
        "deviation_payoff": {"exact": str(res.payoff), "decimal": float(res.payoff)},
        "payoffs": [{"exact": str(p), "decimal": float(p)} for p in pay],
        "threshold": {"exact": str(a.threshold), "decimal": float(a.threshold)},
        "n_candidates": int(res.candidates.shape[0]),
        "witness_found": bool(found),
    }
    _emit(a.out, json.dumps(doc, indent=2) + "\n")
    if a.candidates:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["a", "b", "payoff"])
        for (ca, cb), p in zip(res.candidates, res.payoffs):
            w.writerow([repr(float(ca)), repr(float(cb)), repr(float(p))])
        atomic_write(a.candidates, buf.getvalue())
    return OK if found else VERIFY


def cmd_verify(a) -> int:
    if not 1 <= a.m_cap <= DEFAULT_BRUTE_FORCE_CAP:
        raise ConfigError("m_cap", f"must lie in [1, {DEFAULT_BRUTE_FORCE_CAP}]")
    if a.d_cap < 1:
        raise ConfigError("d_cap", "must be positive")
    ok = True
    for line in checks.oracle_trials(a.trials, a.m_cap, a.d_cap, a.seed):
        print(line.text)
        ok &= line.passed
    for line in checks.potential_trials(a.deviations, a.seed):
        if not line.passed or a.verbose:
            print(line.text)
        ok &= line.passed
    print(f"summary: {'PASS' if ok else 'FAIL'}")
    return OK if ok else VERIFY


def cmd_realizable(a) -> int:
    if a.data:
        sample = read_csv(a.data)
        if not a.no_intercept:
            sample = sample.with_intercept()
        res = realizable_fit(sample)
        if not res.feasible:
            raise RealizabilityError(0)
        profile = Profile(tuple([res.witness] * a.players))
    else:
        gen = realizable_linear_generator(a.coeffs, intercept=not a.no_intercept)
        d = a.players * len(a.coeffs)
        profile, sample = algorithm4(gen, a.eps, a.delta, d, a.players, a.seed)
    pay = direct_empirical_payoffs(sample, profile)
    tags = ownership_tags(indicator_matrix(sample.with_tolerance(0.0), profile))
    doc = {
        "m": sample.m,
        "coefficients": [h.coeffs.tolist() for h in profile],
        "direct_payoffs": [{"exact": str(p), "decimal": float(p)} for p in pay],
        "ownership_counts": {t: tags.count(t) for t in sorted(set(tags))},
    }
    _emit(a.out, json.dumps(doc, indent=2) + "\n")
    return OK


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="regeq", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("synth", help="write a synthetic dataset as CSV")
    s.add_argument("--condition", required=True, choices=CONDITIONS + (EXAMPLE1,))
    s.add_argument("--level", default="high", choices=LEVELS)
    s.add_argument("--tolerance", type=_fraction, help="override the preset tolerance")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", default="-")
    s.set_defaults(run=cmd_synth)

    s = sub.add_parser("dynamics", help="run better-response dynamics and report the equilibrium")
    s.add_argument("--config", help="JSON file with GameConfig fields; flags override it")
    s.add_argument("--data", help="CSV dataset (header x1..xn,y,t)")
    s.add_argument("--condition", choices=CONDITIONS + (EXAMPLE1,))
    s.add_argument("--level", choices=LEVELS)
    s.add_argument("--m", type=int)
    s.add_argument("--players", dest="n_players", type=int)
    s.add_argument("--no-intercept", action="store_true")
    s.add_argument("--eps", type=float, help="eps-dynamics; omit for exact dynamics")
    s.add_argument("--delta", type=float)
    s.add_argument("--seed", type=int)
    s.add_argument("--order", choices=(ROUND_ROBIN, RANDOM_SWEEP))
    s.add_argument("--cell-cap", dest="cell_cap", type=int)
    s.add_argument("--out", default="-", help="JSON report path")
    s.add_argument("--trace", help="CSV of improving steps")
    s.add_argument("--plot", help="SVG scatter (one-dimensional data only)")
    s.set_defaults(run=cmd_dynamics)

    s = sub.add_parser("sample-size", help="print the sample size for eps, delta, d, N")
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--delta", type=float, required=True)
    s.add_argument("--d", type=int, required=True, help="sum of pseudo-dimensions")
    s.add_argument("--players", type=int, required=True)
    s.set_defaults(run=cmd_sample_size)

    s = sub.add_parser("direct", help="search a deviation against a fixed line on the three-square region")
    s.add_argument("--h", type=float, nargs=2, metavar=("A", "B"), default=(0.0, 1.0))
    s.add_argument("--m", type=int, default=20000)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--grid-lo", type=float, default=-10.0)
    s.add_argument("--grid-hi", type=float, default=10.0)
    s.add_argument("--grid-n", type=int, default=41)
    s.add_argument("--eta", type=float, default=DEFAULT_ETA)
    s.add_argument("--threshold", type=_fraction, default=Fraction(2, 3) - Fraction(1, 20))
    s.add_argument("--out", default="-")
    s.add_argument("--candidates", help="CSV of every candidate line and its payoff")
    s.set_defaults(run=cmd_direct)

    s = sub.add_parser("verify", help="compare best responses with brute force and check the potential identity")
    s.add_argument("--trials", type=int, default=50)
    s.add_argument("--m-cap", dest="m_cap", type=int, default=8)
    s.add_argument("--d-cap", dest="d_cap", type=int, default=3)
    s.add_argument("--deviations", type=int, default=1000)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--verbose", action="store_true")
    s.set_defaults(run=cmd_verify)

    s = sub.add_parser("realizable", help="run the realizable direct-attraction learner")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--coeffs", type=float, nargs="+", help="labelling line (slopes then intercept)")
    src.add_argument("--data", help="CSV dataset to interpolate")
    s.add_argument("--players", type=int, default=2)
    s.add_argument("--eps", type=float, default=0.5)
    s.add_argument("--delta", type=float, default=0.1)
    s.add_argument("--no-intercept", action="store_true")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", default="-")
    s.set_defaults(run=cmd_realizable)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (ConfigError, ValueError) as e:
        if isinstance(e, (DataError, DimensionError, EmptySampleError)):
            print(f"data error: {e}", file=sys.stderr)
            return DATA
        print(f"config error: {e}", file=sys.stderr)
        return USAGE
    except RealizabilityError as e:
        print(f"data error: {e}", file=sys.stderr)
        return DATA
    except (ResourceCapError, LPNumericError) as e:
        print(f"resource error: {e}", file=sys.stderr)
        return RESOURCE
    except DynamicsInvariantError as e:
        print(f"verification failure: {e}", file=sys.stderr)
        return VERIFY
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return DATA


if __name__ == "__main__":
    sys.exit(main())
