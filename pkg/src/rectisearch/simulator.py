"""Randomized trials, aggregate statistics and per-run bound checks.

Instances follow the experimental protocol: every POI coordinate is
uniform in ``[0, n]``. By default (``frame="centered"``) the search point
starts at the middle of that box, so a session of radius ``n / 2`` covers
it; ``frame="origin"`` starts at the corner with radius ``n``. Metrics are
normalized by ``log2(n)`` of the box side and by the true nearest distance.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .geometry import Metric, Point, ceil_log2, distance
from .strategies import check_supported, run_strategy, split_algo
from .world import ProblemConfig, RunMetrics, delta_min, make_session, sealed_oracle

__all__ = [
    "TrialPlan",
    "Moments",
    "AggregateStats",
    "TrialOutcome",
    "sample_pois",
    "trial_rng",
    "build_trial",
    "run_trial",
    "run_trials",
    "check_bounds",
    "facet_hit_probability",
    "results_rows",
    "write_results",
    "METRIC_NAMES",
]

METRIC_NAMES = ("P_norm", "D_norm", "R_norm")
CSV_FIELDS = ("algo", "k", "n", "metric", "trials", "seed", "stat") + METRIC_NAMES
FRAMES = ("centered", "origin")

# process pools only pay off once there is real work to split
_MIN_TRIALS_PER_WORKER = 64


@dataclass(frozen=True)
class TrialPlan:
    cfg: ProblemConfig
    algo: str
    trials: int
    poi_count: int = 1
    seed: int = 0
    min_origin_distance: float = 1.0
    frame: str = "centered"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.poi_count < 1:
            raise ValueError(f"poi_count must be >= 1, got {self.poi_count}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not 0 <= self.min_origin_distance < self.search_radius:
            raise ValueError("min_origin_distance must lie in [0, search radius)")
        if self.frame not in FRAMES:
            raise ValueError(f"frame must be one of {FRAMES}, got {self.frame!r}")

    @property
    def search_radius(self) -> float:
        return self.cfg.n / 2 if self.frame == "centered" else self.cfg.n

    @property
    def start(self) -> Point:
        c = self.cfg.n / 2 if self.frame == "centered" else 0.0
        return (c,) * self.cfg.k

    def session_config(self) -> ProblemConfig:
        return self.cfg.with_n(self.search_radius)


class Moments:
    """Count, mean, M2 and max of a stream; merges like a commutative monoid."""

    __slots__ = ("count", "mean", "m2", "max")

    def __init__(self, count: int = 0, mean: float = 0.0, m2: float = 0.0, max: float = -math.inf):
        self.count = count
        self.mean = mean
        self.m2 = m2
        self.max = max

    @classmethod
    def of(cls, values: Iterable[float]) -> "Moments":
        m = cls()
        for v in values:
            m.add(v)
        return m

    def add(self, x: float) -> None:
        self.count += 1
        d = x - self.mean
        self.mean += d / self.count
        self.m2 += d * (x - self.mean)
        if x > self.max:
            self.max = x

    def merge(self, other: "Moments") -> "Moments":
        if other.count == 0:
            return Moments(self.count, self.mean, self.m2, self.max)
        if self.count == 0:
            return Moments(other.count, other.mean, other.m2, other.max)
        n = self.count + other.count
        d = other.mean - self.mean
        mean = self.mean + d * other.count / n
        m2 = self.m2 + other.m2 + d * d * self.count * other.count / n
        return Moments(n, mean, m2, max(self.max, other.max))

    @property
    def std(self) -> float:
        """Population standard deviation."""
        return math.sqrt(self.m2 / self.count) if self.count else 0.0

    def __repr__(self):
        return f"Moments(count={self.count}, mean={self.mean!r}, std={self.std!r}, max={self.max!r})"


@dataclass
class AggregateStats:
    plan: Optional[TrialPlan]
    moments: Dict[str, Moments]
    violations: List[Tuple[int, str]] = field(default_factory=list)

    @property
    def count(self) -> int:
        return self.moments["P_norm"].count

    def mean(self, metric: str) -> float:
        return self.moments[metric].mean

    def max(self, metric: str) -> float:
        return self.moments[metric].max

    def std(self, metric: str) -> float:
        return self.moments[metric].std

    def merge(self, other: "AggregateStats") -> "AggregateStats":
        moments = {m: self.moments[m].merge(other.moments[m]) for m in METRIC_NAMES}
        violations = sorted(self.violations + other.violations)
        return AggregateStats(self.plan or other.plan, moments, violations)


@dataclass
class TrialOutcome:
    index: int
    metrics: RunMetrics
    delta_min: float
    values: Tuple[float, float, float]
    violations: List[str]


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent PCG64 stream for trial ``index`` of a plan seeded with ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def sample_pois(
    cfg: ProblemConfig,
    poi_count: int,
    min_origin_distance: float,
    rng: np.random.Generator,
    *,
    start: Optional[Sequence[float]] = None,
    radius: Optional[float] = None,
) -> List[Point]:
    """``poi_count`` points with coordinates uniform in ``[0, n]``.

    A point closer than ``min_origin_distance`` to ``start`` (default the
    origin) is redrawn. With ``radius`` given, the whole set is redrawn
    until at least one point lies within ``radius`` of ``start``.
    """
    if not min_origin_distance < cfg.n:
        raise ValueError("min_origin_distance must be below n")
    start = tuple(start) if start is not None else (0.0,) * cfg.k
    while True:
        pois = []
        for _ in range(poi_count):
            while True:
                p = tuple(rng.uniform(0.0, cfg.n, cfg.k).tolist())
                if distance(p, start, cfg.metric) >= min_origin_distance:
                    break
            pois.append(p)
        if radius is None or any(distance(p, start, cfg.metric) <= radius for p in pois):
            return pois


def build_trial(plan: TrialPlan, index: int) -> List[Point]:
    """POIs of trial ``index`` in session coordinates (search point at the origin)."""
    rng = trial_rng(plan.seed, index)
    start = plan.start
    raw = sample_pois(
        plan.cfg,
        plan.poi_count,
        plan.min_origin_distance,
        rng,
        start=start,
        radius=plan.search_radius,
    )
    return [tuple(c - s for c, s in zip(p, start)) for p in raw]


def run_trial(plan: TrialPlan, index: int) -> TrialOutcome:
    cfg = plan.session_config()
    pois = build_trial(plan, index)
    session = make_session(pois, cfg)
    metrics = run_strategy(plan.algo, session, cfg)
    if not metrics.success:
        raise RuntimeError(
            f"{plan.algo} failed to localize a POI (trial {index}, seed {plan.seed}, pois {pois})"
        )
    dmin = delta_min(sealed_oracle(session))
    log_n = math.log2(plan.cfg.n)
    values = (metrics.P / log_n, metrics.D / dmin, metrics.R_max / log_n)
    return TrialOutcome(index, metrics, dmin, values, check_bounds(metrics, cfg, plan.algo, dmin))


def _run_range(plan: TrialPlan, lo: int, hi: int) -> Tuple[np.ndarray, List[Tuple[int, str]]]:
    values = np.empty((hi - lo, 3))
    violations = []
    for i in range(lo, hi):
        out = run_trial(plan, i)
        values[i - lo] = out.values
        violations.extend((i, name) for name in out.violations)
    return values, violations


def _workers(trials: int, workers: Optional[int]) -> int:
    if workers is None:
        raw = os.environ.get("RECTISEARCH_THREADS", "0").strip() or "0"
        try:
            workers = int(raw)
        except ValueError:
            raise ValueError(f"RECTISEARCH_THREADS must be an integer, got {raw!r}") from None
    if workers <= 0:
        workers = os.cpu_count() or 1
    return max(1, min(workers, trials // _MIN_TRIALS_PER_WORKER))


def run_trials(plan: TrialPlan, *, workers: Optional[int] = None) -> AggregateStats:
    """Run every trial of ``plan`` and aggregate the normalized metrics.

    Per-trial values are gathered by trial index and folded in index order,
    so the result does not depend on how many worker processes ran them.
    ``workers`` defaults to ``RECTISEARCH_THREADS``; unset or 0 means one
    per CPU.
    """
    cfg = plan.session_config()
    check_supported(plan.algo, cfg.k, cfg.metric)
    nworkers = _workers(plan.trials, workers)
    if nworkers == 1:
        values, violations = _run_range(plan, 0, plan.trials)
    else:
        bounds = np.linspace(0, plan.trials, nworkers + 1).astype(int)
        with ProcessPoolExecutor(nworkers) as pool:
            parts = list(pool.map(_run_range, [plan] * nworkers, bounds[:-1], bounds[1:]))
        values = np.concatenate([v for v, _ in parts])
        violations = [x for _, vs in parts for x in vs]
    moments = {name: Moments.of(values[:, j].tolist()) for j, name in enumerate(METRIC_NAMES)}
    return AggregateStats(plan, moments, violations)


def check_bounds(
    metrics: RunMetrics, cfg: ProblemConfig, algo: str, ground_truth_delta_min: float
) -> List[str]:
    """Names of the proven per-run bounds that ``metrics`` breaks.

    ``cfg`` is the session configuration, so ``L = ceil(log2(cfg.n))``.
    GCBS face probes sit ``w`` (the stop width) off center, so its
    additive travel term carries a factor ``w``; with ``relaxed=False`` it
    is the unit-offset constant.
    """
    base, exp = split_algo(algo)
    k = cfg.k
    w = cfg.stop_width
    L = ceil_log2(cfg.n)
    if exp:
        # the doubling prefix adds at most ceil(log2 delta) + 1 probes
        L_prefix = ceil_log2(max(1, math.ceil(ground_truth_delta_min))) + 1
    else:
        L_prefix = 0
    out = []
    if base == "orthant":
        if metrics.P > (2**k - 1) * L + L_prefix:
            out.append("P_bound")
        if metrics.R_max > L + L_prefix:
            out.append("R_bound")
    elif base == "domino2d":
        if metrics.P > 2 * L + 1 + L_prefix:
            out.append("P_bound")
    elif base == "domino3d":
        if metrics.P > 3 * L + 4 + L_prefix:
            out.append("P_bound")
    elif base == "gcbs":
        if metrics.P > k * L + 3**k + L_prefix:
            out.append("P_bound")
        if not exp and metrics.D > k * ground_truth_delta_min + 2 * w * 3**k:
            out.append("D_bound")
    elif base == "cbs2d":
        if metrics.P > 2 * L + 9 + L_prefix:
            out.append("P_bound")
        if not exp and metrics.D > 2 * ground_truth_delta_min + 16:
            out.append("D_bound")
    else:
        raise ValueError(f"unknown strategy {algo!r}")
    return out


def facet_hit_probability(k: int, delta: float) -> float:
    """Volume share of the facets in the outer unit shell of a ``delta``-cube.

    ``k (delta-1)^(k-1) / (delta^k - (delta-1)^k)``. Integer ``delta`` is
    evaluated in exact rational arithmetic and rounded once. Otherwise the
    ratio is rewritten in ``x = 1/delta`` with ``log1p``/``expm1`` so the
    difference in the denominator never cancels.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not delta > 1:
        raise ValueError(f"delta must exceed 1, got {delta}")
    if k == 1:
        return 1.0
    if float(delta).is_integer() and k * math.log2(delta) < 4096:
        d = int(delta)
        return float(Fraction(k * (d - 1) ** (k - 1), d**k - (d - 1) ** k))
    x = 1.0 / delta
    log_ratio = k * math.log1p(-x)  # log((1 - 1/delta)^k)
    return k * x * math.exp((k - 1) * math.log1p(-x)) / -math.expm1(log_ratio)


def results_rows(stats: AggregateStats) -> List[dict]:
    plan = stats.plan
    rows = []
    for stat in ("mean", "max", "std"):
        row = {
            "algo": plan.algo,
            "k": plan.cfg.k,
            "n": _number(plan.cfg.n),
            "metric": plan.cfg.metric.value,
            "trials": plan.trials,
            "seed": plan.seed,
            "stat": stat,
        }
        for name in METRIC_NAMES:
            row[name] = getattr(stats, stat)(name)
        rows.append(row)
    return rows


def _number(x: float):
    return int(x) if float(x).is_integer() else x


def write_results(stats_list: Sequence[AggregateStats], fmt: str = "csv") -> str:
    """Render result rows as CSV or a JSON array with the same fields."""
    rows = [r for s in stats_list for r in results_rows(s)]
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()
