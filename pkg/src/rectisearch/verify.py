"""Self-checks behind ``rectisearch verify``.

Each suite returns a :class:`SuiteResult` listing counterexamples; an
empty list means the property held on every sampled case.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable, List, Sequence

import numpy as np

from .geometry import Metric, all_faces, ceil_log2
from .strategies import STRATEGIES, UnsupportedConfiguration, check_supported, run_strategy
from .strategies.cbs import shell_binary_search
from .strategies.prefix import exponential_prefix
from .world import ProblemConfig, delta_min, make_session, sealed_oracle

__all__ = [
    "SuiteResult",
    "lemma1_counterexamples",
    "suite_termination",
    "suite_lemma1",
    "suite_shell_search",
    "suite_prefix",
    "run_suites",
]


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: List[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f"; first: {self.failures[0]}" if self.failures else ""
        return f"{status} {self.name}: {self.cases} cases, {len(self.failures)} failures ({self.seconds:.1f}s){extra}"


def _timed(fn: Callable[..., SuiteResult]) -> Callable[..., SuiteResult]:
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# dimensions each strategy is exercised in
DIMS = {
    "orthant": range(1, 9),
    "gcbs": range(1, 9),
    "domino2d": (2,),
    "domino3d": (3,),
    "cbs2d": (2,),
}


def random_case(rng: np.random.Generator, algo: str, max_log_n: int = 20):
    """One randomized instance: (algo, cfg, pois) with a POI inside the search radius."""
    k = int(rng.choice(list(DIMS[algo])))
    metrics = [Metric.LINF]
    try:
        check_supported(algo, k, Metric.L1)
        metrics.append(Metric.L1)
    except UnsupportedConfiguration:
        pass
    metric = metrics[int(rng.integers(len(metrics)))]
    # keep high-dimensional orthant runs small: their probe count grows like 2^k log n
    top = min(max_log_n, 4 + 40 // k) if algo == "orthant" else max_log_n
    n = 2.0 ** int(rng.integers(4, top + 1))
    count = int(rng.integers(1, 65))
    cfg = ProblemConfig(k, n, metric, relaxed=bool(rng.integers(0, 4)))  # mostly relaxed
    while True:
        pois = [tuple(rng.uniform(-1.25 * n, 1.25 * n, k).tolist()) for _ in range(count)]
        if any(_dist(p, metric) <= n for p in pois):
            return cfg, pois


def _dist(p: Sequence[float], metric: Metric) -> float:
    return max(abs(c) for c in p) if metric is Metric.LINF else math.fsum(abs(c) for c in p)


@_timed
def suite_termination(runs: int = 2000, seed: int = 0, max_log_n: int = 12) -> SuiteResult:
    """Randomized runs of every strategy: success plus the proven per-run bounds."""
    from .simulator import check_bounds

    res = SuiteResult("termination+bounds")
    rng = np.random.default_rng(seed)
    algos = sorted(STRATEGIES)
    for i in range(runs):
        algo = algos[i % len(algos)]
        if rng.integers(0, 8) == 0:
            algo = "exp+" + algo
        cfg, pois = random_case(rng, algo.split("+")[-1], max_log_n)
        session = make_session(pois, cfg)
        metrics = run_strategy(algo, session, cfg)
        res.cases += 1
        dmin = delta_min(sealed_oracle(session))
        if not metrics.success:
            res.failures.append(f"{algo} k={cfg.k} n={cfg.n} {cfg.metric.value}: no POI within 1 at the end")
        for name in check_bounds(metrics, cfg, algo, dmin):
            res.failures.append(f"{algo} k={cfg.k} n={cfg.n} {cfg.metric.value}: {name}")
    return res


def lemma1_counterexamples(p: int, delta_tilde: float, width: float = 1, rng=None) -> List[str]:
    """Check the three face-probe properties for every face of a ``p``-cube.

    The probe for face ``s`` is centered at ``width * s`` with radius
    ``delta_tilde - width``. Checked: (i) the probe stays in the cube,
    (ii) it covers the face wherever the free coordinates are within
    ``delta_tilde - width``, (iii) any cube-surface point it contains lies
    on ``s`` itself or on a higher-dimensional face containing ``s``.
    """
    d, r = float(delta_tilde), float(delta_tilde - width)
    out: List[str] = []
    faces = np.array(all_faces(p), dtype=float)
    # surface samples: every coordinate from a small boundary-heavy set, at least one at +-d
    vals = sorted({-d, -d + 0.5, -r, 0.0, r, d - 0.5, d})
    grid = np.array(list(itertools.product(vals, repeat=p)), dtype=float)
    if rng is not None:
        extra = rng.uniform(-d, d, size=(200 * p, p))
        axes = rng.integers(0, p, size=len(extra))
        extra[np.arange(len(extra)), axes] = rng.choice([-d, d], size=len(extra))
        grid = np.vstack([grid, extra])
    surface = grid[(np.abs(grid) == d).any(axis=1)]
    on_face = np.where(np.abs(surface) == d, np.sign(surface), 0.0)
    free_vals = sorted({-r, -r / 2, 0.0, r / 2, r})
    for s in faces:
        center = width * s
        label = tuple(int(x) for x in s)
        # (i) every corner of the probe box lies in the cube
        corners = center + r * np.array(list(itertools.product((-1.0, 1.0), repeat=p)))
        if (np.abs(corners) > d + 1e-12).any():
            out.append(f"p={p} d={d} face={label}: probe leaves the cube")
        # (ii) face points with free coordinates inside the padding are covered
        free = np.flatnonzero(s == 0)
        pts = np.tile(s * d, (len(free_vals) ** len(free), 1))
        if len(free):
            pts[:, free] = np.array(list(itertools.product(free_vals, repeat=len(free))))
        if (np.abs(pts - center).max(axis=1) > r + 1e-12).any():
            out.append(f"p={p} d={d} face={label}: part of the face is not covered")
        # (iii) covered surface points sit on s or on a face containing s
        inside = np.abs(surface - center).max(axis=1) <= r
        fixed = on_face[inside]
        bad = ((fixed != 0) & (fixed != s)).any(axis=1)
        if bad.any():
            x = surface[inside][np.argmax(bad)]
            out.append(f"p={p} d={d} face={label}: covers {tuple(x.tolist())} on another face")
    return out


@_timed
def suite_lemma1(max_p: int = 6, deltas=(2, 5, 17), seed: int = 0) -> SuiteResult:
    res = SuiteResult("face-probe geometry")
    rng = np.random.default_rng(seed)
    for p in range(1, max_p + 1):
        for d in deltas:
            res.cases += 3 ** p - 1
            res.failures.extend(lemma1_counterexamples(p, d, 1, rng))
    # the corner-exclusion example: p=3, delta=5, facet probe never reaches the corner
    from .geometry import distance

    if distance((1.0, 0.0, 0.0), (5.0, 5.0, 5.0), Metric.LINF) <= 4:
        res.failures.append("facet (+1,0,0) probe reaches corner (5,5,5)")
    res.cases += 1
    return res


def linear_scan_radius(session, n: int) -> int:
    """Reference: probe radii 1, 2, ..., n in order and return the first hit."""
    origin = session.position
    for r in range(1, n + 1):
        if session.probe(origin, r):
            return r
    raise ValueError("no POI within n")


@_timed
def suite_shell_search(n: int = 1024, seed: int = 0) -> SuiteResult:
    """Binary search agrees with the linear scan for every integer distance."""
    res = SuiteResult("shell search vs linear scan")
    rng = np.random.default_rng(seed)
    for dist in range(1, n + 1):
        k = int(rng.integers(1, 4))
        poi = rng.uniform(-dist, dist, k)
        poi[int(rng.integers(k))] = dist * rng.choice([-1, 1])
        cfg = ProblemConfig(k, n, relaxed=False)
        fast = shell_binary_search(make_session([poi], cfg), (0.0,) * k, 0, n, stop_width=1)
        slow = linear_scan_radius(make_session([poi], cfg), n)
        res.cases += 1
        if fast != slow:
            res.failures.append(f"distance {dist}: binary search {fast}, scan {slow}")
    return res


@_timed
def suite_prefix(cases: int = 1000, seed: int = 0) -> SuiteResult:
    """The doubling prefix brackets the nearest distance within a factor of two."""
    res = SuiteResult("exponential prefix")
    rng = np.random.default_rng(seed)
    for _ in range(cases):
        dist = float(2.0 ** rng.uniform(0.0, 20.0))
        k = int(rng.integers(1, 4))
        poi = rng.uniform(-dist, dist, k)
        poi[int(rng.integers(k))] = dist
        session = make_session([poi], ProblemConfig(k, 2.0 ** 21))
        got = exponential_prefix(session)
        res.cases += 1
        limit = ceil_log2(max(1, math.ceil(dist))) + 1
        if not (dist <= got < 2 * dist or (dist <= 1 and got == 1)):
            res.failures.append(f"distance {dist}: prefix returned {got}")
        if session.probe_count > limit:
            res.failures.append(f"distance {dist}: {session.probe_count} probes > {limit}")
    return res


def run_suites(quick: bool = False) -> List[SuiteResult]:
    if quick:
        return [
            suite_termination(runs=300, max_log_n=10),
            suite_lemma1(max_p=4),
            suite_shell_search(n=256),
            suite_prefix(cases=200),
        ]
    return [suite_termination(), suite_lemma1(), suite_shell_search(), suite_prefix()]
