"""Hidden-POI oracle and the per-run session every strategy talks to."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .geometry import Metric, Point, distance

__all__ = [
    "ProblemConfig",
    "Oracle",
    "Session",
    "ProbeRecord",
    "RunMetrics",
    "make_session",
    "finish",
    "delta_min",
    "sealed_oracle",
]

# above this many POIs the oracle switches to a vectorised membership test
_VECTOR_THRESHOLD = 8


@dataclass(frozen=True)
class ProblemConfig:
    k: int
    n: float
    metric: Metric = Metric.LINF
    relaxed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "metric", Metric.parse(self.metric))
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not (self.n >= 2 and math.isfinite(self.n)):
            raise ValueError(f"n must be finite and >= 2, got {self.n}")

    @property
    def stop_width(self) -> int:
        return 2 if self.relaxed else 1

    def with_n(self, n: float) -> "ProblemConfig":
        return ProblemConfig(self.k, n, self.metric, self.relaxed)


class ProbeRecord(NamedTuple):
    center: Point
    radius: float
    result: bool
    seq: int


class Oracle:
    """Ground truth. Strategies never see this object directly."""

    def __init__(self, pois: Iterable[Sequence[float]], metric: Metric):
        self.pois: Tuple[Point, ...] = tuple(tuple(float(c) for c in p) for p in pois)
        if not self.pois:
            raise ValueError("at least one POI is required")
        k = len(self.pois[0])
        for p in self.pois:
            if len(p) != k:
                raise ValueError("all POIs must share one dimension")
            if not all(math.isfinite(c) for c in p):
                raise ValueError(f"non-finite POI coordinate in {p}")
        self.k = k
        self.metric = Metric.parse(metric)
        self.response_counts = [0] * len(self.pois)
        self.array = np.asarray(self.pois, dtype=float)
        self._array = self.array if len(self.pois) > _VECTOR_THRESHOLD else None

    def inside(self, center: Point, radius: float) -> List[int]:
        """Indices of the POIs in the closed ball around ``center``."""
        if self._array is not None:
            diff = np.abs(self._array - np.asarray(center))
            d = diff.max(axis=1) if self.metric is Metric.LINF else diff.sum(axis=1)
            return np.flatnonzero(d <= radius).tolist()
        metric = self.metric
        return [i for i, p in enumerate(self.pois) if distance(center, p, metric) <= radius]

    def answer(self, center: Point, radius: float) -> bool:
        hits = self.inside(center, radius)
        for i in hits:
            self.response_counts[i] += 1
        return bool(hits)

    def nearest(self, point: Sequence[float]) -> float:
        return min(distance(point, p, self.metric) for p in self.pois)


@dataclass
class RunMetrics:
    P: int
    D: float
    R_max: int
    success: bool
    final_position: Point
    # travel in both metrics, keyed "l1" / "linf"; D is the probe metric's entry
    D_by_metric: dict = field(default_factory=dict)
    # raw session events; ``trace`` unfolds them on demand
    events: List[tuple] = field(default_factory=list, repr=False)
    # strategy-specific extras, e.g. the faces hit by central binary search
    info: dict = field(default_factory=dict, repr=False)

    @property
    def trace(self) -> List[tuple]:
        """Per-probe ``("probe", ...)`` / ``("move", ...)`` events in order."""
        return _expand(self.events, len(self.final_position))

    def to_dict(self) -> dict:
        return {
            "P": self.P,
            "D": self.D,
            "R_max": self.R_max,
            "success": self.success,
            "final_position": list(self.final_position),
            **{f"D_{m}": d for m, d in sorted(self.D_by_metric.items())},
        }


class Session:
    """Position of the search point plus probe/travel telemetry.

    ``probe`` and ``move_to`` are the only ways to learn anything or to
    change the counters. Events are kept as tuples:
    ``("probe", center, radius, result)`` and ``("move", to)``.
    """

    def __init__(self, oracle: Oracle, cfg: ProblemConfig):
        self._oracle = oracle
        self.cfg = cfg
        self.k = cfg.k
        self.metric = cfg.metric
        self._position: Point = (0.0,) * cfg.k
        self._path_length = 0.0
        # travel in the metric not used for probes, reported alongside D
        self._other = Metric.L1 if cfg.metric is Metric.LINF else Metric.LINF
        self._path_other = 0.0
        self._probe_count = 0
        self._events: List[tuple] = []

    @property
    def position(self) -> Point:
        return self._position

    @property
    def path_length(self) -> float:
        return self._path_length

    @property
    def probe_count(self) -> int:
        return self._probe_count

    @property
    def events(self) -> List[tuple]:
        return _expand(self._events, self.k)

    @property
    def probe_log(self) -> List[ProbeRecord]:
        probes = (e for e in self._events if e[0] == "probe")
        return [ProbeRecord(c, r, res, i) for i, (_, c, r, res) in enumerate(probes)]

    def probe(self, center: Sequence[float], radius: float) -> bool:
        center = tuple(center)
        if center != self._position:
            raise ValueError(
                f"probes are issued from the search point at {self._position}, "
                f"not {center}; move first"
            )
        if not radius > 0:
            raise ValueError(f"probe radius must be positive, got {radius!r}")
        result = self._oracle.answer(center, radius)
        self._probe_count += 1
        self._events.append(("probe", center, radius, result))
        return result

    def move_to(self, dest: Sequence[float]) -> None:
        dest = tuple(float(c) for c in dest)
        if len(dest) != self.k:
            raise ValueError(f"dimension mismatch: {len(dest)} != {self.k}")
        self._path_length += distance(self._position, dest, self.metric)
        self._path_other += distance(self._position, dest, self._other)
        self._position = dest
        self._events.append(("move", dest))

    def probe_at(self, center: Sequence[float], radius: float) -> bool:
        """Move to ``center`` (charging the travel) and probe from there."""
        center = tuple(center)
        if center != self._position:
            self.move_to(center)
        return self.probe(center, radius)

    def probe_sequence(self, centers, radius: float) -> Optional[int]:
        """Probe from each row of ``centers`` in turn until one succeeds.

        Same observable effect as calling :meth:`probe_at` in a loop and
        breaking on the first hit, but evaluated in bulk. Returns the index
        of the successful probe, or None if every probe failed.
        """
        if not radius > 0:
            raise ValueError(f"probe radius must be positive, got {radius!r}")
        centers = np.asarray(centers, dtype=float)
        if centers.ndim != 2 or centers.shape[1] != self.k:
            raise ValueError(f"centers must have shape (m, {self.k})")
        if len(centers) == 0:
            return None
        oracle = self._oracle
        pois = oracle.array
        diff = np.abs(centers[:, None, :] - pois[None, :, :])
        d = diff.max(axis=2) if self.metric is Metric.LINF else diff.sum(axis=2)
        covered = d <= radius
        answered = covered.any(axis=1)
        first = int(np.argmax(answered)) if answered.any() else None
        used = len(centers) if first is None else first + 1
        counts = covered[:used].sum(axis=0)
        for i in np.flatnonzero(counts):
            oracle.response_counts[i] += int(counts[i])
        start = np.asarray(self._position)
        steps = np.abs(np.diff(np.vstack([start, centers[:used]]), axis=0))
        linf = steps.max(axis=1).tolist()
        l1 = [math.fsum(row) for row in steps.tolist()]
        legs, other = (linf, l1) if self.metric is Metric.LINF else (l1, linf)
        for leg in legs:
            self._path_length += leg
        for leg in other:
            self._path_other += leg
        self._probe_count += used
        self._position = tuple(centers[used - 1].tolist())
        self._events.append(("batch", centers[:used], float(radius), first is not None))
        return first

    def finish(self) -> RunMetrics:
        oracle = self._oracle
        return RunMetrics(
            P=self._probe_count,
            D=self._path_length,
            R_max=max(oracle.response_counts),
            success=oracle.nearest(self._position) <= 1,
            final_position=self._position,
            D_by_metric={self.metric.value: self._path_length, self._other.value: self._path_other},
            events=list(self._events),
        )


def _expand(events: List[tuple], k: int) -> List[tuple]:
    """Unfold bulk probe records into the per-probe event vocabulary."""
    out: List[tuple] = []
    position = (0.0,) * k
    for e in events:
        if e[0] != "batch":
            out.append(e)
            position = e[1]
            continue
        _, centers, radius, hit = e
        last = len(centers) - 1
        for j, row in enumerate(centers.tolist()):
            c = tuple(row)
            if c != position:
                out.append(("move", c))
                position = c
            out.append(("probe", c, radius, hit and j == last))
    return out


def make_session(pois: Iterable[Sequence[float]], cfg: ProblemConfig) -> Session:
    """Fresh session at the origin; rejects instances with no POI within ``n``."""
    oracle = Oracle(pois, cfg.metric)
    if oracle.k != cfg.k:
        raise ValueError(f"POIs are {oracle.k}-dimensional but k={cfg.k}")
    if oracle.nearest((0.0,) * cfg.k) > cfg.n:
        raise ValueError(f"no POI within distance {cfg.n} of the origin")
    return Session(oracle, cfg)


def finish(session: Session) -> RunMetrics:
    return session.finish()


def sealed_oracle(session: Session) -> Oracle:
    """The ground truth behind ``session``; for evaluation code, never strategies."""
    return session._oracle


def delta_min(oracle: Oracle, origin_point: Optional[Sequence[float]] = None) -> float:
    """Ground-truth distance to the nearest POI. Evaluation only."""
    if origin_point is None:
        origin_point = (0.0,) * oracle.k
    return oracle.nearest(origin_point)
