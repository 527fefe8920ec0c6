"""JSON export and replay of single-run traces.

A trace is a header (``algo``, ``k``, ``n``, ``metric``, ``seed``,
``pois``, plus ``relaxed``) and the ordered event list::

    {"type": "probe", "center": [...], "radius": r, "result": true}
    {"type": "move", "to": [...]}

Coordinates are in session space: the search point starts at the origin
and ``n`` is the search radius. Floats go through :mod:`json`, which
writes the shortest decimal that round-trips, so a reloaded trace is
bit-identical.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Sequence, Union

from .geometry import Metric
from .world import ProblemConfig, RunMetrics, make_session

__all__ = ["TraceMismatch", "export_trace", "dump_trace", "load_trace", "replay_trace", "trace_config"]

PathLike = Union[str, Path]


class TraceMismatch(ValueError):
    """A replayed probe answered differently from the recorded one."""


def _event_json(e: tuple) -> dict:
    if e[0] == "probe":
        _, center, radius, result = e
        return {"type": "probe", "center": list(center), "radius": radius, "result": bool(result)}
    return {"type": "move", "to": list(e[1])}


def export_trace(
    metrics: RunMetrics,
    *,
    algo: str,
    cfg: ProblemConfig,
    pois: Sequence[Sequence[float]],
    seed: Optional[int] = None,
) -> dict:
    return {
        "algo": algo,
        "k": cfg.k,
        "n": cfg.n,
        "metric": cfg.metric.value,
        "relaxed": cfg.relaxed,
        "seed": seed,
        "pois": [list(map(float, p)) for p in pois],
        "events": [_event_json(e) for e in metrics.trace],
        "metrics": metrics.to_dict(),
    }


def dump_trace(trace: dict, path: PathLike) -> None:
    Path(path).write_text(json.dumps(trace, indent=1) + "\n")


def load_trace(path: PathLike) -> dict:
    trace = json.loads(Path(path).read_text())
    for key in ("algo", "k", "n", "metric", "pois", "events"):
        if key not in trace:
            raise ValueError(f"trace is missing the {key!r} field")
    return trace


def trace_config(trace: dict) -> ProblemConfig:
    return ProblemConfig(int(trace["k"]), trace["n"], Metric.parse(trace["metric"]), trace.get("relaxed", True))


def replay_trace(trace: dict, pois: Optional[Sequence[Sequence[float]]] = None) -> RunMetrics:
    """Feed the recorded moves and probes to a fresh session.

    With ``pois`` given, the events run against that POI set instead of the
    recorded one; every probe must still get its recorded answer or
    :class:`TraceMismatch` is raised.
    """
    cfg = trace_config(trace)
    session = make_session(trace["pois"] if pois is None else pois, cfg)
    for i, e in enumerate(trace["events"]):
        kind = e.get("type")
        if kind == "move":
            session.move_to(e["to"])
        elif kind == "probe":
            got = session.probe(tuple(float(c) for c in e["center"]), e["radius"])
            if got != e["result"]:
                raise TraceMismatch(f"event {i}: recorded {e['result']}, replay answered {got}")
        else:
            raise ValueError(f"event {i}: unknown type {kind!r}")
    return session.finish()
