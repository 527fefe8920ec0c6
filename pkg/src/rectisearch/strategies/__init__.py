"""Search strategies, addressable by stable string ids.

``orthant``, ``domino2d``, ``domino3d``, ``cbs2d`` and ``gcbs``; any of them
may be prefixed with ``exp+`` to first bound the search radius by an
exponential probe sweep from the origin.
"""

from __future__ import annotations

from typing import Callable, Dict

from ..geometry import Metric
from ..world import ProblemConfig, RunMetrics, Session
from ._view import UnsupportedConfiguration
from .cbs import find_face, probe_face, run_cbs2d, run_gcbs, shell_binary_search
from .domino import run_domino2d, run_domino3d
from .orthant import run_orthant
from .prefix import exponential_prefix

__all__ = [
    "STRATEGIES",
    "UnsupportedConfiguration",
    "check_supported",
    "run_strategy",
    "run_orthant",
    "run_domino2d",
    "run_domino3d",
    "run_cbs2d",
    "run_gcbs",
    "shell_binary_search",
    "probe_face",
    "find_face",
    "exponential_prefix",
]

Strategy = Callable[[Session, ProblemConfig], RunMetrics]

STRATEGIES: Dict[str, Strategy] = {
    "orthant": run_orthant,
    "domino2d": run_domino2d,
    "domino3d": run_domino3d,
    "cbs2d": run_cbs2d,
    "gcbs": run_gcbs,
}

EXP_PREFIX = "exp+"


def split_algo(algo: str):
    """``'exp+gcbs'`` -> ``('gcbs', True)``."""
    if algo.startswith(EXP_PREFIX):
        return algo[len(EXP_PREFIX):], True
    return algo, False


def check_supported(algo: str, k: int, metric) -> None:
    """Raise :class:`UnsupportedConfiguration` unless ``algo`` handles (k, metric)."""
    base, _ = split_algo(algo)
    metric = Metric.parse(metric)
    if base not in STRATEGIES:
        raise UnsupportedConfiguration(f"unknown strategy {algo!r}; choose from {sorted(STRATEGIES)}")
    if k < 1:
        raise UnsupportedConfiguration("k must be at least 1")
    if base == "domino2d" and k != 2:
        raise UnsupportedConfiguration(f"domino2d requires k=2, got k={k}")
    if base == "cbs2d" and k != 2:
        raise UnsupportedConfiguration(f"cbs2d requires k=2, got k={k}")
    if base == "domino3d":
        if k != 3:
            raise UnsupportedConfiguration(f"domino3d requires k=3, got k={k}")
        if metric is not Metric.LINF:
            raise UnsupportedConfiguration(
                "domino3d is only defined under the L-infinity metric (L1 is not supported)"
            )
    if base in ("orthant", "gcbs") and metric is Metric.L1 and k > 2:
        raise UnsupportedConfiguration(
            f"{base} under L1 is only supported for k <= 2; L1 balls are cross-polytopes "
            "whose faces are not, in general, cross-polytopes"
        )


def run_strategy(algo: str, session: Session, cfg: ProblemConfig) -> RunMetrics:
    check_supported(algo, cfg.k, cfg.metric)
    base, with_prefix = split_algo(algo)
    if with_prefix:
        radius = exponential_prefix(session, cfg)
        if radius <= 1:
            return session.finish()
        cfg = cfg.with_n(max(radius, 2.0))
    return STRATEGIES[base](session, cfg)
