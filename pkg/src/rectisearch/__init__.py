"""Rectilinear Marco Polo search: probe oracles, strategies and a benchmark harness."""

from .geometry import (
    Metric,
    ceil_log2,
    distance,
    enumerate_faces,
    gray_orthant_order,
    orthant_center,
)
from .world import ProblemConfig, RunMetrics, Session, delta_min, finish, make_session
from .strategies import (
    STRATEGIES,
    UnsupportedConfiguration,
    exponential_prefix,
    find_face,
    probe_face,
    run_cbs2d,
    run_domino2d,
    run_domino3d,
    run_gcbs,
    run_orthant,
    run_strategy,
    shell_binary_search,
)

__version__ = "0.1.0"
