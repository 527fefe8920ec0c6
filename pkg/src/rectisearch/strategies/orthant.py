from __future__ import annotations

import numpy as np

from ..geometry import gray_orthant_order
from ..world import ProblemConfig, RunMetrics, Session
from ._view import linf_view


def run_orthant(session: Session, cfg: ProblemConfig) -> RunMetrics:
    """Layered orthant search.

    Each layer visits the orthants of the current cell in Gray order and
    probes each from its center with half the cell radius. The first hit
    becomes the next cell; if all but the last orthant fail, the last one is
    taken without probing. A POI answers at most one probe per layer.
    """
    view = linf_view(session, "orthant")
    signs = np.array(gray_orthant_order(cfg.k), dtype=float)
    center = np.zeros(cfg.k)
    radius = float(cfg.n)
    while radius > 1:
        half = radius / 2
        subs = center + half * signs
        hit = view.probe_sequence(subs[:-1], half)
        center, radius = subs[-1 if hit is None else hit], half
    center = tuple(center.tolist())
    if view.position != center:
        view.move_to(center)
    return session.finish()
