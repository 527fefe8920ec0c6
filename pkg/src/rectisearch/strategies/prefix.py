from __future__ import annotations

from ..world import Session


def exponential_prefix(session: Session, cfg=None) -> float:
    """Probe radii 1, 2, 4, ... from the origin until one succeeds.

    Returns that radius ``n'``; the nearest POI is within ``n'`` and, when
    it is farther than 1, more than ``n'/2`` away. Needs no upper bound.
    """
    origin = (0.0,) * session.k
    if session.position != origin:
        session.move_to(origin)
    radius = 1.0
    while not session.probe(origin, radius):
        radius *= 2
    return radius
