"""Present any supported session to a strategy as an L-infinity search.

In the plane the map (x, y) -> (x + y, x - y) turns L1 distances into
L-infinity distances exactly, so every 2D strategy runs on L1 through a
rotated view. In one dimension the two metrics coincide.
"""

from __future__ import annotations

from typing import Sequence

from ..geometry import Metric, Point
from ..world import Session


class UnsupportedConfiguration(ValueError):
    """The requested (strategy, dimension, metric) combination is not defined."""


class _Rotated:
    k = 2
    metric = Metric.LINF

    def __init__(self, session: Session):
        self.session = session
        self.cfg = session.cfg
        self._uv = self._forward(session.position)

    @staticmethod
    def _forward(p: Sequence[float]) -> Point:
        return (p[0] + p[1], p[0] - p[1])

    @staticmethod
    def _back(q: Sequence[float]) -> Point:
        return ((q[0] + q[1]) / 2, (q[0] - q[1]) / 2)

    @property
    def position(self) -> Point:
        return self._uv

    def move_to(self, dest: Sequence[float]) -> None:
        dest = tuple(dest)
        self.session.move_to(self._back(dest))
        self._uv = dest

    def probe_at(self, center: Sequence[float], radius: float) -> bool:
        center = tuple(center)
        if center != self._uv:
            self.move_to(center)
        return self.session.probe(self.session.position, radius)

    def probe_sequence(self, centers, radius: float):
        for i, c in enumerate(centers):
            if self.probe_at(tuple(float(x) for x in c), radius):
                return i
        return None


def linf_view(session: Session, algo: str, max_l1_dim: int = 2):
    """Return ``session`` itself for L-infinity, or a rotated view for L1."""
    if session.metric is Metric.LINF or session.k == 1:
        return session
    if session.k == 2 and max_l1_dim >= 2:
        return _Rotated(session)
    raise UnsupportedConfiguration(
        f"{algo} is only defined for the L-infinity metric in dimension {session.k}; "
        "L1 balls are cross-polytopes whose faces and orthants are not cross-polytopes"
    )
