"""Central binary search and its k-dimensional generalisation.

Each phase works in the subspace of still-free coordinates. It finds the
radius of the smallest cube (in the free coordinates) holding a feasible
POI with a binary search, then probes the faces of that cube, largest
first, to learn which coordinates sit on the boundary. Those coordinates
are pinned to a width-``w`` slab and the next phase continues with the
rest.

Probes made in a later phase keep their ball flush with the outer edge of
every pinned slab: with radius ``m`` the center sits at ``c - m`` on a
pinned axis whose slab is ``[c - w, c]`` (sign-adjusted). The part of the
ball that leaves the slab lies in space that an earlier failed probe
already cleared.
"""

from __future__ import annotations

import functools
import itertools
import math
from typing import Callable, List, Optional, Sequence, Tuple

from ..geometry import FaceVector, Point, all_faces
from ..world import ProblemConfig, RunMetrics, Session
from ._view import UnsupportedConfiguration, linf_view


@functools.lru_cache(maxsize=None)
def _faces(p: int) -> Tuple[FaceVector, ...]:
    return tuple(all_faces(p))


def _midpoint(lo: float, hi: float) -> float:
    m = math.floor((hi + lo) / 2)
    return m if lo < m < hi else (hi + lo) / 2


def _search(probe: Callable[[float], bool], lo: float, hi: float, width: float) -> Tuple[float, float]:
    """Shrink ``(lo, hi]`` until it is at most ``width`` wide; returns ``(lo, hi)``."""
    if not hi > lo:
        raise ValueError(f"need lo < hi, got lo={lo}, hi={hi}")
    while hi - lo > width:
        m = _midpoint(lo, hi)
        if probe(m):
            hi = m
        else:
            lo = m
    return lo, hi


def shell_binary_search(session, center: Sequence[float], lo: float, hi: float, stop_width: float = 1) -> float:
    """Binary search for the radius of the nearest POI shell around ``center``.

    Returns ``h`` with ``h - stop_width <= nearest distance <= h`` provided
    some POI lies within ``hi``. The search point does not move.
    """
    center = tuple(center)
    if center != tuple(session.position):
        session.move_to(center)
    return _search(lambda m: session.probe(center, m), lo, hi, stop_width)[1]


class _Phases:
    """Pinned/free bookkeeping for one generalised CBS run (L-infinity view)."""

    def __init__(self, view, k: int, width: float, pair: bool = False):
        self.view = view
        self.k = k
        self.w = width
        # use the two-probe edge split once two coordinates are left free
        self.pair = pair
        self.free: List[int] = list(range(k))
        # center of the current cube in each free coordinate
        self.mid: List[float] = [0.0] * k
        self.pinned: List[Tuple[int, int, float]] = []  # (axis, sign, outer edge coordinate)
        self.hits: List[FaceVector] = []

    def point(self, reach: float, free_coords: Sequence[float]) -> Point:
        """Probe center for a ball of radius ``reach`` flush with every pinned slab."""
        x = [0.0] * self.k
        for axis, sign, edge in self.pinned:
            x[axis] = edge - sign * reach
        for axis, v in zip(self.free, free_coords):
            x[axis] = v
        return tuple(x)

    def probe(self, radius: float, free_coords: Sequence[float]) -> bool:
        return self.view.probe_at(self.point(radius, free_coords), radius)

    def shell(self, lo: float, hi: float) -> Tuple[float, float]:
        return _search(lambda m: self.probe(m, self.mid), lo, hi, self.w)

    def probe_face(self, h: float, face: FaceVector) -> bool:
        base = self.point(h - self.w, self.mid)
        hit = self.probe(h - self.w, [c + self.w * s for c, s in zip(self.mid, face)])
        if not hit:
            self.view.move_to(base)
        return hit

    def find_face(self, h: float) -> FaceVector:
        faces = _faces(len(self.free))
        for face in faces[:-1]:
            if self.probe_face(h, face):
                self.hits.append(face)
                return face
        self.hits.append(faces[-1])
        return faces[-1]

    def pin(self, h: float, face: FaceVector) -> None:
        keep, mid = [], []
        for axis, c, s in zip(self.free, self.mid, face):
            if s:
                self.pinned.append((axis, s, c + s * h))
            else:
                keep.append(axis)
                mid.append(c)
        self.free, self.mid = keep, mid

    def split_pair(self, h: float) -> float:
        """Pin one of the two free coordinates with two probes; returns the next radius.

        The first ball, offset by ``w/2`` toward the (+, +) corner, covers
        ``[w - h, h]`` in both coordinates. A hit leaves the +a or +b band,
        a miss the -a or -b band, and a second ball of the same kind decides
        between them. Whatever band survives, the other coordinate is known
        to lie in an interval that the next phase searches from its middle.
        The interval is ``[w - h, h]`` or all of ``[-h, h]``, not always the
        usual ``[w - h, h - w]``.
        """
        w, c = self.w, self.w / 2
        a, b = self.mid
        if self.probe(h - c, (a + c, b + c)):
            if self.probe(h - w, (a + w, b)):
                face, shift, hi = (1, 0), 0.0, h - w
            else:
                face, shift, hi = (0, 1), c, h - c
        elif self.probe(h - c, (a - c, b + c)):
            face, shift, hi = (-1, 0), c, h - c
        else:
            face, shift, hi = (0, -1), 0.0, h
        self.hits.append(face)
        self.pin(h, face)
        self.mid = [self.mid[0] + shift]
        return hi

    def endgame(self, h: float) -> None:
        """Cover ``[-h, h]`` in every free coordinate with radius-1 probes.

        Any radius-1 hit already puts the search point within 1 of a POI, so
        the first hit ends the run; the last cell is taken without probing.
        """
        per_axis = max(1, math.ceil(h - 1e-12))
        step = 2 * h / per_axis
        ticks = [-h + step * (i + 0.5) for i in range(per_axis)]
        cells = [tuple(m + t for m, t in zip(self.mid, cell)) for cell in _snake(ticks, len(self.free))]
        for cell in cells[:-1]:
            if self.probe(1.0, cell):
                return
        final = self.point(1.0, cells[-1]) if len(cells) > 1 else self.point(self.w / 2, cells[-1])
        if self.view.position != final:
            self.view.move_to(final)

    def run(self, n: float) -> None:
        hi = float(n)
        while self.free:
            h = self.shell(0.0, hi)[1] if hi > self.w else hi
            # face probes of radius h - w only sweep the whole boundary band when h >= 1.5 w
            if h < 1.5 * self.w:
                self.endgame(h)
                return
            if self.pair and len(self.free) == 2:
                hi = self.split_pair(h)
                continue
            self.pin(h, self.find_face(h))
            hi = h - self.w
        final = self.point(self.w / 2, ())
        if self.view.position != final:
            self.view.move_to(final)


def _snake(ticks: Sequence[float], p: int) -> List[Tuple[float, ...]]:
    """Reflected (boustrophedon) order over ``ticks**p``; adjacent cells touch."""
    if p == 0:
        return [()]
    rows = _snake(ticks, p - 1)
    out = []
    for i, t in enumerate(ticks):
        seq = rows if i % 2 == 0 else rows[::-1]
        out.extend((t,) + r for r in seq)
    return out


def probe_face(session, cube_center: Sequence[float], delta_tilde: float, f: FaceVector, width: float = 1) -> bool:
    """Probe the face ``f`` of the cube of radius ``delta_tilde`` around ``cube_center``.

    The probe is issued from ``cube_center + width * f`` with radius
    ``delta_tilde - width``; the search point then returns to the center.
    """
    if not delta_tilde > width:
        raise ValueError(f"delta_tilde must exceed {width}, got {delta_tilde}")
    center = tuple(cube_center)
    if len(f) != len(center):
        raise ValueError("face vector and cube center differ in dimension")
    at = tuple(c + width * s for c, s in zip(center, f))
    hit = session.probe_at(at, delta_tilde - width)
    session.move_to(center)
    return hit


def find_face(session, cube_center: Sequence[float], p: int, delta_tilde: float, width: float = 1) -> FaceVector:
    """Highest-dimensional face of the cube that has a POI within ``width`` of it.

    Faces are tried in :func:`~rectisearch.geometry.all_faces` order and the
    last one is inferred, so at most ``3**p - 2`` probes are made.
    """
    if len(cube_center) != p:
        raise ValueError("cube center must have dimension p")
    faces = all_faces(p)
    for face in faces[:-1]:
        if probe_face(session, cube_center, delta_tilde, face, width):
            return face
    return faces[-1]


def run_gcbs(session: Session, cfg: ProblemConfig) -> RunMetrics:
    """Generalised central binary search (L-infinity; L1 only up to k=2)."""
    view = linf_view(session, "gcbs")
    phases = _Phases(view, cfg.k, cfg.stop_width)
    phases.run(cfg.n)
    metrics = session.finish()
    metrics.info["faces"] = phases.hits
    return metrics


def run_cbs2d(session: Session, cfg: ProblemConfig) -> RunMetrics:
    """Planar central binary search.

    Phase one stays at the origin and finds the shell, then two probes pick
    the edge (see ``_Phases.split_pair``). Phase two walks along that edge,
    keeping each ball flush with it: a hit pulls the search point outward,
    a miss pushes it back toward the middle. One more face probe picks
    between the two candidate cells.
    """
    if cfg.k != 2:
        raise UnsupportedConfiguration(f"cbs2d requires k=2, got k={cfg.k}")
    view = linf_view(session, "cbs2d")
    phases = _Phases(view, 2, cfg.stop_width, pair=True)
    phases.run(cfg.n)
    metrics = session.finish()
    metrics.info["faces"] = phases.hits
    return metrics
