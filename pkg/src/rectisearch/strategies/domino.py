"""Domino strategies for the plane and for 3-space.

A *2-domino* is an occupied cube (known to hold a POI) next to an
equally sized empty cube; a *4-domino* is an occupied cube inside a
2x2x1 block whose other three cubes are empty. Once either shape exists
every probe halves the feasible volume.

Cells are cubes stored as ``(center, half_width)``; directions are
``(axis, side)`` with side in {-1, +1} pointing from the occupied cube to
the empty neighbour.
"""

from __future__ import annotations

from typing import Callable, List, Optional, Sequence, Tuple

from ..geometry import Metric, distance, gray_orthant_order, orthant_center
from ..world import ProblemConfig, RunMetrics, Session
from ._view import UnsupportedConfiguration, linf_view

Cell = Tuple[Tuple[float, ...], float]
Observer = Optional[Callable[[float], None]]


def _shift(center: Sequence[float], axis: int, amount: float) -> Tuple[float, ...]:
    c = list(center)
    c[axis] += amount
    return tuple(c)


def _nearest(view, centers: Sequence[Tuple[float, ...]]) -> int:
    # ties go to the earlier entry; callers list negative-side cells first
    pos = view.position
    best, best_d = 0, None
    for i, c in enumerate(centers):
        d = distance(pos, c, Metric.LINF)
        if best_d is None or d < best_d:
            best, best_d = i, d
    return best


def _orthant_layer(view, center, radius):
    """Probe orthants in Gray order; return (hit index, failed sign set)."""
    order = gray_orthant_order(len(center))
    failed = set()
    for i, signs in enumerate(order[:-1]):
        if view.probe_at(orthant_center(center, radius, signs), radius / 2):
            return i, failed
        failed.add(signs)
    return len(order) - 1, failed


def _flip(signs, *axes):
    s = list(signs)
    for a in axes:
        s[a] = -s[a]
    return tuple(s)


def _volume(half: float, k: int) -> float:
    return (2 * half) ** k


def _finish(view, session: Session, cell: Cell) -> RunMetrics:
    if view.position != cell[0]:
        view.move_to(cell[0])
    return session.finish()


def run_domino2d(session: Session, cfg: ProblemConfig, *, observer: Observer = None) -> RunMetrics:
    """Quadrant layers until a 2-domino appears, then two probes per quarter.

    ``observer`` is called with the feasible area after every probe made
    inside the domino phase.
    """
    if cfg.k != 2:
        raise UnsupportedConfiguration(f"domino2d requires k=2, got k={cfg.k}")
    view = linf_view(session, "domino2d")
    order = gray_orthant_order(2)
    center, radius = (0.0, 0.0), float(cfg.n)

    while True:
        if radius <= 1:
            return _finish(view, session, (center, radius))
        hit, _ = _orthant_layer(view, center, radius)
        sub = orthant_center(center, radius, order[hit])
        if hit == 0:
            center, radius = sub, radius / 2
            continue
        prev = order[hit - 1]
        axis = next(j for j in range(2) if prev[j] != order[hit][j])
        cell: Cell = (sub, radius / 2)
        side = prev[axis]
        break

    while cell[1] > 1:
        cell, axis, side = _two_domino_step_2d(view, cell, axis, side, observer)
    return _finish(view, session, cell)


def _two_domino_step_2d(view, cell: Cell, axis: int, side: int, observer: Observer):
    (c, half) = cell
    other = 1 - axis
    # first probe straddles the occupied/empty boundary and tests the near half
    hit = view.probe_at(_shift(c, axis, side * half), half)
    strip_a = c[axis] + (side if hit else -side) * half / 2
    if observer:
        observer(_volume(half, 2) / 2)
    quarter = half / 2
    candidates = []
    for t in (-1, 1):
        q = [0.0, 0.0]
        q[axis] = strip_a
        q[other] = c[other] + t * quarter
        candidates.append(tuple(q))
    pick = _nearest(view, candidates)
    if view.probe_at(candidates[pick], quarter):
        new = (candidates[pick], quarter)
    else:
        new = (candidates[1 - pick], quarter)
        axis, side = other, (-1, 1)[pick]
    if observer:
        observer(_volume(quarter, 2))
    return new, axis, side


def run_domino3d(session: Session, cfg: ProblemConfig, *, observer: Observer = None) -> RunMetrics:
    """Octant layers, then 2-domino steps until a 4-domino, then 4-domino steps.

    A 2-domino step spends three probes per eighth of the volume, except
    for one unlucky outcome that spends four but leaves a 4-domino behind;
    a 4-domino step always spends three.
    """
    if cfg.k != 3:
        raise UnsupportedConfiguration(f"domino3d requires k=3, got k={cfg.k}")
    if cfg.metric is not Metric.LINF:
        raise UnsupportedConfiguration("domino3d is only defined under the L-infinity metric")
    view = session
    order = gray_orthant_order(3)
    center, radius = (0.0, 0.0, 0.0), float(cfg.n)

    while True:
        if radius <= 1:
            return _finish(view, session, (center, radius))
        hit, failed = _orthant_layer(view, center, radius)
        signs = order[hit]
        cell: Cell = (orthant_center(center, radius, signs), radius / 2)
        if hit == 0:
            center, radius = cell
            continue
        state = _domino_from_octants(signs, failed)
        break

    while cell[1] > 1:
        if len(state) == 2:
            cell, state = _two_domino_step_3d(view, cell, state, observer)
        else:
            cell = _four_domino_step(view, cell, state, observer)
    return _finish(view, session, cell)


def _domino_from_octants(signs, failed):
    """Best domino available around the occupied octant ``signs``.

    Returns ``(a, side_a, b, side_b)`` for a 4-domino or ``(a, side_a)`` for
    a 2-domino.
    """
    for a in range(3):
        for b in range(a + 1, 3):
            if {_flip(signs, a), _flip(signs, b), _flip(signs, a, b)} <= failed:
                return (a, -signs[a], b, -signs[b])
    for a in range(3):
        if _flip(signs, a) in failed:
            return (a, -signs[a])
    raise AssertionError("an octant after the first always has a failed neighbour")


def _two_domino_step_3d(view, cell: Cell, state, observer: Observer):
    c, half = cell
    a, side = state
    b, e = [j for j in range(3) if j != a]
    hit = view.probe_at(_shift(c, a, side * half), half)
    slab_a = c[a] + (side if hit else -side) * half / 2
    if observer:
        observer(_volume(half, 3) / 2)

    quarter = half / 2
    subs = {}
    for tb in (-1, 1):
        for te in (-1, 1):
            q = [0.0, 0.0, 0.0]
            q[a], q[b], q[e] = slab_a, c[b] + tb * quarter, c[e] + te * quarter
            subs[(tb, te)] = tuple(q)
    keys = list(subs)
    first = keys[_nearest(view, [subs[k] for k in keys])]
    if view.probe_at(subs[first], quarter):
        if observer:
            observer(_volume(quarter, 3))
        return (subs[first], quarter), (a, side)
    if observer:
        observer(_volume(quarter, 3) * 3)

    neighbours = [(-first[0], first[1]), (first[0], -first[1])]
    second = neighbours[_nearest(view, [subs[k] for k in neighbours])]
    if view.probe_at(subs[second], quarter):
        if observer:
            observer(_volume(quarter, 3))
        return (subs[second], quarter), _toward(a, side, second, first, b, e)
    if observer:
        observer(_volume(quarter, 3) * 2)

    # both remaining cubes touch an empty one inside the slab: 4-domino either way
    rest = [k for k in keys if k not in (first, second)]
    partner = {}
    for k in rest:
        partner[k] = first if sum(x != y for x, y in zip(k, first)) == 1 else second
    third = rest[_nearest(view, [subs[k] for k in rest])]
    occupied = third if view.probe_at(subs[third], quarter) else next(k for k in rest if k != third)
    if observer:
        observer(_volume(quarter, 3))
    return (subs[occupied], quarter), _toward(a, side, occupied, partner[occupied], b, e)


def _toward(a, side, key, empty_key, b, e):
    """4-domino orientation for sub-cube ``key`` whose in-slab neighbour ``empty_key`` is empty."""
    if key[0] != empty_key[0]:
        return (a, side, b, empty_key[0])
    return (a, side, e, empty_key[1])


def _four_domino_step(view, cell: Cell, state, observer: Observer) -> Cell:
    c, half = cell
    a, side_a, b, side_b = state
    e = 3 - a - b
    quarter = half / 2

    hit = view.probe_at(_shift(c, a, side_a * half), half)
    h_a = c[a] + (side_a if hit else -side_a) * quarter
    if observer:
        observer(_volume(half, 3) / 2)

    # straddles H1's empty a-neighbour and the empty b-side of the block
    p2 = list(c)
    p2[a] = h_a + side_a * quarter
    p2[b] = c[b] + side_b * half
    hit = view.probe_at(tuple(p2), half)
    q_b = c[b] + (side_b if hit else -side_b) * quarter
    if observer:
        observer(_volume(half, 3) / 4)

    options = []
    for t in (-1, 1):
        q = [0.0, 0.0, 0.0]
        q[a], q[b], q[e] = h_a, q_b, c[e] + t * quarter
        options.append(tuple(q))
    pick = _nearest(view, options)
    chosen = options[pick] if view.probe_at(options[pick], quarter) else options[1 - pick]
    if observer:
        observer(_volume(quarter, 3))
    return (chosen, quarter)
