"""Rectilinear geometry shared by every search strategy.

Points are plain tuples of floats. Two metrics are supported, ``L1`` and
``Linf``; both are exposed through :func:`distance` so callers never branch
on the metric themselves.
"""

from __future__ import annotations

import enum
import itertools
import math
from typing import List, Sequence, Tuple

Point = Tuple[float, ...]
FaceVector = Tuple[int, ...]
SignVector = Tuple[int, ...]

__all__ = [
    "Metric",
    "Point",
    "FaceVector",
    "SignVector",
    "distance",
    "norm",
    "ceil_log2",
    "enumerate_faces",
    "all_faces",
    "gray_orthant_order",
    "orthant_center",
]


class Metric(str, enum.Enum):
    L1 = "l1"
    LINF = "linf"

    @classmethod
    def parse(cls, value: "str | Metric") -> "Metric":
        if isinstance(value, Metric):
            return value
        key = str(value).strip().lower().replace("_", "")
        if key in ("l1", "manhattan", "taxicab"):
            return cls.L1
        if key in ("linf", "inf", "chebyshev", "lmax", "l∞"):
            return cls.LINF
        raise ValueError(f"unknown metric {value!r}; expected 'l1' or 'linf'")


def distance(a: Sequence[float], b: Sequence[float], metric: Metric) -> float:
    """Distance between two points of equal dimension under ``metric``."""
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} != {len(b)}")
    if metric is Metric.LINF:
        return max((abs(x - y) for x, y in zip(a, b)), default=0.0)
    return math.fsum(abs(x - y) for x, y in zip(a, b))


def norm(a: Sequence[float], metric: Metric) -> float:
    if metric is Metric.LINF:
        return max((abs(x) for x in a), default=0.0)
    return math.fsum(abs(x) for x in a)


def ceil_log2(n: float) -> int:
    """Smallest integer ``t`` with ``2**t >= n``."""
    if not n >= 1:
        raise ValueError(f"ceil_log2 needs n >= 1, got {n!r}")
    if isinstance(n, int) or float(n).is_integer():
        return (int(n) - 1).bit_length()
    t = math.ceil(math.log2(n))
    # log2 rounding can land one off near powers of two
    while 2.0 ** t < n:
        t += 1
    while t > 0 and 2.0 ** (t - 1) >= n:
        t -= 1
    return t


def enumerate_faces(p: int, a: int) -> List[FaceVector]:
    """All faces of codimension ``a`` of a ``p``-cube.

    Ordered by fixed-index subset (lexicographic), then by sign pattern
    with +1 tried before -1 on each fixed index.
    """
    if p < 1 or not 1 <= a <= p:
        raise ValueError(f"need 1 <= a <= p, got p={p}, a={a}")
    faces = []
    for fixed in itertools.combinations(range(p), a):
        for signs in itertools.product((1, -1), repeat=a):
            s = [0] * p
            for idx, sign in zip(fixed, signs):
                s[idx] = sign
            faces.append(tuple(s))
    return faces


def all_faces(p: int) -> List[FaceVector]:
    """Every proper face of a ``p``-cube, highest-dimensional first."""
    return [f for a in range(1, p + 1) for f in enumerate_faces(p, a)]


def gray_orthant_order(k: int) -> List[SignVector]:
    """Binary-reflected Gray ordering of the ``2**k`` orthants.

    Starts at the all-negative orthant; consecutive entries differ in one
    coordinate. Bit ``j`` of the Gray word set means coordinate ``j`` is +1.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    order = []
    for i in range(2 ** k):
        g = i ^ (i >> 1)
        order.append(tuple(1 if (g >> (k - 1 - j)) & 1 else -1 for j in range(k)))
    return order


def orthant_center(center: Sequence[float], radius: float, signs: Sequence[int]) -> Point:
    if len(center) != len(signs):
        raise ValueError(f"dimension mismatch: {len(center)} != {len(signs)}")
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius!r}")
    half = radius / 2
    return tuple(c + half * s for c, s in zip(center, signs))
