import itertools

import pytest
from hypothesis import given, strategies as st

from rectisearch.geometry import (
    Metric,
    all_faces,
    ceil_log2,
    distance,
    enumerate_faces,
    gray_orthant_order,
    norm,
    orthant_center,
)


def test_distance_examples():
    assert distance((3, 4), (0, 0), Metric.L1) == 7
    assert distance((3, 4), (0, 0), Metric.LINF) == 4
    for m in Metric:
        assert distance((1, -2, 5), (1, -2, 5), m) == 0


def test_distance_dimension_mismatch():
    with pytest.raises(ValueError):
        distance((1, 2), (1, 2, 3), Metric.L1)


def test_metric_parse():
    assert Metric.parse("L1") is Metric.L1
    assert Metric.parse("linf") is Metric.LINF
    assert Metric.parse("chebyshev") is Metric.LINF
    with pytest.raises(ValueError):
        Metric.parse("l2")


coords = st.floats(-1e6, 1e6, allow_nan=False)


@given(st.integers(1, 6).flatmap(lambda k: st.tuples(*[st.lists(coords, min_size=k, max_size=k)] * 3)))
def test_metric_axioms(pts):
    a, b, c = pts
    for m in Metric:
        assert distance(a, b, m) == distance(b, a, m)
        assert distance(a, b, m) >= 0
        assert distance(a, c, m) <= distance(a, b, m) + distance(b, c, m) + 1e-6
    # the L-infinity ball sits inside the L1 ball of the same radius
    assert distance(a, b, Metric.LINF) <= distance(a, b, Metric.L1)


def test_norm_matches_distance_to_origin():
    p = (3.0, -7.5, 2.0)
    for m in Metric:
        assert norm(p, m) == distance(p, (0, 0, 0), m)


@pytest.mark.parametrize("n, t", [(1, 0), (2, 1), (5, 3), (8, 3), (9, 4), (2**20, 20), (2**20 + 1, 21), (5.3, 3)])
def test_ceil_log2(n, t):
    assert ceil_log2(n) == t


def test_ceil_log2_rejects_small():
    with pytest.raises(ValueError):
        ceil_log2(0.5)


def test_enumerate_faces_examples():
    assert sorted(enumerate_faces(2, 1)) == sorted([(1, 0), (-1, 0), (0, 1), (0, -1)])
    corners = enumerate_faces(3, 3)
    assert len(corners) == 8 and set(corners) == set(itertools.product((1, -1), repeat=3))
    assert sum(len(enumerate_faces(4, a)) for a in range(1, 5)) == 80


@pytest.mark.parametrize("p", range(1, 9))
def test_all_faces_is_every_nonzero_sign_vector(p):
    faces = all_faces(p)
    assert len(faces) == 3**p - 1
    assert set(faces) == set(itertools.product((-1, 0, 1), repeat=p)) - {(0,) * p}
    # highest-dimensional faces (fewest fixed coordinates) come first
    fixed = [sum(1 for s in f if s) for f in faces]
    assert fixed == sorted(fixed)


def test_enumerate_faces_bad_args():
    for p, a in [(0, 1), (2, 0), (2, 3)]:
        with pytest.raises(ValueError):
            enumerate_faces(p, a)


def test_gray_order_examples():
    assert gray_orthant_order(1) == [(-1,), (1,)]
    assert gray_orthant_order(2) == [(-1, -1), (-1, 1), (1, 1), (1, -1)]


@pytest.mark.parametrize("k", range(1, 11))
def test_gray_order_adjacent_and_complete(k):
    order = gray_orthant_order(k)
    assert len(order) == 2**k == len(set(order))
    for a, b in zip(order, order[1:]):
        assert sum(x != y for x, y in zip(a, b)) == 1


def test_orthant_center_examples():
    assert orthant_center((0, 0), 4, (1, 1)) == (2, 2)
    assert orthant_center((2, 2), 2, (-1, 1)) == (1, 3)
    assert orthant_center((0, 0, 0), 8, (1, -1, 1)) == (4, -4, 4)
    with pytest.raises(ValueError):
        orthant_center((0, 0), 0, (1, 1))
