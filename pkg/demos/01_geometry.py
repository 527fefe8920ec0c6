"""
Rectilinear geometry
====================

The two metrics, the faces of a cube and the Gray order in which the
orthant strategy visits sub-cubes.
"""

from rectisearch.geometry import Metric, all_faces, distance, enumerate_faces, gray_orthant_order

# %%
# Under L1 a probe ball is a diamond, under L-infinity a square. The same
# pair of points is 7 apart in one and 4 apart in the other.
a, b = (3.0, 4.0), (0.0, 0.0)
print("L1  ", distance(a, b, Metric.L1))
print("Linf", distance(a, b, Metric.LINF))

# %%
# A face of a p-cube is a sign vector in {-1, 0, +1}^p: nonzero entries are
# the coordinates pinned to the boundary. A square has 4 edges and 4 corners.
print(enumerate_faces(2, 1))
print(enumerate_faces(2, 2))

# %%
# Every nonzero sign vector is a face, so a p-cube has 3^p - 1 of them.
# Central binary search probes them largest first.
for p in range(1, 6):
    print(p, len(all_faces(p)), 3**p - 1)

# %%
# Orthants in Gray order: neighbours differ in one sign, so the search point
# only ever moves along one axis between consecutive orthant probes.
for signs in gray_orthant_order(3):
    print(signs)
