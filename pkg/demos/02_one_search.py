"""
One search, five strategies
===========================

A session hides the POIs. A strategy may only move the search point and
probe balls around it; the session counts probes (P), travel (D) and the
largest number of times one POI answered (R).
"""

from rectisearch import ProblemConfig, make_session
from rectisearch.strategies import run_strategy
from rectisearch.world import delta_min, sealed_oracle

# %%
# Probes are closed balls centered on the search point.
cfg = ProblemConfig(k=2, n=16)
s = make_session([(5.0, 5.0)], cfg)
print(s.probe((0, 0), 5), s.probe((0, 0), 4.999))
s.move_to((3, 4))
print("travelled", s.path_length)

# %%
# The same hidden point, found by every planar strategy. n is the search
# radius: some POI is within n of the start.
poi = [(700.25, -1900.5)]
for algo in ("orthant", "domino2d", "cbs2d", "gcbs"):
    cfg = ProblemConfig(2, 2.0**11)
    session = make_session(poi, cfg)
    m = run_strategy(algo, session, cfg)
    d = delta_min(sealed_oracle(session))
    print(f"{algo:9s} P={m.P:3d}  D/dmin={m.D / d:6.2f}  R={m.R_max:2d}  end={m.final_position}")

# %%
# In three dimensions the domino strategy needs the L-infinity metric;
# the orthant and central searches work in any dimension.
for algo in ("orthant", "domino3d", "gcbs"):
    cfg = ProblemConfig(3, 2.0**11)
    session = make_session([(-50.0, 1000.0, 333.3)], cfg)
    m = run_strategy(algo, session, cfg)
    print(f"{algo:9s} P={m.P:3d}  D={m.D:8.1f}  success={m.success}")
