"""
No upper bound, and why facets dominate
=======================================

When nothing bounds the distance, a doubling sweep finds a radius first.
Then a look at how often the nearest POI lies on a facet rather than on
a lower-dimensional face of its shell.
"""

import math

from rectisearch import ProblemConfig, make_session
from rectisearch.simulator import facet_hit_probability
from rectisearch.strategies import exponential_prefix, run_strategy

# %%
# Radii 1, 2, 4, 8: the first hit brackets the distance within a factor 2.
s = make_session([(5.3, -1.0)], ProblemConfig(2, 2.0**40))
print(exponential_prefix(s), "after", s.probe_count, "probes")

# %%
# With the prefix the cost depends on the distance, not on the nominal n.
for d in (10.0, 1000.0, 100000.0):
    cfg = ProblemConfig(3, 2.0**40)
    m = run_strategy("exp+gcbs", make_session([(d, d / 3, -d / 7)], cfg), cfg)
    print(f"dmin={d:>8g}  P={m.P:3d}  success={m.success}")

# %%
# Several POIs: the search ends next to one of them.
cfg = ProblemConfig(2, 1024)
pois = [(900.0, 10.0), (-300.0, -250.0), (5.0, 700.0)]
m = run_strategy("gcbs", make_session(pois, cfg), cfg)
print("ended at", m.final_position)

# %%
# Share of the outer unit shell of a delta-cube taken by its facets. It
# falls with k and tends to 1/(e - 1) along delta = k.
for k in (2, 3, 8):
    print(k, [round(facet_hit_probability(k, d), 4) for d in (4, 16, 1024)])
print("k = delta = 200:", round(facet_hit_probability(200, 200), 4), "limit", round(1 / (math.e - 1), 4))
