"""
Inside central binary search
============================

A binary search on the probe radius finds the shell holding the nearest
POI. Face probes then tell which side of the cube it sits on.
"""

from rectisearch import ProblemConfig, make_session
from rectisearch.strategies import find_face, probe_face, run_strategy, shell_binary_search

# %%
# The shell search for a POI at L-infinity distance 5.3 inside radius 16.
# Each probe halves the bracket; the answer is the smallest integer radius
# that still holds the POI.
s = make_session([(5.3, 2.1)], ProblemConfig(2, 16, relaxed=False))
h = shell_binary_search(s, (0, 0), 0, 16, stop_width=1)
print("h =", h, "radii", [e[2] for e in s.events if e[0] == "probe"])

# %%
# Stopping at width 2 saves a probe.
s = make_session([(5.3, 2.1)], ProblemConfig(2, 16))
print("h =", shell_binary_search(s, (0, 0), 0, 16, stop_width=2), "probes", s.probe_count)

# %%
# A face probe steps one unit toward the face and probes with radius h - 1.
# The ball reaches the face but not the neighbouring faces.
for poi in [(10.0, 9.0), (10.0, 10.0), (-9.5, 0.0)]:
    s = make_session([poi], ProblemConfig(2, 16))
    print(poi, "right edge probe:", probe_face(s, (0, 0), 10, (1, 0)))

# %%
# find_face tries edges before corners; the last face is inferred.
s = make_session([(-9.5, -9.5)], ProblemConfig(2, 16))
print(find_face(s, (0, 0), 2, 10), "after", s.probe_count, "probes")

# %%
# A whole run in 4D records which face each phase pinned.
cfg = ProblemConfig(4, 2.0**16)
m = run_strategy("gcbs", make_session([(100.0, -40000.0, 2.5, 61000.0)], cfg), cfg)
print("faces", m.info["faces"], "P", m.P, "final", m.final_position)
