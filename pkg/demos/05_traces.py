"""
Traces and drawings
===================

A run can be exported as JSON, replayed against the same or another POI
set, and drawn as SVG.
"""

import sys
import tempfile
from pathlib import Path

from rectisearch import ProblemConfig, make_session
from rectisearch.render import render_svg
from rectisearch.strategies import run_strategy
from rectisearch.trace import TraceMismatch, dump_trace, export_trace, load_trace, replay_trace

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())

# %%
cfg = ProblemConfig(2, 16)
pois = [(5.3, 2.1)]
m = run_strategy("cbs2d", make_session(pois, cfg), cfg)
trace = export_trace(m, algo="cbs2d", cfg=cfg, pois=pois, seed=0)
dump_trace(trace, out / "cbs2d.json")
print(len(trace["events"]), "events")

# %%
# Replaying the events gives back the same metrics.
again = replay_trace(load_trace(out / "cbs2d.json"))
print(again.P == m.P, again.D == m.D, again.final_position == m.final_position)

# %%
# A POI set that answers some probe differently is caught.
try:
    replay_trace(trace, [(-5.0, -5.0)])
except TraceMismatch as e:
    print("mismatch:", e)

# %%
# Failed probes are hatched; under L1 the balls are diamonds.
for algo, metric in [("orthant", "linf"), ("cbs2d", "linf"), ("gcbs", "l1")]:
    cfg = ProblemConfig(2, 64, metric)
    pois = [(-21.5, 40.0), (50.0, 3.0)]
    m = run_strategy(algo, make_session(pois, cfg), cfg)
    path = out / f"{algo}-{metric}.svg"
    path.write_text(render_svg(export_trace(m, algo=algo, cfg=cfg, pois=pois)))
    print("wrote", path)
