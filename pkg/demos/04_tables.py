"""
Benchmark tables
================

Batches of random instances, normalized the same way as the reference
tables: probes and responses by log2(n), travel by the true nearest
distance. POI coordinates are uniform in [0, n] and the search starts at
the middle of that box.

Pass a trial count on the command line for a tighter estimate, e.g.
``python demos/04_tables.py 10000``.
"""

import sys

from rectisearch import ProblemConfig
from rectisearch.simulator import TrialPlan, run_trials, write_results

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 300
n = 2.0**20

# %%
cells = [("orthant", k) for k in (1, 2, 3)] + [("domino2d", 2), ("domino3d", 3), ("cbs2d", 2)]
cells += [("gcbs", k) for k in (1, 2, 3, 4)]
print(f"{'algo':9s} k  {'P/log n':>14s}  {'D/dmin':>14s}  {'R/log n':>14s}")
stats = []
for algo, k in cells:
    s = run_trials(TrialPlan(ProblemConfig(k, n), algo, trials, seed=1))
    stats.append(s)
    cols = "  ".join(f"{s.mean(m):6.3f} / {s.max(m):6.2f}" if m != "D_norm" or s.max(m) < 1e3
                     else f"{s.mean(m):6.2f} / {s.max(m):6.0f}" for m in ("P_norm", "D_norm", "R_norm"))
    print(f"{algo:9s} {k}  {cols}")

# %%
# The same numbers as CSV (mean, max and population std per cell).
print(write_results(stats[:2]))
