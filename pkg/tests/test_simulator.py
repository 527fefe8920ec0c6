import csv
import io
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rectisearch.geometry import Metric, distance
from rectisearch.simulator import (
    CSV_FIELDS,
    AggregateStats,
    Moments,
    TrialPlan,
    build_trial,
    check_bounds,
    facet_hit_probability,
    run_trial,
    run_trials,
    sample_pois,
    trial_rng,
    write_results,
)
from rectisearch.world import ProblemConfig, RunMetrics


def metrics(P=0, D=0.0, R=0):
    return RunMetrics(P=P, D=D, R_max=R, success=True, final_position=(0.0, 0.0))


# -- sampling -----------------------------------------------------------------


def test_sample_pois_deterministic():
    cfg = ProblemConfig(2, 16)
    a = sample_pois(cfg, 3, 1.0, trial_rng(42, 0))
    b = sample_pois(cfg, 3, 1.0, trial_rng(42, 0))
    assert a == b and len(a) == 3
    assert a != sample_pois(cfg, 3, 1.0, trial_rng(42, 1))
    assert all(0 <= c <= 16 for p in a for c in p)


def test_sample_pois_rejects_near_origin():
    cfg = ProblemConfig(2, 4)
    pts = sample_pois(cfg, 10_000, 1.0, np.random.default_rng(0))
    assert min(distance(p, (0, 0), Metric.LINF) for p in pts) >= 1


def test_sample_pois_uniform_mean():
    n = 2.0**20
    pts = np.array(sample_pois(ProblemConfig(2, n), 100_000, 1.0, np.random.default_rng(1)))
    tol = 3 * n / math.sqrt(12 * 100_000)
    assert np.all(np.abs(pts.mean(axis=0) - n / 2) <= tol)


def test_sample_pois_guarantees_one_within_radius():
    cfg = ProblemConfig(3, 100)
    rng = np.random.default_rng(5)
    for _ in range(200):
        pts = sample_pois(cfg, 2, 1.0, rng, start=(50, 50, 50), radius=10)
        assert any(distance(p, (50, 50, 50), Metric.LINF) <= 10 for p in pts)


def test_sample_pois_bad_min_distance():
    with pytest.raises(ValueError):
        sample_pois(ProblemConfig(2, 16), 1, 16, np.random.default_rng(0))


def test_build_trial_is_in_session_coordinates():
    plan = TrialPlan(ProblemConfig(2, 1024), "gcbs", 10, poi_count=4, seed=9)
    pois = build_trial(plan, 3)
    assert pois == build_trial(plan, 3)
    assert all(-512 <= c <= 512 for p in pois for c in p)
    assert min(distance(p, (0, 0), Metric.LINF) for p in pois) <= 512
    origin = TrialPlan(ProblemConfig(2, 1024), "gcbs", 10, seed=9, frame="origin")
    assert all(0 <= c <= 1024 for p in build_trial(origin, 0) for c in p)


def test_trial_plan_validation():
    cfg = ProblemConfig(2, 16)
    for kwargs in [
        dict(trials=0),
        dict(trials=1, poi_count=0),
        dict(trials=1, seed=-1),
        dict(trials=1, seed=2**64),
        dict(trials=1, min_origin_distance=8),
        dict(trials=1, frame="corner"),
    ]:
        with pytest.raises(ValueError):
            TrialPlan(cfg, "gcbs", **kwargs)


# -- aggregation --------------------------------------------------------------


def test_moments_population_std():
    m = Moments.of([1.0, 2.0, 3.0, 4.0])
    assert m.mean == 2.5 and m.max == 4.0 and m.count == 4
    assert m.std == pytest.approx(math.sqrt(1.25))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=200), st.data())
def test_moments_merge_matches_full_range(values, data):
    cuts = sorted(data.draw(st.lists(st.integers(0, len(values)), max_size=4)))
    parts = [values[a:b] for a, b in zip([0] + cuts, cuts + [len(values)])]
    merged = Moments()
    for part in parts:
        merged = merged.merge(Moments.of(part))
    full = Moments.of(values)
    assert merged.count == full.count
    assert merged.max == full.max
    scale = max(1.0, max(abs(v) for v in values))
    assert merged.mean == pytest.approx(full.mean, rel=1e-9, abs=1e-9 * scale)
    assert merged.std == pytest.approx(full.std, rel=1e-9, abs=1e-6 * scale)


def test_aggregate_merge_of_trial_ranges():
    cfg = ProblemConfig(3, 2.0**12)
    full = run_trials(TrialPlan(cfg, "gcbs", 300, seed=3), workers=1)
    # trials 0..149 and 150..299 aggregated separately, then merged
    from rectisearch.simulator import METRIC_NAMES, _run_range

    plan = TrialPlan(cfg, "gcbs", 300, seed=3)
    a_vals, _ = _run_range(plan, 0, 150)
    b_vals, _ = _run_range(plan, 150, 300)
    parts = [
        AggregateStats(plan, {m: Moments.of(v[:, j].tolist()) for j, m in enumerate(METRIC_NAMES)})
        for v in (a_vals, b_vals)
    ]
    merged = parts[0].merge(parts[1])
    for m in METRIC_NAMES:
        assert merged.mean(m) == pytest.approx(full.mean(m), rel=1e-9)
        assert merged.std(m) == pytest.approx(full.std(m), rel=1e-9)
        assert merged.max(m) == full.max(m)


def test_run_trials_same_result_for_any_worker_count():
    plan = TrialPlan(ProblemConfig(2, 2.0**16), "cbs2d", 256, poi_count=3, seed=123)
    one = run_trials(plan, workers=1)
    two = run_trials(plan, workers=2)
    assert write_results([one]) == write_results([two])
    assert one.violations == two.violations == []


def test_run_trials_env_var(monkeypatch):
    plan = TrialPlan(ProblemConfig(2, 2.0**10), "gcbs", 130, seed=1)
    monkeypatch.setenv("RECTISEARCH_THREADS", "2")
    a = run_trials(plan)
    monkeypatch.setenv("RECTISEARCH_THREADS", "0")
    b = run_trials(plan)
    assert write_results([a]) == write_results([b])
    monkeypatch.setenv("RECTISEARCH_THREADS", "lots")
    with pytest.raises(ValueError):
        run_trials(plan)


def test_run_trial_values():
    plan = TrialPlan(ProblemConfig(2, 2.0**20), "gcbs", 1, seed=7)
    out = run_trial(plan, 0)
    assert out.values[0] == out.metrics.P / 20
    assert out.values[1] == out.metrics.D / out.delta_min
    assert out.values[2] == out.metrics.R_max / 20
    assert out.violations == []


def test_small_reference_cells():
    cfg = ProblemConfig(1, 2.0**20)
    s = run_trials(TrialPlan(cfg, "orthant", 2000, seed=4), workers=1)
    assert s.mean("P_norm") == pytest.approx(0.95, abs=0.01)
    assert s.max("P_norm") <= 1.0
    assert s.count == 2000


# -- bound checks -------------------------------------------------------------


def test_check_bounds_examples():
    n = 2.0**20
    cfg = ProblemConfig(2, n)
    assert check_bounds(metrics(P=41), cfg, "domino2d", 10.0) == []
    assert check_bounds(metrics(P=42), cfg, "domino2d", 10.0) == ["P_bound"]
    assert check_bounds(metrics(P=3, R=21), cfg, "orthant", 10.0) == ["R_bound"]
    assert check_bounds(metrics(P=3, R=20), cfg, "orthant", 10.0) == []
    with pytest.raises(ValueError):
        check_bounds(metrics(), cfg, "spiral", 1.0)


def test_check_bounds_central_search():
    n = 2.0**20
    cfg = ProblemConfig(3, n, relaxed=False)
    assert check_bounds(metrics(P=3 * 20 + 27, D=3 * 10 + 54), cfg, "gcbs", 10.0) == []
    assert check_bounds(metrics(P=3 * 20 + 28, D=3 * 10 + 54.5), cfg, "gcbs", 10.0) == ["P_bound", "D_bound"]
    # width-2 face probes double the additive travel allowance
    relaxed = ProblemConfig(3, n)
    assert check_bounds(metrics(P=1, D=3 * 10 + 108), relaxed, "gcbs", 10.0) == []
    cfg2 = ProblemConfig(2, n)
    assert check_bounds(metrics(P=10, D=2 * 10 + 16), cfg2, "cbs2d", 10.0) == []
    assert check_bounds(metrics(P=10, D=2 * 10 + 16.5), cfg2, "cbs2d", 10.0) == ["D_bound"]


def test_check_bounds_domino3d_and_prefix():
    cfg = ProblemConfig(3, 2.0**20)
    assert check_bounds(metrics(P=64), cfg, "domino3d", 5.0) == []
    assert check_bounds(metrics(P=65), cfg, "domino3d", 5.0) == ["P_bound"]
    # the prefix adds ceil(log2 delta) + 1 probes to the allowance
    assert check_bounds(metrics(P=64 + 4), cfg, "exp+domino3d", 5.0) == []
    assert check_bounds(metrics(P=64 + 5), cfg, "exp+domino3d", 5.0) == ["P_bound"]


# -- facet-hit estimator ------------------------------------------------------


def test_facet_hit_examples():
    assert facet_hit_probability(1, 3.7) == 1.0
    assert facet_hit_probability(2, 10) == 18 / 19
    assert facet_hit_probability(2, 10.0) == 18 / 19
    assert abs(facet_hit_probability(200, 200) - 1 / (math.e - 1)) < 0.01
    with pytest.raises(ValueError):
        facet_hit_probability(2, 1)


def test_facet_hit_matches_direct_formula_where_stable():
    for k in (2, 3, 5):
        for d in (1.5, 3.0, 10.0, 100.0):
            direct = k * (d - 1) ** (k - 1) / (d**k - (d - 1) ** k)
            assert facet_hit_probability(k, d) == pytest.approx(direct, rel=1e-9)


def test_facet_hit_stable_for_huge_delta():
    # the direct difference cancels to zero here; the limit is 1
    assert facet_hit_probability(3, 1e17) == pytest.approx(1.0, rel=1e-9)


@pytest.mark.parametrize("delta", [8.0, 50.0, 1000.0])
def test_facet_hit_decreases_with_k(delta):
    vals = [facet_hit_probability(k, delta) for k in range(1, int(min(delta, 200)) + 1)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_facet_hit_limit_along_diagonal():
    for k in (50, 100, 200):
        assert abs(facet_hit_probability(k, k) - 1 / (math.e - 1)) < 0.02
    errs = [abs(facet_hit_probability(k, k) - 1 / (math.e - 1)) for k in (50, 100, 200)]
    assert errs == sorted(errs, reverse=True)


# -- output formats -----------------------------------------------------------


def test_csv_and_json_schema():
    plans = [TrialPlan(ProblemConfig(k, 2.0**10), "gcbs", 20, seed=2) for k in (2, 3)]
    stats = [run_trials(p, workers=1) for p in plans]
    text = write_results(stats, "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert tuple(rows[0].keys()) == CSV_FIELDS
    assert [r["stat"] for r in rows] == ["mean", "max", "std"] * 2
    assert {r["k"] for r in rows} == {"2", "3"}
    assert rows[0]["n"] == "1024" and rows[0]["metric"] == "linf" and rows[0]["trials"] == "20"
    # floats round-trip exactly
    assert float(rows[0]["P_norm"]) == stats[0].mean("P_norm")
    js = json.loads(write_results(stats, "json"))
    assert [tuple(r.keys()) for r in js] == [CSV_FIELDS] * 6
    assert js[0]["P_norm"] == stats[0].mean("P_norm")
    with pytest.raises(ValueError):
        write_results(stats, "xml")
