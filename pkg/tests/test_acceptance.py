"""Acceptance gate: ten binding criteria, one pass/fail line each.

The criterion decorator registers each test with the reporting hook in
conftest, which prints a PASS/FAIL line per criterion in a summary
section at the end of the run.
"""

import math
import time

import numpy as np
from threadpoolctl import threadpool_limits

from miplace import (
    GainEvaluator,
    ObservationModel,
    build_covariance,
    check_monotonicity,
    check_submodularity,
    evaluate,
    exhaustive,
    gmrf_covariance,
    greedy,
    lazy_greedy,
    path_graph,
    random_spd,
    ring_graph,
    sample_observations,
    sample_states,
)
from miplace.objective import SensorSet


CRITERION_LINES = {}


def criterion(num, text):
    def wrap(fn):
        CRITERION_LINES[fn.__name__] = f"criterion {num:2d}: {text}"
        return fn

    return wrap


def harness_models():
    """The shared submodularity/monotonicity instance families."""
    return [
        ObservationModel(random_spd(10, seed=2026), 1.0),
        ObservationModel(gmrf_covariance(path_graph(10), epsilon=0.5), 1.0),
        ObservationModel(gmrf_covariance(ring_graph(10), epsilon=0.5), 1.0),
    ]


@criterion(1, "evaluate(empty set) is exactly 0.0 on 50 random instances")
def test_criterion_01():
    for seed in range(50):
        n = (seed % 20) + 1
        model = ObservationModel(random_spd(n, seed=seed), 1.0)
        assert evaluate(model, ()) == 0.0


@criterion(2, "submodularity: 1500 nested-triple trials, zero violations, <10s")
def test_criterion_02():
    start = time.perf_counter()
    for idx, model in enumerate(harness_models()):
        rep = check_submodularity(model, trials=500, seed=1000 * idx)
        assert rep.failures == 0, f"{rep.check_name} violated on family {idx}"
        assert rep.worst_violation >= -1e-9
    assert time.perf_counter() - start < 10.0


@criterion(3, "monotonicity: same harness, z(T)-z(S) >= -1e-9, zero violations")
def test_criterion_03():
    for idx, model in enumerate(harness_models()):
        rep = check_monotonicity(model, trials=500, seed=1000 * idx)
        assert rep.failures == 0
        assert rep.worst_violation >= -1e-9


@criterion(4, "Monte Carlo MI on 200k (X,Y) pairs within 0.02 nats of 0.5*ln 8")
def test_criterion_04():
    cov = build_covariance(np.array([[2.0, 1.0], [1.0, 2.0]]))
    model = ObservationModel(cov, 1.0)
    states = sample_states(model, seed=404, count=200_000)
    obs = sample_observations(model, SensorSet((0, 1)), states, seed=405)
    joint = np.hstack([states, obs])
    c = np.cov(joint.T)
    cxx, cyy = c[:2, :2], c[2:, 2:]
    estimate = 0.5 * (
        np.linalg.slogdet(cxx)[1] + np.linalg.slogdet(cyy)[1] - np.linalg.slogdet(c)[1]
    )
    assert abs(estimate - 0.5 * math.log(8.0)) < 0.02


@criterion(5, "greedy >= (1-((k-1)/k)^k) * optimum on 100 instances, k in 1..4, <60s")
def test_criterion_05():
    start = time.perf_counter()
    for seed in range(100):
        model = ObservationModel(random_spd(10, seed=seed), 1.0)
        for k in (1, 2, 3, 4):
            ratio = 1.0 - ((k - 1) / k) ** k
            best = exhaustive(model, k).objective
            assert greedy(model, k).objective >= ratio * best - 1e-9
    assert time.perf_counter() - start < 60.0


@criterion(6, "Schur gain equals evaluate difference within 1e-9 on 1000 queries")
def test_criterion_06():
    rng = np.random.default_rng(66)
    for trial in range(1000):
        n = int(rng.integers(2, 13))
        model = ObservationModel(random_spd(n, seed=trial), 1.0)
        size = int(rng.integers(0, n))
        nodes = rng.choice(n, size=size + 1, replace=False)
        base, j = [int(x) for x in nodes[:-1]], int(nodes[-1])
        ev = GainEvaluator.empty(model)
        for i in base:
            ev = ev.commit(i)
        diff = evaluate(model, base + [j]) - evaluate(model, base)
        assert abs(ev.marginal_gain(j) - diff) <= 1e-9


@criterion(7, "lazy == naive on 200 instances; never more evals, fewer on >= 150")
def test_criterion_07():
    rng = np.random.default_rng(7)
    strictly_fewer = 0
    for trial in range(200):
        n = int(rng.integers(2, 51))
        k = int(rng.integers(1, min(n, 10) + 1))
        model = ObservationModel(random_spd(n, seed=trial), 1.0)
        naive = greedy(model, k)
        lazy = lazy_greedy(model, k)
        assert lazy.selected == naive.selected
        assert lazy.evaluations <= naive.evaluations
        strictly_fewer += lazy.evaluations < naive.evaluations
    assert strictly_fewer >= 150


@criterion(8, "identity covariance: greedy objective equals (k/2) ln 2 to 1e-12")
def test_criterion_08():
    model = ObservationModel(build_covariance(np.eye(100)), 1.0)
    res = greedy(model, 10)
    assert abs(res.objective - 5.0 * math.log(2.0)) <= 1e-12
    assert res.selected == list(range(10))


@criterion(9, "det(A+B) >= det(A)+det(B) on 500 PSD pairs incl. rank-deficient")
def test_criterion_09():
    rng = np.random.default_rng(99)
    for _ in range(500):
        n = int(rng.integers(1, 9))
        mats = []
        for _ in range(2):
            rank = int(rng.integers(0, n + 1))
            g = rng.standard_normal((n, rank))
            mats.append(g @ g.T)
        a, b = mats
        det_sum = np.linalg.det(a + b)
        slack = det_sum - np.linalg.det(a) - np.linalg.det(b)
        assert slack >= -1e-8 * max(1.0, det_sum)


@criterion(10, "n=2000, k=50 single-thread greedy <60s; doubling s <= ~4x sweep time")
def test_criterion_10():
    model = ObservationModel(random_spd(2000, seed=42), 1.0)
    with threadpool_limits(limits=1):
        start = time.perf_counter()
        res = greedy(model, 50)
        elapsed = time.perf_counter() - start
        assert elapsed < 60.0
        assert len(res.selected) == 50

        # per-gain cost scaling: one batched sweep over a fixed candidate
        # tail, measured at committed-prefix sizes 128 and 256
        ev = GainEvaluator.empty(model)
        ev_128 = None
        for j in range(256):
            ev = ev.commit(j)
            if len(ev.selection) == 128:
                ev_128 = ev
        ev_256 = ev
        tail = np.arange(256, 2000, dtype=np.intp)
        times = []
        for snapshot in (ev_128, ev_256):
            best = math.inf
            for _ in range(5):
                t0 = time.perf_counter()
                snapshot.marginal_gains(tail)
                best = min(best, time.perf_counter() - t0)
            times.append(best)
        assert times[1] / times[0] <= 6.0  # 4x theoretical, 1.5x slack
