"""The property suite itself: report semantics, reproducibility, and the
agreement between its incremental slacks and from-scratch evaluation."""

import math

import numpy as np
import pytest

from miplace import (
    InstanceTooSmallError,
    ObservationModel,
    build_covariance,
    check_det_superadditivity,
    check_monotonicity,
    check_nemhauser_ratio,
    check_submodularity,
    check_zero_at_empty,
    diagonal_covariance,
    evaluate,
    exhaustive,
    gmrf_covariance,
    greedy,
    path_graph,
    run_all_checks,
)
from miplace.checks import gain_after, sample_nested_triple
from conftest import exchangeable_model, spd_model


class TestZeroAtEmpty:
    def test_random_instance(self):
        rep = check_zero_at_empty(spd_model(8, seed=3))
        assert rep.failures == 0 and rep.worst_violation == 0.0 and rep.trials == 1

    def test_gmrf_instance(self):
        m = ObservationModel(gmrf_covariance(path_graph(6), 0.5), 1.0)
        assert check_zero_at_empty(m).failures == 0

    def test_smallest_instance(self):
        m = ObservationModel(build_covariance(np.eye(1)), 1.0)
        assert check_zero_at_empty(m).failures == 0


class TestSubmodularity:
    def test_hand_slack_is_positive(self):
        m = exchangeable_model()
        slack = gain_after(m, [], 1) - gain_after(m, [0], 1)
        expected = 0.5 * math.log(3.0) - 0.5 * math.log(8.0 / 3.0)
        assert slack == pytest.approx(expected, abs=1e-12)

    def test_random_instance_has_no_violations(self):
        rep = check_submodularity(spd_model(10, seed=4), trials=200, seed=7)
        assert rep.failures == 0
        assert rep.worst_violation >= -rep.tolerance
        assert rep.trials == 200 and rep.seed == 7

    def test_diagonal_instance_has_exactly_zero_slacks(self):
        m = ObservationModel(diagonal_covariance([3.0, 2.0, 1.0, 0.5]), 1.0)
        rep = check_submodularity(m, trials=100, seed=1)
        assert rep.worst_violation == 0.0 and rep.failures == 0

    def test_small_instance_rejected(self):
        with pytest.raises(InstanceTooSmallError):
            check_submodularity(exchangeable_model(), trials=5, seed=0)

    def test_reproducible(self):
        m = spd_model(9, seed=0)
        assert check_submodularity(m, 50, seed=3) == check_submodularity(m, 50, seed=3)

    def test_incremental_slacks_match_evaluate_differences(self):
        m = spd_model(10, seed=12)
        seed, trials = 5, 100
        rep = check_submodularity(m, trials=trials, seed=seed)
        worst_direct = math.inf
        for trial in range(trials):
            rng = np.random.default_rng(seed + trial)
            s_nodes, t_nodes, j = sample_nested_triple(rng, m.n)
            rho_s = evaluate(m, s_nodes + [j]) - evaluate(m, s_nodes)
            rho_t = evaluate(m, t_nodes + [j]) - evaluate(m, t_nodes)
            direct = rho_s - rho_t
            incremental = gain_after(m, s_nodes, j) - gain_after(m, t_nodes, j)
            assert abs(direct - incremental) <= 1e-9
            worst_direct = min(worst_direct, direct)
        assert worst_direct == pytest.approx(rep.worst_violation, abs=1e-9)


class TestMonotonicity:
    def test_random_instance_has_no_violations(self):
        rep = check_monotonicity(spd_model(10, seed=2), trials=200, seed=9)
        assert rep.failures == 0 and rep.worst_violation >= -rep.tolerance

    def test_gmrf_instance(self):
        m = ObservationModel(gmrf_covariance(path_graph(10), 0.5), 1.0)
        rep = check_monotonicity(m, trials=200, seed=9)
        assert rep.failures == 0

    def test_small_instance_rejected(self):
        m = ObservationModel(build_covariance(np.eye(1)), 1.0)
        with pytest.raises(InstanceTooSmallError):
            check_monotonicity(m, trials=5, seed=0)

    def test_reproducible(self):
        m = spd_model(7, seed=1)
        assert check_monotonicity(m, 40, seed=2) == check_monotonicity(m, 40, seed=2)


class TestDetSuperadditivity:
    def test_hand_identities(self):
        # identity pair: det doubles beat the sum of parts
        assert np.linalg.det(2 * np.eye(2)) >= 1.0 + 1.0
        # complementary singular summands: 1 >= 0 + 0
        a, b = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
        assert np.linalg.det(a + b) == pytest.approx(1.0)
        assert np.linalg.det(a) == np.linalg.det(b) == 0.0

    def test_random_pairs_have_no_violations(self):
        rep = check_det_superadditivity(n=6, trials=300, seed=11)
        assert rep.failures == 0 and rep.worst_violation >= -rep.tolerance

    def test_scalar_case_is_tight(self):
        rep = check_det_superadditivity(n=1, trials=100, seed=0)
        assert rep.failures == 0
        assert abs(rep.worst_violation) <= 1e-12  # (a+b) - a - b, roundoff only

    def test_bad_dimension_rejected(self):
        with pytest.raises(InstanceTooSmallError):
            check_det_superadditivity(n=0, trials=5, seed=0)


class TestNemhauserRatio:
    def test_k1_greedy_is_optimal(self):
        rep = check_nemhauser_ratio(n=8, k=1, trials=20, seed=3)
        assert rep.failures == 0
        for seed in range(5):
            m = spd_model(8, seed=seed)
            assert greedy(m, 1).objective == pytest.approx(
                exhaustive(m, 1).objective, abs=1e-9
            )

    def test_k2_ratio_holds(self):
        rep = check_nemhauser_ratio(n=9, k=2, trials=30, seed=5)
        assert rep.failures == 0 and rep.worst_violation >= -rep.tolerance

    def test_reproducible(self):
        a = check_nemhauser_ratio(n=7, k=3, trials=10, seed=8)
        assert a == check_nemhauser_ratio(n=7, k=3, trials=10, seed=8)


class TestRunAllChecks:
    def test_five_reports_in_order(self):
        reports = run_all_checks(spd_model(8, seed=6), trials=30, seed=1)
        assert [r.check_name for r in reports] == [
            "zero_at_empty",
            "submodularity",
            "monotonicity",
            "det_superadditivity",
            "nemhauser_ratio",
        ]
        assert all(r.failures == 0 for r in reports)

    def test_nonpositive_trials_rejected(self):
        with pytest.raises(ValueError):
            run_all_checks(spd_model(8, seed=6), trials=0, seed=1)

    def test_report_serialization_keys(self):
        rep = check_zero_at_empty(spd_model(4, seed=0))
        assert list(rep.to_dict().keys()) == [
            "check_name",
            "trials",
            "failures",
            "worst_violation",
            "seed",
            "tolerance",
        ]

    def test_tolerance_overrides_reach_reports(self):
        reports = run_all_checks(
            spd_model(6, seed=3),
            trials=20,
            seed=2,
            log_tolerance=1e-3,
            det_tolerance=1e-4,
        )
        by_name = {r.check_name: r for r in reports}
        assert by_name["zero_at_empty"].tolerance == 0.0
        assert by_name["submodularity"].tolerance == 1e-3
        assert by_name["monotonicity"].tolerance == 1e-3
        assert by_name["nemhauser_ratio"].tolerance == 1e-3
        assert by_name["det_superadditivity"].tolerance == 1e-4

    def test_tolerance_changes_failure_count_not_slacks(self):
        # A huge tolerance can only reduce failures; slacks are unchanged.
        loose = check_submodularity(spd_model(7, seed=5), 50, seed=9, tolerance=10.0)
        tight = check_submodularity(spd_model(7, seed=5), 50, seed=9)
        assert loose.worst_violation == tight.worst_violation
        assert loose.failures == 0
        assert loose.tolerance == 10.0

    def test_det_check_capped_on_large_models(self):
        # At n=12, rank-deficient pairs with rank(A)+rank(B) < n have a
        # true det(A+B) of exactly 0; input rounding alone then leaves a
        # residue past the relative tolerance (seed 2, trial 128 is such
        # a case). The suite must cap the size it hands the det check.
        reports = run_all_checks(spd_model(12, seed=5), trials=200, seed=2)
        by_name = {r.check_name: r for r in reports}
        assert by_name["det_superadditivity"].failures == 0
