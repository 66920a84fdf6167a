"""Randomized numeric certification of the objective's structural laws.

Each check draws seeded trials, measures a slack that the theory says is
nonnegative, and reports how close to violation the worst trial came.
Slacks for log-domain quantities use an absolute tolerance; the raw
determinant check normalizes its slack by max(1, det(A+B)) so one
relative tolerance covers wildly different determinant scales.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covariances import random_spd
from .errors import InstanceTooSmallError
from .objective import GainEvaluator, ObservationModel, evaluate
from .optimizers import exhaustive, greedy

LOG_DOMAIN_TOL = 1e-9
DET_RELATIVE_TOL = 1e-8

# Fixed per-check seed offsets, far apart so per-trial derived seeds
# (base + trial index) from different checks never collide.
_SUBMODULARITY_OFFSET = 0
_MONOTONICITY_OFFSET = 10_000_000
_SUPERADDITIVITY_OFFSET = 20_000_000
_NEMHAUSER_OFFSET = 30_000_000

# Largest size run_all_checks hands the determinant check. The check's
# inputs are rounded G G^T products; when rank(A) + rank(B) < n the true
# det(A+B) is exactly 0 and input rounding alone leaves a signed residue
# that grows like ||A+B||^(n-1) * eps, overtaking the fixed relative
# tolerance near n = 10 (measured worst slack: 1e-9 at n=8, 6e-8 at
# n=10, 5e-6 at n=12, over 20k trials). n=8 keeps a ~10x margin. The
# law is dimension-independent, so capping loses no coverage; callers
# probing larger n directly can loosen `tolerance`.
_DET_CHECK_MAX_N = 8


@dataclass
class CheckReport:
    """Summary of one seeded property check.

    worst_violation is the minimum slack seen, so it lower-bounds every
    trial; failures counts trials with slack < -tolerance.
    """

    check_name: str
    trials: int
    failures: int
    worst_violation: float
    seed: int
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "trials": self.trials,
            "failures": self.failures,
            "worst_violation": self.worst_violation,
            "seed": self.seed,
            "tolerance": self.tolerance,
        }


def _summarize(name: str, slacks: list[float], seed: int, tol: float) -> CheckReport:
    failures = sum(1 for s in slacks if s < -tol)
    worst = min(slacks)
    return CheckReport(name, len(slacks), failures, worst, seed, tol)


def sample_nested_triple(
    rng: np.random.Generator, n: int
) -> tuple[list[int], list[int], int]:
    """Draw S subseteq T subset V and a node j outside T.

    T is uniform over sizes 2..n-1, S keeps each element of T with
    probability one half, j is uniform outside T. Needs n >= 3.
    """
    size_t = int(rng.integers(2, n))
    t_nodes = np.sort(rng.choice(n, size=size_t, replace=False))
    keep = rng.random(size_t) < 0.5
    s_nodes = t_nodes[keep]
    outside = np.setdiff1d(np.arange(n), t_nodes)
    j = int(outside[rng.integers(len(outside))])
    return [int(x) for x in s_nodes], [int(x) for x in t_nodes], j


def sample_nested_pair(
    rng: np.random.Generator, n: int
) -> tuple[list[int], list[int]]:
    """Draw S subseteq T with T uniform over sizes 1..n. Needs n >= 2."""
    size_t = int(rng.integers(1, n + 1))
    t_nodes = np.sort(rng.choice(n, size=size_t, replace=False))
    keep = rng.random(size_t) < 0.5
    return [int(x) for x in t_nodes[keep]], [int(x) for x in t_nodes]


def gain_after(model: ObservationModel, base: list[int], j: int) -> float:
    """Marginal gain of j on top of base, by incremental factorization."""
    ev = GainEvaluator.empty(model)
    for node in base:
        ev = ev.commit(node)
    return ev.marginal_gain(j)


def check_zero_at_empty(model: ObservationModel) -> CheckReport:
    """The empty selection must score literally 0.0, not merely close."""
    value = evaluate(model, ())
    slack = 0.0 if value == 0.0 else -abs(value)
    return _summarize("zero_at_empty", [slack], seed=0, tol=0.0)


def check_submodularity(
    model: ObservationModel, trials: int, seed: int, tolerance: float = LOG_DOMAIN_TOL
) -> CheckReport:
    """Diminishing returns: gain of j on S >= gain of j on T for S in T.

    Gains go through the incremental Schur route; the test suite cross
    checks the same triples against plain evaluate() differences.
    """
    if model.n < 3:
        raise InstanceTooSmallError(
            f"submodularity sampling needs n >= 3, got n={model.n}"
        )
    base = seed + _SUBMODULARITY_OFFSET
    slacks = []
    for trial in range(trials):
        rng = np.random.default_rng(base + trial)
        s_nodes, t_nodes, j = sample_nested_triple(rng, model.n)
        slacks.append(gain_after(model, s_nodes, j) - gain_after(model, t_nodes, j))
    return _summarize("submodularity", slacks, seed, tolerance)


def check_monotonicity(
    model: ObservationModel, trials: int, seed: int, tolerance: float = LOG_DOMAIN_TOL
) -> CheckReport:
    """Adding sensors never hurts: z(T) >= z(S) whenever S is inside T."""
    if model.n < 2:
        raise InstanceTooSmallError(
            f"monotonicity sampling needs n >= 2, got n={model.n}"
        )
    base = seed + _MONOTONICITY_OFFSET
    slacks = []
    for trial in range(trials):
        rng = np.random.default_rng(base + trial)
        s_nodes, t_nodes = sample_nested_pair(rng, model.n)
        slacks.append(evaluate(model, t_nodes) - evaluate(model, s_nodes))
    return _summarize("monotonicity", slacks, seed, tolerance)


def check_det_superadditivity(
    n: int, trials: int, seed: int, tolerance: float = DET_RELATIVE_TOL
) -> CheckReport:
    """det(A+B) >= det(A) + det(B) for PSD pairs, including rank-deficient
    ones (drawn as G G^T with a uniform random rank 0..n)."""
    if n < 1:
        raise InstanceTooSmallError(f"superadditivity needs n >= 1, got n={n}")
    base = seed + _SUPERADDITIVITY_OFFSET
    slacks = []
    for trial in range(trials):
        rng = np.random.default_rng(base + trial)
        a = _random_psd(rng, n)
        b = _random_psd(rng, n)
        det_sum = float(np.linalg.det(a + b))
        raw = det_sum - float(np.linalg.det(a)) - float(np.linalg.det(b))
        slacks.append(raw / max(1.0, det_sum))
    return _summarize("det_superadditivity", slacks, seed, tolerance)


def _random_psd(rng: np.random.Generator, n: int) -> np.ndarray:
    rank = int(rng.integers(0, n + 1))
    g = rng.standard_normal((n, rank))
    return g @ g.T


def check_nemhauser_ratio(
    n: int,
    k: int,
    trials: int,
    seed: int,
    sigma2: float = 1.0,
    tolerance: float = LOG_DOMAIN_TOL,
) -> CheckReport:
    """Greedy value >= (1 - ((k-1)/k)^k) times the exhaustive optimum."""
    ratio = 1.0 - ((k - 1) / k) ** k
    base = seed + _NEMHAUSER_OFFSET
    slacks = []
    for trial in range(trials):
        model = ObservationModel(random_spd(n, seed=base + trial), sigma2)
        best = exhaustive(model, k)
        got = greedy(model, k)
        slacks.append(got.objective - ratio * best.objective)
    return _summarize("nemhauser_ratio", slacks, seed, tolerance)


def run_all_checks(
    model: ObservationModel,
    trials: int,
    seed: int,
    k: int = 3,
    log_tolerance: float = LOG_DOMAIN_TOL,
    det_tolerance: float = DET_RELATIVE_TOL,
) -> list[CheckReport]:
    """Run the full suite against one model; the determinant and ratio
    checks draw their own instances, sized by the model but capped at
    _DET_CHECK_MAX_N for the determinant check (see the constant).

    log_tolerance overrides the absolute slack tolerance of the three
    log-domain checks, det_tolerance the determinant check's relative one.
    """
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    return [
        check_zero_at_empty(model),
        check_submodularity(model, trials, seed, tolerance=log_tolerance),
        check_monotonicity(model, trials, seed, tolerance=log_tolerance),
        check_det_superadditivity(
            min(model.n, _DET_CHECK_MAX_N), trials, seed, tolerance=det_tolerance
        ),
        check_nemhauser_ratio(
            model.n,
            min(k, model.n),
            max(1, trials // 5),
            seed,
            sigma2=model.noise_variance,
            tolerance=log_tolerance,
        ),
    ]
