"""Mutual information between network state and noisy sensor readings.

For a zero-mean Gaussian state with covariance S and per-sensor white
noise of variance v, the information carried by sensors at nodes A is

    z(A) = 0.5 * ln( det(S_AA + v I) / v^|A| )      [nats]

The incremental value of adding node j to A reduces to a scalar Schur
complement against the factor of S_AA + v I, so a GainEvaluator answers
gain queries in O(|A|^2) per candidate instead of refactoring.

The mean adds nothing to mutual information, so simulation fixes it to
zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import (
    AlreadySelectedError,
    DimensionMismatchError,
    IndexOutOfRangeError,
    NonPositiveVarianceError,
)
from .linalg import CholeskyFactor, CovarianceMatrix, cholesky, extend_factor, log_det

# Noise variances below this make gains unbounded and the determinant
# ratio ill-conditioned; construction rejects them.
NOISE_FLOOR = 1e-9


@dataclass(frozen=True)
class SensorSet:
    """Ordered selection of distinct node indices.

    Order records the selection sequence; the objective value itself is
    order-free.
    """

    indices: tuple[int, ...] = ()

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        seen = set()
        for i in idx:
            if i < 0:
                raise IndexOutOfRangeError(f"negative node index {i}")
            if i in seen:
                raise AlreadySelectedError(f"duplicate node index {i}")
            seen.add(i)
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, j) -> bool:
        return j in self.indices

    def with_node(self, j: int) -> "SensorSet":
        return SensorSet(self.indices + (int(j),))


@dataclass(frozen=True, eq=False)
class ObservationModel:
    """State covariance plus the AWGN variance of every sensor: Y = X_A + Z."""

    covariance: CovarianceMatrix
    noise_variance: float

    def __post_init__(self):
        if not self.noise_variance > 0:
            raise NonPositiveVarianceError("noise variance must be positive")
        if self.noise_variance < NOISE_FLOOR:
            raise NonPositiveVarianceError(
                f"noise variance {self.noise_variance:.3e} below floor {NOISE_FLOOR:.0e}"
            )

    @property
    def n(self) -> int:
        return self.covariance.n


def _check_index(j: int, n: int):
    if not 0 <= j < n:
        raise IndexOutOfRangeError(f"node index {j} outside [0, {n})")


def evaluate(model: ObservationModel, s: SensorSet | tuple | list) -> float:
    """Objective value z(s) in nats, computed from scratch.

    Cholesky of the |s| x |s| principal submatrix plus noise on the
    diagonal; exactly 0.0 for the empty selection. Order of indices does
    not affect the value.
    """
    if not isinstance(s, SensorSet):
        s = SensorSet(tuple(s))
    if len(s) == 0:
        return 0.0
    for j in s:
        _check_index(j, model.n)
    idx = list(s.indices)
    sub = model.covariance.entries[np.ix_(idx, idx)].copy()
    sub[np.diag_indices_from(sub)] += model.noise_variance
    f = cholesky(sub)
    return 0.5 * (log_det(f) - len(s) * math.log(model.noise_variance))


@dataclass(frozen=True, eq=False)
class GainEvaluator:
    """Incremental objective state for one selection.

    Holds the factor of S_AA + v I, so gain queries are side-effect-free
    forward substitutions and commit() extends the factor by one row.
    Immutable: any number of concurrent gain queries may share one
    evaluator, and commit returns a new value.
    """

    model: ObservationModel
    selection: SensorSet
    factor: CholeskyFactor
    objective_value: float

    @classmethod
    def empty(cls, model: ObservationModel) -> "GainEvaluator":
        return cls(
            model=model,
            selection=SensorSet(),
            factor=CholeskyFactor(np.zeros((0, 0))),
            objective_value=0.0,
        )

    def _schur(self, candidates: np.ndarray) -> np.ndarray:
        """Schur-complement pivots S_jj + v - |w_j|^2 for each candidate j,
        with L w_j = S_Aj. One triangular solve for the whole batch."""
        sigma = self.model.covariance.entries
        diag = sigma[candidates, candidates] + self.model.noise_variance
        s = len(self.selection)
        if s == 0:
            return diag
        rhs = sigma[np.ix_(list(self.selection.indices), list(candidates))]
        w = solve_triangular(self.factor.lower, rhs, lower=True, check_finite=False)
        return diag - np.einsum("ij,ij->j", w, w)

    def marginal_gains(self, candidates) -> np.ndarray:
        """Gains z(A + j) - z(A) for a batch of candidate nodes, in nats."""
        cand = np.asarray(candidates, dtype=np.intp)
        for j in cand:
            _check_index(int(j), self.model.n)
            if int(j) in self.selection:
                raise AlreadySelectedError(f"node {int(j)} already selected")
        if cand.size == 0:
            return np.zeros(0)
        return 0.5 * np.log(self._schur(cand) / self.model.noise_variance)

    def marginal_gain(self, j: int) -> float:
        """Gain z(A + j) - z(A) in nats; O(|A|^2), does not mutate."""
        return float(self.marginal_gains([j])[0])

    def commit_with_gain(self, j: int) -> tuple["GainEvaluator", float]:
        """New evaluator with j appended, plus the gain the objective
        advanced by. The gain goes through the same scalar kernel as
        marginal_gain, so the increment matches a prior query bitwise."""
        j = int(j)
        _check_index(j, self.model.n)
        if j in self.selection:
            raise AlreadySelectedError(f"node {j} already selected")
        sigma = self.model.covariance.entries
        col = sigma[list(self.selection.indices), j]
        diag = sigma[j, j] + self.model.noise_variance
        factor = extend_factor(self.factor, col, diag)
        gain = float(self.marginal_gains(np.array([j], dtype=np.intp))[0])
        extended = GainEvaluator(
            model=self.model,
            selection=self.selection.with_node(j),
            factor=factor,
            objective_value=self.objective_value + gain,
        )
        return extended, gain

    def commit(self, j: int) -> "GainEvaluator":
        """New evaluator with j appended; the objective advances by exactly
        the marginal gain of j."""
        return self.commit_with_gain(j)[0]


def sample_states(model: ObservationModel, seed: int, count: int) -> np.ndarray:
    """count i.i.d. draws of the state vector, as a (count, n) array.

    Rows are L g with g standard normal from a seeded generator; the same
    seed reproduces the output bit for bit.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((count, model.n))
    return g @ model.covariance.factor.lower.T


def sample_observations(
    model: ObservationModel, s: SensorSet | tuple | list, states: np.ndarray, seed: int
) -> np.ndarray:
    """Sensor readings for the given states: selected columns plus i.i.d.
    N(0, v) noise from a seeded generator. Shape (count, |s|)."""
    if not isinstance(s, SensorSet):
        s = SensorSet(tuple(s))
    states = np.asarray(states, dtype=np.float64)
    if states.ndim != 2 or states.shape[1] != model.n:
        raise DimensionMismatchError(
            f"states shape {states.shape} does not match n={model.n}"
        )
    for j in s:
        _check_index(j, model.n)
    if len(s) == 0:
        return np.zeros((states.shape[0], 0))
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((states.shape[0], len(s)))
    return states[:, list(s.indices)] + math.sqrt(model.noise_variance) * noise
