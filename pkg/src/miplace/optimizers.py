"""Solvers for the k-sensor placement problem.

All solvers break ties by lowest node index, which makes greedy, lazy
greedy, and the exhaustive oracle deterministic and mutually comparable.
Lazy greedy trusts stale gains as upper bounds, which is valid precisely
because the objective has diminishing returns; it must therefore return
the same sequence as naive greedy, only cheaper.
"""

from __future__ import annotations

import heapq
import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import KTooLargeError, TooManySubsetsError
from .objective import GainEvaluator, ObservationModel, evaluate

ENUMERATION_CAP = 2_000_000

# Candidate sweeps are evaluated in fixed-size chunks so that results are
# bit-identical no matter how many worker threads scan them.
_CHUNK = 512


@dataclass
class PlacementResult:
    """Outcome of one solver run.

    selected follows the commit order for greedy/lazy/random and sorted
    index order for the exhaustive oracle (whose gains list follows the
    greedy replay order inside the winning subset instead). gains always
    telescope: they sum to the objective.
    """

    method: str
    selected: list[int] = field(default_factory=list)
    gains: list[float] = field(default_factory=list)
    objective: float = 0.0
    evaluations: int = 0
    elapsed: float = 0.0


def _resolve_k(k: int, n: int, clamp_k: bool) -> int:
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if k > n:
        if not clamp_k:
            raise KTooLargeError(f"k={k} exceeds n={n} (pass clamp_k to cap it)")
        return n
    return k


def _chunk_best(ev: GainEvaluator, chunk: np.ndarray) -> tuple[float, int]:
    gains = ev.marginal_gains(chunk)
    i = int(np.argmax(gains))  # first max = lowest index, chunk is sorted
    return float(gains[i]), int(chunk[i])


def _best_candidate(
    ev: GainEvaluator, candidates: np.ndarray, threads: int
) -> tuple[float, int]:
    """Best (gain, node) over the candidates, ties to the lowest index.

    The chunking is fixed, so thread count never changes the arithmetic;
    the reduction maximizes (gain, -index) and is order-independent.
    """
    chunks = [candidates[i : i + _CHUNK] for i in range(0, len(candidates), _CHUNK)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda c: _chunk_best(ev, c), chunks))
    else:
        results = [_chunk_best(ev, c) for c in chunks]
    best_gain, best_j = results[0]
    for gain, j in results[1:]:
        if (gain, -j) > (best_gain, -best_j):
            best_gain, best_j = gain, j
    return best_gain, best_j


def _all_gains(ev: GainEvaluator, candidates: np.ndarray, threads: int) -> np.ndarray:
    chunks = [candidates[i : i + _CHUNK] for i in range(0, len(candidates), _CHUNK)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(ev.marginal_gains, chunks))
    else:
        parts = [ev.marginal_gains(c) for c in chunks]
    return np.concatenate(parts) if parts else np.zeros(0)


def greedy(
    model: ObservationModel, k: int, clamp_k: bool = False, threads: int = 1
) -> PlacementResult:
    """Naive greedy: at each step commit the unselected node with the
    largest marginal gain. Scans every remaining candidate every step,
    so evaluations total sum_{t<k}(n - t)."""
    start = time.perf_counter()
    k = _resolve_k(k, model.n, clamp_k)
    ev = GainEvaluator.empty(model)
    remaining = np.arange(model.n, dtype=np.intp)
    result = PlacementResult(method="greedy")
    for _ in range(k):
        _, j = _best_candidate(ev, remaining, threads)
        result.evaluations += len(remaining)
        # record the commit's own scalar-kernel gain, not the batched sweep
        # value, so gains match lazy_greedy's bitwise
        ev, gain = ev.commit_with_gain(j)
        result.selected.append(j)
        result.gains.append(gain)
        remaining = remaining[remaining != j]
    result.objective = ev.objective_value
    result.elapsed = time.perf_counter() - start
    return result


def lazy_greedy(
    model: ObservationModel, k: int, clamp_k: bool = False, threads: int = 1
) -> PlacementResult:
    """Lazy (CELF) greedy: identical selection and order as greedy, with
    far fewer gain queries.

    Cached gains from earlier selections only ever overestimate, so a
    popped entry whose refreshed gain still tops the queue is the true
    argmax and is committed immediately.
    """
    start = time.perf_counter()
    k = _resolve_k(k, model.n, clamp_k)
    ev = GainEvaluator.empty(model)
    result = PlacementResult(method="lazy_greedy")

    gains = _all_gains(ev, np.arange(model.n, dtype=np.intp), threads)
    result.evaluations = model.n
    # heap of (-gain, node, selection size the gain was computed against)
    heap = [(-float(g), j, 0) for j, g in enumerate(gains)]
    heapq.heapify(heap)

    while len(result.selected) < k:
        neg_gain, j, stamp = heapq.heappop(heap)
        if stamp != len(result.selected):
            fresh = ev.marginal_gain(j)
            result.evaluations += 1
            entry = (-fresh, j, len(result.selected))
            if heap and entry > heap[0]:
                heapq.heappush(heap, entry)
                continue
        ev, gain = ev.commit_with_gain(j)
        result.selected.append(j)
        result.gains.append(gain)
    result.objective = ev.objective_value
    result.elapsed = time.perf_counter() - start
    return result


def exhaustive(
    model: ObservationModel, k: int, enumeration_cap: int = ENUMERATION_CAP
) -> PlacementResult:
    """Exact oracle: evaluate every k-subset from scratch and keep the
    best, ties to the lexicographically smallest index tuple.

    selected is reported in sorted index order; gains replay a greedy
    pass inside the winning subset so they still telescope.
    """
    start = time.perf_counter()
    n = model.n
    k = _resolve_k(k, n, clamp_k=False)
    total = math.comb(n, k)
    if total > enumeration_cap:
        raise TooManySubsetsError(
            f"C({n},{k}) = {total} exceeds enumeration cap {enumeration_cap}"
        )
    result = PlacementResult(method="exhaustive")
    best_value = -math.inf
    best_subset: tuple[int, ...] = ()
    for subset in itertools.combinations(range(n), k):
        value = evaluate(model, subset)
        result.evaluations += 1
        if value > best_value:
            best_value = value
            best_subset = subset

    ev = GainEvaluator.empty(model)
    pool = np.array(best_subset, dtype=np.intp)
    for _ in range(k):
        _, j = _best_candidate(ev, pool, threads=1)
        result.evaluations += len(pool)
        ev, gain = ev.commit_with_gain(j)
        result.gains.append(gain)
        pool = pool[pool != j]
    result.selected = list(best_subset)
    result.objective = best_value
    result.elapsed = time.perf_counter() - start
    return result


def random_placement(
    model: ObservationModel, k: int, seed: int, clamp_k: bool = False
) -> PlacementResult:
    """Uniformly random k-subset baseline from a seeded generator; the
    objective is evaluated exactly by committing the draw in order."""
    start = time.perf_counter()
    k = _resolve_k(k, model.n, clamp_k)
    rng = np.random.default_rng(seed)
    draw = rng.choice(model.n, size=k, replace=False)
    ev = GainEvaluator.empty(model)
    result = PlacementResult(method="random")
    for j in draw:
        ev, gain = ev.commit_with_gain(int(j))
        result.evaluations += 1
        result.selected.append(int(j))
        result.gains.append(gain)
    result.objective = ev.objective_value
    result.elapsed = time.perf_counter() - start
    return result
