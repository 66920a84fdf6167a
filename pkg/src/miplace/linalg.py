"""Dense SPD matrix core: validated covariances, Cholesky factors,
log-determinants, and single-row factor extension.

All heavy lifting ends up on s x s principal submatrices, so storage is
dense throughout and factorization is LAPACK dpotrf behind an explicit
relative pivot tolerance. Natural logarithms everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular
from scipy.linalg.lapack import dpotrf

from .errors import (
    NotPositiveDefiniteError,
    NotSquareError,
    NotSymmetricError,
    SingularBlockError,
)

# Relative scaling guards against false SPD rejections on well-scaled
# matrices; see pivot_tolerance().
PIVOT_RTOL = 1e-12

# Asymmetry beyond this (relative to max |entry|) is rejected instead of
# averaged away.
SYMMETRY_RTOL = 1e-12


def pivot_tolerance(max_diagonal: float) -> float:
    """Smallest admissible Cholesky pivot for a matrix with the given
    maximum diagonal entry."""
    return PIVOT_RTOL * max(1.0, max_diagonal)


@dataclass(frozen=True, eq=False)
class CholeskyFactor:
    """Lower-triangular factor L with L @ L.T reconstructing the factored
    matrix. Immutable: the array is write-protected and extension returns
    a new factor."""

    lower: np.ndarray

    def __post_init__(self):
        lower = np.ascontiguousarray(self.lower, dtype=np.float64)
        lower.setflags(write=False)
        object.__setattr__(self, "lower", lower)

    @property
    def order(self) -> int:
        return self.lower.shape[0]


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Symmetric positive-definite state covariance.

    Construction symmetrizes ((M + M.T) / 2) and validates positive
    definiteness by a trial factorization, which is kept for reuse by
    samplers. Entries are write-protected after construction.
    """

    entries: np.ndarray
    factor: CholeskyFactor = field(repr=False)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def build_covariance(entries) -> CovarianceMatrix:
    """Validate and store a dense symmetric positive-definite matrix.

    Tiny asymmetry (file round-trip noise) is averaged away; asymmetry
    above SYMMETRY_RTOL * max|entry| is an error.

    Raises NotSquareError, NotSymmetricError, or NotPositiveDefiniteError.
    """
    m = np.array(entries, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] < 1:
        raise NotSquareError("matrix must be at least 1x1")
    scale = np.max(np.abs(m)) if m.size else 0.0
    asym = np.max(np.abs(m - m.T))
    if asym > SYMMETRY_RTOL * max(scale, 1e-300):
        raise NotSymmetricError(
            f"max asymmetry {asym:.3e} exceeds tolerance {SYMMETRY_RTOL * scale:.3e}"
        )
    m = (m + m.T) / 2.0
    m.setflags(write=False)
    return CovarianceMatrix(entries=m, factor=cholesky(m))


def cholesky(m) -> CholeskyFactor:
    """Factor a symmetric matrix as L @ L.T with L lower triangular.

    Fails cleanly with the index of the first pivot at or below
    pivot_tolerance(max diagonal). The input is never modified.
    """
    a = np.array(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        return CholeskyFactor(np.zeros((0, 0)))
    tol = pivot_tolerance(float(np.max(np.diag(a))))
    c, info = dpotrf(a, lower=1)
    if info > 0:
        # LAPACK found a non-positive pivot in row info-1.
        raise NotPositiveDefiniteError(
            f"pivot {info - 1} is not positive", pivot_index=info - 1
        )
    if info < 0:
        raise NotPositiveDefiniteError("factorization failed")
    lower = np.tril(c)
    pivots = np.diagonal(lower) ** 2
    bad = np.nonzero(pivots <= tol)[0]
    if bad.size:
        i = int(bad[0])
        raise NotPositiveDefiniteError(
            f"pivot {i} = {pivots[i]:.3e} at or below tolerance {tol:.3e}",
            pivot_index=i,
        )
    return CholeskyFactor(lower)


def log_det(f: CholeskyFactor) -> float:
    """ln det of the factored matrix: 2 * sum(ln diag(L)). Zero for the
    empty factor (det of a 0x0 matrix is 1)."""
    if f.order == 0:
        return 0.0
    return 2.0 * float(np.sum(np.log(np.diagonal(f.lower))))


def extend_factor(f: CholeskyFactor, new_column, new_diagonal: float) -> CholeskyFactor:
    """Factor of the (s+1) x (s+1) matrix obtained by bordering the
    factored matrix with one row/column.

    The new pivot is the scalar Schur complement new_diagonal - |w|^2
    where L w = new_column; cost is one forward substitution, O(s^2).
    The input factor is not modified.
    """
    s = f.order
    col = np.asarray(new_column, dtype=np.float64).reshape(-1)
    if col.shape[0] != s:
        raise NotSquareError(f"new column has length {col.shape[0]}, expected {s}")
    if s:
        w = solve_triangular(f.lower, col, lower=True, check_finite=False)
        pivot = float(new_diagonal) - float(w @ w)
    else:
        w = col
        pivot = float(new_diagonal)
    max_diag = float(new_diagonal)
    if s:
        row_sq = np.einsum("ij,ij->i", f.lower, f.lower)
        max_diag = max(max_diag, float(np.max(row_sq)))
    if pivot <= pivot_tolerance(max_diag):
        raise NotPositiveDefiniteError(
            f"extension pivot {pivot:.3e} at or below tolerance", pivot_index=s
        )
    out = np.zeros((s + 1, s + 1))
    out[:s, :s] = f.lower
    out[s, :s] = w
    out[s, s] = np.sqrt(pivot)
    return CholeskyFactor(out)


def block_det_identity(a, b, c, d) -> tuple[float, float]:
    """Determinant of the block matrix [[A, B], [C, D]] computed two ways:
    directly, and as det(A) * det(D - C A^-1 B).

    Test support: the two values agree for well-conditioned inputs, which
    is exactly the identity the incremental gain machinery relies on.

    Raises SingularBlockError when A is numerically singular.
    """
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    c = np.atleast_2d(np.asarray(c, dtype=np.float64))
    d = np.atleast_2d(np.asarray(d, dtype=np.float64))
    m = np.block([[a, b], [c, d]])
    if m.shape[0] != m.shape[1]:
        raise NotSquareError(f"blocks assemble to shape {m.shape}")
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > 1e14:
        raise SingularBlockError(f"pivot block condition {cond:.3e}")
    whole = float(np.linalg.det(m))
    schur = d - c @ np.linalg.solve(a, b)
    split = float(np.linalg.det(a)) * float(np.linalg.det(schur))
    return whole, split
