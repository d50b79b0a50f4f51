"""Dense non-negative square matrices, their marginals, and class membership.

Every reduction in this module accumulates sequentially in ascending index
order (``np.cumsum`` rather than ``np.sum``, which uses pairwise blocking),
so results are bit-reproducible for a given input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidMatrixError


@dataclass(frozen=True)
class ToleranceConfig:
    """Absolute tolerances for every floating-point membership test.

    sum_tol bounds the deviation of a row or column sum from 1 (and of an
    entry from 1 or 1/n); zero_tol is the threshold an entry must exceed to
    count as positive; class_log_tol is the log-space band used when
    classifying extreme points by their matching factor.
    """

    sum_tol: float = 1e-9
    zero_tol: float = 1e-12
    class_log_tol: float = 1e-9

    def __post_init__(self):
        for name in ("sum_tol", "zero_tol", "class_log_tol"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")


DEFAULT_TOL = ToleranceConfig()


class DenseMatrix:
    """Immutable n-by-n matrix of finite non-negative binary64 values.

    Construction validates; nothing is clamped. ``values`` is a read-only
    ``(n, n)`` float64 array.
    """

    __slots__ = ("n", "values")

    def __init__(self, values):
        arr = np.array(values, dtype=np.float64, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise InvalidMatrixError(f"expected a non-empty square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidMatrixError("matrix has NaN or infinite entries")
        if np.any(arr < 0):
            i, j = np.argwhere(arr < 0)[0]
            raise InvalidMatrixError(f"negative entry {arr[i, j]!r} at ({i}, {j})")
        arr.setflags(write=False)
        object.__setattr__(self, "n", int(arr.shape[0]))
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError("DenseMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[float]]) -> "DenseMatrix":
        return cls([list(r) for r in rows])

    @property
    def entries(self) -> tuple[float, ...]:
        """Row-major flat view of the entries."""
        return tuple(float(x) for x in self.values.ravel())

    def rows(self) -> list[list[float]]:
        return self.values.tolist()

    def __getitem__(self, ij):
        return float(self.values[ij])

    def __eq__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.n, self.values.tobytes()))

    def __repr__(self):
        return f"DenseMatrix(n={self.n}, rows={self.rows()!r})"


def new_matrix(n: int, entries: Sequence[float]) -> DenseMatrix:
    """Build an ``n``-by-``n`` matrix from a row-major sequence of entries."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidMatrixError(f"order must be a positive integer, got {n!r}")
    flat = np.asarray(entries, dtype=np.float64).ravel()
    if flat.size != n * n:
        raise InvalidMatrixError(f"expected {n * n} entries for order {n}, got {flat.size}")
    return DenseMatrix(flat.reshape(n, n))


def seq_sum(x: np.ndarray, axis: int) -> np.ndarray:
    """Sum along ``axis`` with plain ascending-index accumulation."""
    return np.cumsum(x, axis=axis).take(-1, axis=axis)


@dataclass(frozen=True)
class Marginals:
    row_sums: tuple[float, ...]
    col_sums: tuple[float, ...]
    row_norms_sq: tuple[float, ...]
    col_norms_sq: tuple[float, ...]


def marginal_arrays(values: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Row sums, column sums, row squared norms, column squared norms."""
    sq = values * values
    return seq_sum(values, 1), seq_sum(values, 0), seq_sum(sq, 1), seq_sum(sq, 0)


def marginals(m: DenseMatrix) -> Marginals:
    rs, cs, rn, cn = marginal_arrays(m.values)
    return Marginals(
        row_sums=tuple(rs.tolist()),
        col_sums=tuple(cs.tolist()),
        row_norms_sq=tuple(rn.tolist()),
        col_norms_sq=tuple(cn.tolist()),
    )


@dataclass(frozen=True)
class ClassificationReport:
    is_nonnegative: bool
    is_bistochastic: bool
    is_star_positive: bool
    is_permutation: bool
    is_star_permutation: bool
    is_uniform: bool
    is_star_uniform: bool
    max_sum_residual: float


def sum_residual(values: np.ndarray) -> float:
    """Largest absolute deviation of any row or column sum from 1."""
    rs = seq_sum(values, 1)
    cs = seq_sum(values, 0)
    return float(max(np.max(np.abs(rs - 1.0)), np.max(np.abs(cs - 1.0))))


def is_bistochastic(m: DenseMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    return sum_residual(m.values) <= tol.sum_tol


def classify(m: DenseMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> ClassificationReport:
    """Membership of ``m`` in each of the six matrix classes."""
    v = m.values
    n = m.n
    positive = v > tol.zero_tol
    row_count = positive.sum(axis=1)
    col_count = positive.sum(axis=0)

    residual = sum_residual(v)
    bistochastic = residual <= tol.sum_tol
    star_positive = bool(np.all(row_count >= 1) and np.all(col_count >= 1))
    star_permutation = bool(np.all(row_count == 1) and np.all(col_count == 1))
    permutation = (
        bistochastic
        and star_permutation
        and bool(np.all(np.abs(v[positive] - 1.0) <= tol.sum_tol))
    )
    uniform = bistochastic and bool(np.all(np.abs(v - 1.0 / n) <= tol.sum_tol))
    spread = float(v.max() - v.min())
    # A matrix inside the uniform band is also *-uniform even if its spread
    # exceeds zero_tol; keeps uniform => star_uniform under file round-off.
    star_uniform = star_positive and (spread <= tol.zero_tol or uniform)

    return ClassificationReport(
        is_nonnegative=True,
        is_bistochastic=bistochastic,
        is_star_positive=star_positive,
        is_permutation=permutation,
        is_star_permutation=star_permutation,
        is_uniform=uniform,
        is_star_uniform=star_uniform,
        max_sum_residual=residual,
    )
