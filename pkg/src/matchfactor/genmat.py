"""Generators for each matrix class, plus Sinkhorn-Knopp scaling.

Random generators take an explicit integer seed and draw from
:class:`matchfactor.rng.SeededStream` (PCG64); nothing reads global state.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, InvalidInputError, InvalidMatrixError
from .matcore import DenseMatrix, seq_sum, sum_residual
from .rng import SeededStream, fisher_yates


@dataclass(frozen=True)
class Permutation:
    """Row ``i`` carries its unit entry in column ``map[i]``."""

    map: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(x) for x in self.map)
        if sorted(m) != list(range(len(m))) or not m:
            raise InvalidInputError(f"not a permutation of 0..n-1: {self.map!r}")
        object.__setattr__(self, "map", m)

    @property
    def n(self) -> int:
        return len(self.map)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    def __len__(self):
        return len(self.map)


def _as_perm(p) -> Permutation:
    return p if isinstance(p, Permutation) else Permutation(tuple(p))


def _check_order(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidInputError(f"order must be a positive integer, got {n!r}")
    return int(n)


def _check_positive(c, name="c") -> float:
    c = float(c)
    if not math.isfinite(c) or c <= 0:
        raise InvalidInputError(f"{name} must be a positive finite number, got {c!r}")
    return c


def permutation_matrix(p: Permutation | Sequence[int]) -> DenseMatrix:
    p = _as_perm(p)
    v = np.zeros((p.n, p.n))
    v[np.arange(p.n), p.map] = 1.0
    return DenseMatrix(v)


def uniform_matrix(n: int) -> DenseMatrix:
    n = _check_order(n)
    return DenseMatrix(np.full((n, n), 1.0 / n))


def random_permutation(n: int, seed: int) -> Permutation:
    """Fisher-Yates shuffle of ``range(n)`` driven by PCG64(seed)."""
    n = _check_order(n)
    return Permutation(tuple(fisher_yates(n, SeededStream(seed))))


class SinkhornInit(enum.Enum):
    PROVIDED_MATRIX = "provided"
    SEEDED_POSITIVE = "seeded"


@dataclass(frozen=True)
class SinkhornConfig:
    max_iters: int = 10000
    convergence_tol: float = 1e-12
    init: SinkhornInit = SinkhornInit.PROVIDED_MATRIX

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if not (self.convergence_tol > 0):
            raise ValueError("convergence_tol must be positive")


@dataclass(frozen=True)
class SinkhornResult:
    matrix: DenseMatrix
    iters_used: int
    final_residual: float

    def __iter__(self):
        return iter((self.matrix, self.iters_used, self.final_residual))


def sinkhorn(a: DenseMatrix, cfg: SinkhornConfig = SinkhornConfig()) -> SinkhornResult:
    """Alternate row then column normalisation until every sum is within tol of 1.

    The residual is checked after each column pass.  Raises
    :class:`ConvergenceError` (carrying the last iterate) if ``max_iters``
    passes are not enough.
    """
    x = np.array(a.values)
    if np.any(x <= 0):
        raise InvalidMatrixError("sinkhorn needs a strictly positive matrix")
    residual = math.inf
    for it in range(1, cfg.max_iters + 1):
        x = x / seq_sum(x, 1)[:, None]
        x = x / seq_sum(x, 0)[None, :]
        residual = sum_residual(x)
        if residual <= cfg.convergence_tol:
            return SinkhornResult(DenseMatrix(x), it, residual)
    raise ConvergenceError(cfg.max_iters, residual, DenseMatrix(x))


def random_positive(n: int, seed: int, lo: float = 0.01, hi: float = 1.01) -> DenseMatrix:
    """i.i.d. uniform(lo, hi) entries, drawn row-major."""
    n = _check_order(n)
    return DenseMatrix(SeededStream(seed).uniform_open(lo, hi, n * n).reshape(n, n))


def random_bistochastic(n: int, seed: int, cfg: SinkhornConfig = SinkhornConfig()) -> DenseMatrix:
    """Sinkhorn projection of a uniform(0.01, 1.01) matrix.

    The lower margin keeps every entry away from zero, which keeps the
    scaling well conditioned and the iteration count small.
    """
    return sinkhorn(random_positive(n, seed), cfg).matrix


def convex_combination(terms: Sequence[tuple[float, Permutation | Sequence[int]]]) -> DenseMatrix:
    """Weighted sum of permutation matrices; weights must sum to 1 within 1e-12."""
    if not terms:
        raise InvalidInputError("need at least one term")
    perms = [_as_perm(p) for _, p in terms]
    weights = [float(w) for w, _ in terms]
    n = perms[0].n
    if any(p.n != n for p in perms):
        raise InvalidInputError("all permutations must have the same order")
    if any(not math.isfinite(w) or w < 0 for w in weights):
        raise InvalidInputError("weights must be finite and non-negative")
    total = 0.0
    for w in weights:
        total += w
    if abs(total - 1.0) > 1e-12:
        raise InvalidInputError(f"weights sum to {total!r}, not 1")
    v = np.zeros((n, n))
    rows = np.arange(n)
    for w, p in zip(weights, perms):
        v[rows, p.map] += w
    return DenseMatrix(v)


def star_permutation_matrix(p: Permutation | Sequence[int], values: Sequence[float]) -> DenseMatrix:
    """Entry ``(i, p[i])`` set to ``values[i]``, zeros elsewhere."""
    p = _as_perm(p)
    vals = np.asarray(values, dtype=np.float64)
    if vals.shape != (p.n,) or np.any(~np.isfinite(vals)) or np.any(vals <= 0):
        raise InvalidInputError("need one finite positive value per row")
    v = np.zeros((p.n, p.n))
    v[np.arange(p.n), p.map] = vals
    return DenseMatrix(v)


def _check_range(value_range) -> tuple[float, float]:
    lo, hi = (float(x) for x in value_range)
    if not (math.isfinite(lo) and math.isfinite(hi) and 0 < lo < hi):
        raise InvalidInputError(f"value range must satisfy 0 < lo < hi, got {value_range!r}")
    return lo, hi


def star_permutation_random(
    n: int, seed: int, value_range: tuple[float, float] = (0.01, 10.0)
) -> DenseMatrix:
    n = _check_order(n)
    lo, hi = _check_range(value_range)
    stream = SeededStream(seed)
    perm = fisher_yates(n, stream)
    return star_permutation_matrix(perm, stream.uniform_open(lo, hi, n))


def random_star_positive(
    n: int, seed: int, density: float = 0.3, value_range: tuple[float, float] = (1e-3, 10.0)
) -> DenseMatrix:
    """Random support containing a random permutation, with positive values.

    The permutation guarantees a positive entry in every row and column; each
    other cell joins the support with probability ``density``.
    """
    n = _check_order(n)
    lo, hi = _check_range(value_range)
    if not 0.0 <= density <= 1.0:
        raise InvalidInputError("density must lie in [0, 1]")
    stream = SeededStream(seed)
    perm = fisher_yates(n, stream)
    support = stream.uniform(n * n).reshape(n, n) < density
    support[np.arange(n), perm] = True
    values = stream.uniform_open(lo, hi, n * n).reshape(n, n)
    return DenseMatrix(np.where(support, values, 0.0))


def star_uniform(n: int, c: float) -> DenseMatrix:
    n = _check_order(n)
    return DenseMatrix(np.full((n, n), _check_positive(c)))


def scale(a: DenseMatrix, c: float) -> DenseMatrix:
    return DenseMatrix(a.values * _check_positive(c))
