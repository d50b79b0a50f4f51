"""Matching factors of bistochastic and *-positive matrices.

For a bistochastic matrix B of order n the per-index factor is

    lambda(k) = ||row k||^2 * ||column k||^2

and the matching factor is M(B) = prod_k lambda(k).  For bistochastic B,
1/n^(2n) <= M(B) <= 1, with the maximum attained exactly on permutation
matrices and the minimum only on the uniform matrix.

The *-variant divides each squared norm by the squared sum of the same row
or column, which extends the result to every non-negative matrix whose rows
and columns each carry a positive entry.  Its maximisers are the matrices
with exactly one positive entry per row and column; its minimisers are the
constant matrices.

Everything is evaluated in log space: 1/n^(2n) underflows binary64 once
n is around 82.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidInputError, NotBistochasticError, NotStarPositiveError, ZeroFactorError
from .matcore import DEFAULT_TOL, DenseMatrix, ToleranceConfig, marginal_arrays, sum_residual


class Variant(enum.Enum):
    PLAIN = "plain"
    STAR = "star"


@dataclass(frozen=True)
class MatchingProfile:
    n: int
    lambdas: tuple[float, ...]
    log_lambdas: tuple[float, ...]
    log_m: float
    m_linear: float
    log_lower_bound: float
    log_upper_bound: float
    variant: Variant

    @property
    def underflows(self) -> bool:
        """True when exp(log_m) is not representable as a normal double."""
        return self.m_linear == 0.0 or self.m_linear < np.finfo(np.float64).tiny


def theorem_bounds(n: int) -> tuple[float, float]:
    """Log-space bounds ``(-2 n ln n, 0)`` on M for matrices of order ``n``."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidInputError(f"order must be a positive integer, got {n!r}")
    # + 0.0 turns -0.0 (n = 1) into 0.0
    return -2.0 * n * math.log(n) + 0.0, 0.0


def _check_index(m: DenseMatrix, k: int) -> None:
    if not 0 <= k < m.n:
        raise IndexError(f"index {k} out of range for order {m.n}")


def lambda_k(b: DenseMatrix, k: int) -> float:
    """Squared norm of row ``k`` times squared norm of column ``k``."""
    _check_index(b, k)
    _, _, rn, cn = marginal_arrays(b.values)
    return float(rn[k] * cn[k])


def star_lambda_k(a: DenseMatrix, k: int) -> float:
    """Per-index factor normalised by the squared row and column sums."""
    _check_index(a, k)
    rs, cs, rn, cn = marginal_arrays(a.values)
    if rs[k] == 0.0 or cs[k] == 0.0:
        raise NotStarPositiveError(f"row or column {k} sums to zero")
    return float((rn[k] / (rs[k] * rs[k])) * (cn[k] / (cs[k] * cs[k])))


def _profile(lambdas: np.ndarray, variant: Variant) -> MatchingProfile:
    n = lambdas.size
    zero = np.flatnonzero(lambdas == 0.0)
    if zero.size:
        raise ZeroFactorError(int(zero[0]))
    logs = [math.log(x) for x in lambdas.tolist()]
    log_m = 0.0
    for x in logs:
        log_m += x
    lo, hi = theorem_bounds(n)
    return MatchingProfile(
        n=n,
        lambdas=tuple(lambdas.tolist()),
        log_lambdas=tuple(logs),
        log_m=log_m,
        m_linear=math.exp(log_m),
        log_lower_bound=lo,
        log_upper_bound=hi,
        variant=variant,
    )


def matching_factor(b: DenseMatrix) -> MatchingProfile:
    """Matching factor of ``b``; the bistochastic precondition is not checked."""
    _, _, rn, cn = marginal_arrays(b.values)
    return _profile(rn * cn, Variant.PLAIN)


def star_matching_factor(a: DenseMatrix) -> MatchingProfile:
    rs, cs, rn, cn = marginal_arrays(a.values)
    bad = np.flatnonzero((rs == 0.0) | (cs == 0.0))
    if bad.size:
        raise NotStarPositiveError(f"row or column {int(bad[0])} has no positive entry")
    # each ratio is scale-free on its own, which keeps c*A exact up to rounding
    lambdas = (rn / (rs * rs)) * (cn / (cs * cs))
    return _profile(lambdas, Variant.STAR)


def bound_slack(n: int) -> float:
    """Tolerance on log_m for matrices validated at sum_tol = 1e-9.

    A row sum off by s moves its squared norm by a relative 2s at most, so
    one log factor shifts by about 4s and log_m by 4 n s = 4e-9 n.  The
    budget n * 1e-6 leaves more than two orders of magnitude on top of that.
    """
    return n * 1e-6


class ExtremeKind(enum.Enum):
    PERMUTATION = "permutation"
    UNIFORM = "uniform"
    INTERIOR = "interior"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class ExtremeClass:
    kind: ExtremeKind
    permutation: Optional[tuple[int, ...]]
    log_m: float


def _confirm_permutation(v: np.ndarray, tol: ToleranceConfig) -> Optional[tuple[int, ...]]:
    cols = np.argmax(v, axis=1)
    picked = v[np.arange(v.shape[0]), cols]
    if np.any(np.abs(picked - 1.0) > tol.sum_tol):
        return None
    if np.unique(cols).size != cols.size:
        return None
    return tuple(int(c) for c in cols)


def classify_extreme(b: DenseMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> ExtremeClass:
    """Place ``b`` at a vertex, at the centre, or in the interior of the polytope.

    The decision is driven by log M(b), then confirmed entrywise: a matching
    factor inside the tolerance band alone never yields Permutation or
    Uniform.
    """
    residual = sum_residual(b.values)
    if residual > tol.sum_tol:
        raise NotBistochasticError(
            f"row/column sums deviate from 1 by {residual:.3e} (> {tol.sum_tol:g})"
        )
    profile = matching_factor(b)
    if b.n == 1:
        return ExtremeClass(ExtremeKind.DEGENERATE, None, profile.log_m)
    if profile.log_m >= -tol.class_log_tol:
        perm = _confirm_permutation(b.values, tol)
        if perm is not None:
            return ExtremeClass(ExtremeKind.PERMUTATION, perm, profile.log_m)
    elif profile.log_m <= profile.log_lower_bound + tol.class_log_tol:
        if np.all(np.abs(b.values - 1.0 / b.n) <= tol.sum_tol):
            return ExtremeClass(ExtremeKind.UNIFORM, None, profile.log_m)
    return ExtremeClass(ExtremeKind.INTERIOR, None, profile.log_m)


class LemmaMode(enum.Enum):
    UNIT = "unit"
    POSITIVE = "positive"


@dataclass(frozen=True)
class LemmaVerdict:
    structural: bool
    analytic: bool
    mode: LemmaMode


def lemma_predicates(
    a: Sequence[float], mode: LemmaMode = LemmaMode.UNIT, tol: ToleranceConfig = DEFAULT_TOL
) -> LemmaVerdict:
    """Both sides of the single-non-zero-entry lemma for a non-negative vector.

    structural: exactly one entry exceeds zero_tol (and, in UNIT mode, it is
    1 within sum_tol).  analytic: sum of squares equals square of sum (and,
    in UNIT mode, both equal 1).  POSITIVE mode has no natural scale, so its
    equality is tested relative to the square of the sum.
    """
    x = np.asarray(a, dtype=np.float64).ravel()
    if not np.all(np.isfinite(x)) or np.any(x < 0):
        raise InvalidInputError("lemma predicates need finite non-negative values")
    nonzero = np.flatnonzero(x > tol.zero_tol)
    total = 0.0
    squares = 0.0
    for v in x.tolist():
        total += v
        squares += v * v
    square_of_sum = total * total

    if mode is LemmaMode.UNIT:
        structural = nonzero.size == 1 and abs(x[nonzero[0]] - 1.0) <= tol.sum_tol
        analytic = abs(squares - 1.0) <= tol.sum_tol and abs(square_of_sum - 1.0) <= tol.sum_tol
    else:
        structural = nonzero.size == 1
        analytic = total > tol.zero_tol and (
            abs(square_of_sum - squares) <= tol.sum_tol * square_of_sum
        )
    return LemmaVerdict(bool(structural), bool(analytic), mode)
