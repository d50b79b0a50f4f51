"""Markov-power trajectories, a permutation-proximity score, and brute-force oracles."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DriftError, InvalidInputError, NotBistochasticError
from .factor import MatchingProfile, Variant, matching_factor, theorem_bounds
from .matcore import DEFAULT_TOL, DenseMatrix, ToleranceConfig, sum_residual
from .rng import SeededStream


@dataclass(frozen=True)
class TrajectoryRecord:
    n: int
    samples: tuple[tuple[int, float], ...]
    converged: bool

    @property
    def log_ms(self) -> tuple[float, ...]:
        return tuple(lm for _, lm in self.samples)


def drift_allowance(t: int, n: int, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Allowed sum residual of the t-th power: sum_tol plus t * 1e-12 * n."""
    return tol.sum_tol + t * 1e-12 * n


def power_trajectory(
    b: DenseMatrix,
    t_max: int,
    tol: ToleranceConfig = DEFAULT_TOL,
    limit_tol: float = 1e-3,
) -> TrajectoryRecord:
    """log M(B^t) for t = 1..t_max, with B^t = B^(t-1) @ B.

    Each power is re-checked against the bistochastic sums; the allowance
    grows linearly in t (see :func:`drift_allowance`).  ``converged`` reports
    whether the final value is within ``limit_tol`` of the lower bound, i.e.
    whether the chain has mixed to the uniform matrix.
    """
    if t_max < 1:
        raise InvalidInputError("t_max must be at least 1")
    residual = sum_residual(b.values)
    if residual > tol.sum_tol:
        raise NotBistochasticError(
            f"row/column sums deviate from 1 by {residual:.3e} (> {tol.sum_tol:g})"
        )
    n = b.n
    step = b.values
    power = np.array(step)
    samples = []
    for t in range(1, t_max + 1):
        if t > 1:
            power = power @ step
        residual = sum_residual(power)
        allowed = drift_allowance(t, n, tol)
        if residual > allowed:
            raise DriftError(t, residual, allowed)
        samples.append((t, matching_factor(DenseMatrix(power)).log_m))
    lower, _ = theorem_bounds(n)
    converged = abs(samples[-1][1] - lower) < limit_tol
    return TrajectoryRecord(n=n, samples=tuple(samples), converged=converged)


def permutation_proximity(profile: MatchingProfile) -> float:
    """1 + log M / (2 n ln n), clamped to [0, 1].

    1 at permutation matrices, 0 at the uniform matrix.  A normalisation of
    log M for comparing orders, not a metric.
    """
    if profile.variant is not Variant.PLAIN:
        raise InvalidInputError("proximity is defined for the plain matching factor")
    if profile.n == 1:
        return 1.0
    rho = 1.0 + profile.log_m / (2.0 * profile.n * math.log(profile.n))
    return min(1.0, max(0.0, rho))


def closed_form_m_n2(p: float) -> float:
    """M of [[p, 1-p], [1-p, p]], which is every 2x2 bistochastic matrix."""
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError(f"p must lie in [0, 1], got {p!r}")
    q = 1.0 - p
    return (p * p + q * q) ** 4


@dataclass(frozen=True)
class OracleResult:
    min_log_m: float
    max_log_m: float
    argmin_is_uniform: bool
    argmax_is_vertex: bool
    points_scanned: int
    max_interior_log_m: float


# points this close to an extreme count as attaining it
_TIE = 1e-12


def _batch_log_m(mats: np.ndarray) -> np.ndarray:
    """log M for a stack of matrices, straight from the definition."""
    row = np.einsum("kij,kij->ki", mats, mats)
    col = np.einsum("kij,kij->kj", mats, mats)
    return np.log(row).sum(axis=1) + np.log(col).sum(axis=1)


def oracle_grid_scan(n: int, resolution: int = 101, seed: int = 0, samples: int = 100_000) -> OracleResult:
    """Brute-force scan of log M over the polytope for n = 2 or 3.

    n = 2 sweeps p over ``resolution`` evenly spaced points of [0, 1] using
    the closed form.  n = 3 draws ``samples`` random convex combinations of
    the six vertices (weights are normalised exponentials, i.e. flat
    Dirichlet) and appends the six vertices and the uniform point.  The
    n = 3 evaluation goes through an independent batched formula rather than
    :func:`matching_factor`.
    """
    if resolution < 2:
        raise InvalidInputError("resolution must be at least 2")
    if n == 2:
        ps = np.linspace(0.0, 1.0, resolution)
        log_m = np.array([math.log(closed_form_m_n2(float(p))) for p in ps])
        is_vertex = (ps == 0.0) | (ps == 1.0)
        is_uniform = ps == 0.5
    elif n == 3:
        perms = list(itertools.permutations(range(3)))
        verts = np.zeros((6, 3, 3))
        for k, p in enumerate(perms):
            verts[k, range(3), p] = 1.0
        stream = SeededStream(seed)
        w = stream.exponential(samples * 6).reshape(samples, 6)
        w /= w.sum(axis=1, keepdims=True)
        mats = np.concatenate(
            [np.einsum("sk,kij->sij", w, verts), verts, np.full((1, 3, 3), 1.0 / 3.0)]
        )
        log_m = _batch_log_m(mats)
        is_vertex = np.zeros(len(mats), dtype=bool)
        is_vertex[samples : samples + 6] = True
        is_uniform = np.zeros(len(mats), dtype=bool)
        is_uniform[-1] = True
    else:
        raise InvalidInputError("oracle scan supports n = 2 or n = 3")

    lo, hi = float(log_m.min()), float(log_m.max())
    at_min = log_m <= lo + _TIE
    at_max = log_m >= hi - _TIE
    interior = ~is_vertex
    return OracleResult(
        min_log_m=lo,
        max_log_m=hi,
        argmin_is_uniform=bool(np.all(is_uniform[at_min]) and np.any(is_uniform & at_min)),
        argmax_is_vertex=bool(np.all(is_vertex[at_max])),
        points_scanned=int(log_m.size),
        max_interior_log_m=float(log_m[interior].max()) if interior.any() else -math.inf,
    )
