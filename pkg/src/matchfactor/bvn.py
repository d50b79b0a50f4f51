"""Birkhoff-von Neumann decomposition by greedy matching and subtraction.

Each round finds a perfect matching on the positive support of the residual,
subtracts the smallest matched entry times that permutation matrix, and
repeats.  Every round zeroes at least one entry and drops the residual onto
a lower-dimensional face of the polytope, so the term count never exceeds
n^2 - 2n + 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DecompositionError, MatchingError, NotBistochasticError
from .genmat import Permutation
from .matcore import DEFAULT_TOL, DenseMatrix, ToleranceConfig, seq_sum, sum_residual


def max_terms_bound(n: int) -> int:
    """Marcus-Ree bound on the number of vertices needed: n^2 - 2n + 2."""
    return n * n - 2 * n + 2


def _perfect_matching(support: np.ndarray) -> Optional[list[int]]:
    """Row -> column perfect matching on a boolean support, or None.

    Rows are matched in ascending order.  Whenever a row is examined, either
    as a new root or while searching for an augmenting path, it first takes
    its lowest-index free column; only if it has none does the search descend
    through its matched columns in ascending order (Kuhn's algorithm with
    free-column lookahead, on an explicit stack so deep searches do not hit
    the recursion limit).
    """
    n = support.shape[0]
    adj = [np.flatnonzero(row).tolist() for row in support]
    match_row = [-1] * n
    match_col = [-1] * n

    for root in range(n):
        came_from = [-1] * n
        pos = [0] * n
        stack = [root]
        found = -1
        while stack:
            u = stack[-1]
            nbrs = adj[u]
            if pos[u] == 0:
                free = next((c for c in nbrs if match_col[c] == -1 and came_from[c] == -1), -1)
                if free != -1:
                    came_from[free] = u
                    found = free
                    break
            while pos[u] < len(nbrs):
                c = nbrs[pos[u]]
                pos[u] += 1
                if came_from[c] == -1:
                    came_from[c] = u
                    stack.append(match_col[c])
                    break
            else:
                stack.pop()
        if found == -1:
            return None
        col = found
        while True:
            row = came_from[col]
            prev = match_row[row]
            match_row[row] = col
            match_col[col] = row
            if row == root:
                break
            col = prev
    return match_row


def support_matching(b: DenseMatrix, threshold: float) -> Permutation:
    """Perfect matching on the edges ``b[i][j] > threshold``."""
    match = _perfect_matching(b.values > threshold)
    if match is None:
        raise MatchingError(f"no perfect matching on entries above {threshold:g}")
    return Permutation(tuple(match))


@dataclass(frozen=True)
class BvnDecomposition:
    n: int
    terms: tuple[tuple[float, Permutation], ...]
    residual_mass: float

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(w for w, _ in self.terms)


def bvn_decompose(
    b: DenseMatrix, tol: ToleranceConfig = DEFAULT_TOL, max_terms: Optional[int] = None
) -> BvnDecomposition:
    residual = sum_residual(b.values)
    if residual > tol.sum_tol:
        raise NotBistochasticError(
            f"row/column sums deviate from 1 by {residual:.3e} (> {tol.sum_tol:g})"
        )
    n = b.n
    if max_terms is None:
        max_terms = max_terms_bound(n)
    r = np.array(b.values)
    rows = np.arange(n)
    stop = tol.zero_tol * n
    terms = []
    while r.max() >= stop and len(terms) < max_terms:
        match = _perfect_matching(r > tol.zero_tol)
        if match is None:
            raise MatchingError(
                f"residual lost Hall's condition after {len(terms)} terms "
                f"(max residual entry {r.max():.3e})"
            )
        cols = np.asarray(match)
        w = float(r[rows, cols].min())
        r[rows, cols] -= w
        # floating-point dust must not survive as spurious negative support
        r[(r < 0) & (r >= -1e-15)] = 0.0
        terms.append((w, Permutation(tuple(match))))

    mass = float(seq_sum(seq_sum(r, 1), 0)) / n
    if r.max() >= stop and mass > 1e-8:
        raise DecompositionError(
            f"max_terms={max_terms} exhausted with residual mass {mass:.3e}", mass
        )
    return BvnDecomposition(n=n, terms=tuple(terms), residual_mass=mass)


def recompose(d: BvnDecomposition) -> DenseMatrix:
    """Sum of weight times permutation matrix over the decomposition's terms."""
    v = np.zeros((d.n, d.n))
    rows = np.arange(d.n)
    for w, p in d.terms:
        v[rows, p.map] += w
    return DenseMatrix(v)
