"""Seeded random stream with a frozen output sequence.

All randomness in the package is drawn from raw 64-bit outputs of the PCG64
bit generator (``numpy.random.PCG64``, PCG XSL-RR 128/64), seeded through
``numpy.random.SeedSequence``.  The raw stream of a bit generator is stable
across numpy releases and platforms; the distribution methods of
``numpy.random.Generator`` are not guaranteed to be, so the transforms
(uniform doubles, unbiased bounded integers) are done here.
"""

from __future__ import annotations

import numpy as np

_TWO64 = 1 << 64
_DOUBLE_UNIT = 2.0**-53


class SeededStream:
    def __init__(self, seed: int):
        if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
        self.seed = int(seed)
        self._bits = np.random.PCG64(self.seed)

    def raw(self, size=None):
        return self._bits.random_raw(size)

    def uniform(self, size=None):
        """Doubles in [0, 1) with 53 random bits each."""
        r = self.raw(size)
        if size is None:
            return (int(r) >> 11) * _DOUBLE_UNIT
        return (r >> np.uint64(11)).astype(np.float64) * _DOUBLE_UNIT

    def uniform_open(self, lo: float, hi: float, size=None):
        """Doubles in (lo, hi), drawn on the midpoints of a 2**-52 grid.

        The unit draw never hits 0 or 1; the affine map may still round onto
        an endpoint, which no caller depends on.
        """
        r = self.raw(size)
        if size is None:
            u = ((int(r) >> 12) + 0.5) * 2.0**-52
        else:
            u = ((r >> np.uint64(12)).astype(np.float64) + 0.5) * 2.0**-52
        return lo + (hi - lo) * u

    def below(self, bound: int) -> int:
        """Unbiased integer in [0, bound) by rejection on the raw stream."""
        if bound < 1:
            raise ValueError("bound must be positive")
        limit = _TWO64 - (_TWO64 % bound)
        while True:
            r = int(self.raw())
            if r < limit:
                return r % bound

    def exponential(self, size):
        """Standard exponential draws, -log(1 - U)."""
        return -np.log1p(-self.uniform(size))


def fisher_yates(n: int, stream: SeededStream) -> list[int]:
    """Uniform permutation of range(n); swaps from the top index down."""
    items = list(range(n))
    for i in range(n - 1, 0, -1):
        j = stream.below(i + 1)
        items[i], items[j] = items[j], items[i]
    return items
