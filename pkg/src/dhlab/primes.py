"""Segmented sieve of Eratosthenes and the Chebyshev theta function."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CoverageError, RangeError

SEGMENT = 1 << 18
_MAX_HI = (1 << 63) - 1


def _small_primes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


@dataclass(frozen=True)
class PrimeTable:
    """The primes in ``[lo, hi]`` with their natural logarithms.

    Instances are immutable; ``primes`` and ``logs`` are read-only arrays.
    """

    lo: int
    hi: int
    primes: np.ndarray
    logs: np.ndarray
    _cum: np.ndarray = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        primes = np.asarray(self.primes, dtype=np.int64)
        logs = np.asarray(self.logs, dtype=np.float64)
        cum = np.concatenate(([0.0], np.cumsum(logs)))
        for arr in (primes, logs, cum):
            arr.flags.writeable = False
        object.__setattr__(self, "primes", primes)
        object.__setattr__(self, "logs", logs)
        object.__setattr__(self, "_cum", cum)

    def __len__(self) -> int:
        return len(self.primes)

    def covers(self, a: float, b: float) -> bool:
        """True when every integer in ``[a, b]`` lies inside the table range."""
        if b < a:
            return True
        return self.lo <= max(math.ceil(a), 0) and math.floor(b) <= self.hi

    def require(self, a: float, b: float) -> None:
        if not self.covers(a, b):
            raise CoverageError(
                f"table [{self.lo}, {self.hi}] does not cover [{a}, {b}]"
            )

    def between(self, a: int, b: int) -> tuple[np.ndarray, np.ndarray]:
        """Primes and logs with ``a <= p <= b`` (integer bounds)."""
        self.require(a, b)
        i = np.searchsorted(self.primes, a, side="left")
        j = np.searchsorted(self.primes, b, side="right")
        return self.primes[i:j], self.logs[i:j]

    def log_prefix(self, x) -> np.ndarray:
        """Sum of log p over table primes ``p <= x`` (vectorised, no coverage check)."""
        idx = np.searchsorted(self.primes, np.floor(x), side="right")
        return self._cum[idx]


def sieve_range(lo: int, hi: int, segment: int = SEGMENT) -> PrimeTable:
    """Sieve the primes in ``[lo, hi]`` segment by segment.

    Memory stays O(sqrt(hi) + segment).
    """
    lo, hi = int(lo), int(hi)
    if lo < 0:
        raise RangeError(f"lo must be non-negative, got {lo}")
    if lo > hi:
        raise RangeError(f"empty range: lo={lo} > hi={hi}")
    if hi > _MAX_HI:
        raise RangeError("hi does not fit in 64 bits")

    base = _small_primes(math.isqrt(hi))
    chunks = []
    start = max(lo, 2)
    while start <= hi:
        stop = min(start + segment - 1, hi)
        flags = np.ones(stop - start + 1, dtype=bool)
        for p in base:
            p = int(p)
            if p * p > stop:
                break
            first = max(p * p, -(-start // p) * p)
            flags[first - start :: p] = False
        chunks.append(np.flatnonzero(flags).astype(np.int64) + start)
        start = stop + 1

    primes = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    return PrimeTable(lo, hi, primes, np.log(primes.astype(np.float64)))


def theta(x: float, table: PrimeTable) -> float:
    """Chebyshev's function: the sum of ln p over primes p <= x."""
    if x < 2:
        return 0.0
    if table.lo > 2 or table.hi < math.floor(x):
        raise CoverageError(f"theta({x}) needs primes in [2, {math.floor(x)}]")
    k = int(np.searchsorted(table.primes, math.floor(x), side="right"))
    return math.fsum(table.logs[:k])
