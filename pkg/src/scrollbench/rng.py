"""Deterministic, implementation-portable random number generation.

Trial plans must be reproducible from (participant, seed) alone, including by
reimplementations in other languages, so the generator is pinned down here
rather than delegated to a library:

- SplitMix64 (Steele et al.): state advances by the 64-bit golden gamma
  0x9E3779B97F4A7C15; output is the finalizer with shifts 30/27/31 and
  multipliers 0xBF58476D1CE4E5B9, 0x94D049BB133111EB.
- Bounded draws use rejection sampling on the top range multiple, so there
  is no modulo bias.
- Shuffles are Fisher-Yates from the top index down.
"""

from __future__ import annotations

from typing import Sequence, TypeVar

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15

T = TypeVar("T")


class SplitMix64:
    """Seeded 64-bit generator with reproducible shuffle and bounded draws."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), rejection-sampled to avoid modulo bias."""
        if n <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def shuffled(self, items: Sequence[T]) -> list[T]:
        """Fisher-Yates shuffle of a copy of ``items``."""
        out = list(items)
        for i in range(len(out) - 1, 0, -1):
            j = self.below(i + 1)
            out[i], out[j] = out[j], out[i]
        return out

    def fork(self) -> "SplitMix64":
        """Child generator seeded from this stream (for per-trial streams)."""
        return SplitMix64(self.next_u64())
