"""Deterministic 64-bit PRNG used by every seeded pipeline.

SplitMix64 (Steele, Lea, Flood 2014): a fixed, documented generator so that
identical seeds yield identical artifacts across platforms and Python
versions. Do not swap in ``random.Random`` here; file-level byte
reproducibility is part of the contract.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1


class SplitMix64:
    """Seeded 64-bit generator with the small sampling API the library needs."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n). Rejection sampling, no modulo bias."""
        if n <= 0:
            raise ValueError("below() requires n >= 1")
        limit = (MASK64 + 1) - ((MASK64 + 1) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def sample_distinct(self, n: int, k: int) -> list[int]:
        """k distinct integers drawn from [0, n), in draw order."""
        if k > n:
            raise ValueError(f"cannot draw {k} distinct values from range({n})")
        seen: set[int] = set()
        out: list[int] = []
        while len(out) < k:
            v = self.below(n)
            if v not in seen:
                seen.add(v)
                out.append(v)
        return out

    def spawn(self, stream: int) -> "SplitMix64":
        """Independent child generator; used to decouple pipeline stages."""
        return SplitMix64(self.next_u64() ^ (stream * 0xD1342543DE82EF95))
