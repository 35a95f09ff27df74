"""Deterministic random stream shared by every stochastic component.

The generator is xoshiro256** (Blackman & Vigna, public domain) seeded through
SplitMix64, implemented directly on 64-bit integer arithmetic so that a given
seed produces the same draw sequence on every platform and Python build.
State-of-the-art statistical quality is not the point here; replayability is.

A stream is single-consumer: one run owns one stream and consumes it in a
fixed, documented order. Parallelism happens across runs with distinct seeds.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF

_DOUBLE_SCALE = 1.0 / (1 << 53)


def _splitmix64(x: int) -> tuple[int, int]:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return x, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class RngStream:
    """xoshiro256** stream with uniform/index/shuffle draws."""

    __slots__ = ("seed", "_s0", "_s1", "_s2", "_s3")

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}")
        self.seed = seed
        sm = seed & MASK64
        sm, self._s0 = _splitmix64(sm)
        sm, self._s1 = _splitmix64(sm)
        sm, self._s2 = _splitmix64(sm)
        sm, self._s3 = _splitmix64(sm)

    def next_raw(self) -> int:
        """Next raw 64-bit output."""
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return result

    def uniform(self) -> float:
        """Uniform double in [0, 1), from the top 53 bits of one raw draw."""
        return (self.next_raw() >> 11) * _DOUBLE_SCALE

    def index(self, n: int) -> int:
        """Uniform integer in [0, n). Unbiased via rejection sampling."""
        if n < 1:
            raise ValueError(f"cannot draw an index from an empty range (n={n})")
        # largest multiple of n that fits in 64 bits; draws at or above it
        # would bias the modulo and are rejected
        limit = ((1 << 64) // n) * n
        while True:
            r = self.next_raw()
            if r < limit:
                return r % n

    def bit(self) -> int:
        """Uniform bit, 0 or 1."""
        return self.index(2)

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle, consuming len(items)-1 index draws."""
        for i in range(len(items) - 1, 0, -1):
            j = self.index(i + 1)
            items[i], items[j] = items[j], items[i]
