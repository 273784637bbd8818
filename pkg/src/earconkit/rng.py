"""Portable deterministic PRNG for corpus sampling.

The corpus selection must reproduce bit-for-bit on any platform, so the
shuffle is driven by an explicitly specified generator (xoshiro256**
seeded through splitmix64) instead of a standard-library PRNG whose
stream is an implementation detail.

Ports of the public-domain reference implementations by Blackman & Vigna
(https://prng.di.unimi.it/).
"""

from __future__ import annotations

_MASK64 = 0xFFFFFFFFFFFFFFFF


def splitmix64_stream(seed: int, count: int) -> list[int]:
    """Return the first `count` outputs of splitmix64 started at `seed`."""
    state = seed & _MASK64
    out = []
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        out.append(z ^ (z >> 31))
    return out


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Xoshiro256StarStar:
    """xoshiro256** with 64-bit integer seeding via splitmix64 expansion."""

    def __init__(self, seed: int):
        self._s = splitmix64_stream(seed, 4)

    def next_u64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s[1] << 17) & _MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def next_below(self, bound: int) -> int:
        """Unbiased integer in [0, bound) by rejection of the modulo tail."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound


def shuffled(items: list, seed: int) -> list:
    """Fisher-Yates shuffle of a copy of `items`, high index downward.

    The swap partner for position i is drawn as next_below(i + 1), so the
    permutation is a pure function of (len(items), seed).
    """
    rng = Xoshiro256StarStar(seed)
    out = list(items)
    for i in range(len(out) - 1, 0, -1):
        j = rng.next_below(i + 1)
        out[i], out[j] = out[j], out[i]
    return out
