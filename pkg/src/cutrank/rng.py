"""Deterministic 64-bit PRNG used by every randomized component.

The generator is SplitMix64 (Steele, Lea & Flood; also the seeding routine of
xoroshiro/xoshiro).  It is fully specified by three multiplies and shifts, so
streams are bit-stable across platforms and Python versions:

    state += 0x9E3779B97F4A7C15                       (mod 2^64)
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9          (mod 2^64)
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB          (mod 2^64)
    output = z ^ (z >> 31)

Bounded draws use modulo rejection, so they are exactly uniform.  Independent
sub-streams are derived by folding an FNV-1a-64 hash of a textual label into
the seed and scrambling once; golden tests pin concrete outputs.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


class SplitMix64:
    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform draw from {0, ..., n-1} by rejection."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        # largest multiple of n that fits in 64 bits; draws past it are biased
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform draw from {lo, ..., hi} inclusive."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.below(hi - lo + 1)

    def shuffle(self, items: list) -> None:
        # Fisher-Yates, in place
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


def fnv1a(text: str) -> int:
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK
    return h


def derive_seed(seed: int, *labels) -> int:
    """Child seed for the sub-stream named by `labels` (strings or ints)."""
    h = fnv1a("/".join(str(x) for x in labels))
    return SplitMix64(seed ^ h).next_u64()


def stream(seed: int, *labels) -> SplitMix64:
    if labels:
        return SplitMix64(derive_seed(seed, *labels))
    return SplitMix64(seed)
