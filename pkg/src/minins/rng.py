"""Seedable splitmix64 generator.

Chosen because it is tiny, fast, and trivially portable: any
implementation of the two constants below reproduces the exact same
stream, which keeps simulation runs reproducible across platforms.
"""

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(x: int) -> int:
    """splitmix64 output finalizer (Stafford mix13). Pure."""
    x &= MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & MASK64
    x ^= x >> 31
    return x


class SplitMix64:
    """splitmix64 stream: state += golden gamma, output = mix64(state)."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & MASK64

    @classmethod
    def substream(cls, seed: int, ordinal: int) -> "SplitMix64":
        """Independent per-consumer stream: seeded with mix64(seed ^ ordinal)."""
        return cls(mix64(seed ^ ordinal))

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN_GAMMA) & MASK64
        return mix64(self._state)

    def uniform(self) -> float:
        """Uniform double in [0, 1), 53 bits of precision."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))
