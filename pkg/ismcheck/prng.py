"""
Splittable linear-congruential PRNG

Every generator in ismcheck draws from this. States are immutable values:
each operation returns a new state and never mutates its argument, so a
state can be reused to regenerate exactly the same values.
"""

from dataclasses import dataclass

from ismcheck.errors import UsageError

MASK64 = (1 << 64) - 1

# Spectrally good 64-bit LCG multiplier (Steele & Vigna)
MULTIPLIER = 0xD1342543DE82EF95
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
SPLIT_STREAM_XOR = 0x9E3779B97F4A7C15
SCRAMBLE_MULTIPLIER = 0xD6E8FEB86659FD93


def mix64(z: int) -> int:
    """SplitMix64 finalizer"""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def scramble(state: int) -> int:
    """Output function: folds the strong high bits of the LCG state into the low ones"""
    x = state ^ (state >> 32)
    x = (x * SCRAMBLE_MULTIPLIER) & MASK64
    return x ^ (x >> 32)


@dataclass(frozen=True, slots=True)
class RngState:
    state: int
    stream: int

    def __post_init__(self):
        if not 0 <= self.state <= MASK64 or not 0 <= self.stream <= MASK64:
            raise UsageError("RngState words must be 64-bit unsigned")
        if self.stream % 2 == 0:
            raise UsageError(f"RngState stream must be odd, got {self.stream:#x}")

    def __repr__(self) -> str:
        return f"RngState(state={self.state:#018x}, stream={self.stream:#018x})"


def rng_new(seed: int) -> RngState:
    """Seed a generator; negative or oversized seeds are reduced to 64 bits"""
    seed &= MASK64
    return RngState(mix64(seed), mix64(seed + GOLDEN_GAMMA) | 1)


def _advance(r: RngState) -> int:
    return (r.state * MULTIPLIER + r.stream) & MASK64


def rng_next(r: RngState) -> tuple[RngState, int]:
    """One LCG step; returns the successor state and a scrambled output word"""
    state = _advance(r)
    return RngState(state, r.stream), scramble(state)


def rng_split(r: RngState) -> tuple[RngState, RngState]:
    """Derive two generators from one

    The left branch continues the parent's stream; the right branch gets a
    re-mixed state and a different (still odd) stream constant.
    """
    state = _advance(r)
    left = RngState(state, r.stream)
    right = RngState(mix64(state), (r.stream ^ SPLIT_STREAM_XOR) | 1)
    return left, right


def rng_range(r: RngState, lo: int, hi: int) -> tuple[RngState, int]:
    """Uniform integer in [lo, hi] by rejection sampling

    Spans wider than 64 bits are drawn from several concatenated words.
    """
    if lo > hi:
        raise UsageError(f"empty range: lo ({lo}) > hi ({hi})")
    span = hi - lo + 1
    if span == 1:
        return r, lo

    words = (span.bit_length() + 63) // 64
    universe = 1 << (64 * words)
    limit = universe - universe % span
    while True:
        value = 0
        for _ in range(words):
            r, word = rng_next(r)
            value = (value << 64) | word
        if value < limit:
            return r, lo + value % span
