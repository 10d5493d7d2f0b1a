"""Deterministic, platform-independent randomness primitives.

Everything seeded in this package bottoms out in the splitmix64 generator
defined here. It is a tiny, well-known 64-bit mixer (Steele, Lea & Flood's
SplitMix) whose output depends only on integer arithmetic mod 2**64, so fold
plans and simulation streams reproduce bit-for-bit on any platform or Python
build. Bulk draws inside the simulation use numpy PCG64 generators whose
seeds are derived through `derive_seed`, keeping every consumer on one
documented seeding rule.
"""

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z):
    # splitmix64 finalizer: two xor-shift-multiply rounds and a closing shift.
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
    return z ^ (z >> 31)


def derive_seed(master, index):
    """Return the (index+1)-th output of the splitmix64 stream seeded at `master`.

    Used as the seed-splitting rule: child streams (one per repetition, per
    axis, per purpose) are `derive_seed(master, i)` for consecutive `i`, which
    makes the set of child streams independent of evaluation order.
    """
    if index < 0:
        raise ValueError("index must be non-negative")
    state = (master + (index + 1) * _GOLDEN) & MASK64
    return _mix(state)


class SplitMix64:
    """Sequential splitmix64 stream with unbiased bounded draws and shuffling."""

    def __init__(self, seed):
        self._state = seed & MASK64

    def next_uint64(self):
        self._state = (self._state + _GOLDEN) & MASK64
        return _mix(self._state)

    def next_below(self, bound):
        """Uniform integer in [0, bound) by rejection, free of modulo bias."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        # Largest multiple of `bound` not exceeding 2**64; draws past it are
        # rejected so every residue is equally likely.
        limit = MASK64 + 1 - (MASK64 + 1) % bound
        while True:
            draw = self.next_uint64()
            if draw < limit:
                return draw % bound

    def shuffle(self, items):
        """In-place Fisher-Yates shuffle of a mutable sequence."""
        for i in range(len(items) - 1, 0, -1):
            j = self.next_below(i + 1)
            items[i], items[j] = items[j], items[i]
