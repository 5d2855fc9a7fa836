"""Seeded, reproducible random streams.

A stream is addressed by ``(master_seed, stream_id)`` and exposes a counter
into a fixed sequence of 64-bit words (algorithm documented in
``_kernels_numpy``). Because every word is a pure function of
(seed, stream, counter), replaying a stream is exact on any backend and any
degree of parallelism. Experiment trial ``t`` always uses ``stream_id = t``
of the experiment seed; non-trial purposes use ids at ``NON_TRIAL_BASE`` and
above so they never collide with trial streams.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels

NON_TRIAL_BASE = 1 << 48
FAMILY_STREAM = NON_TRIAL_BASE  # seeded family generation in the CLI


@dataclass
class RngStream:
    """Counter state over one (master_seed, stream_id) word sequence."""

    master_seed: int
    stream_id: int
    counter: int = 0
    _key: int = field(init=False, repr=False)

    def __post_init__(self):
        self._key = kernels.stream_key(self.master_seed, self.stream_id)

    def substream(self, stream_id):
        return RngStream(self.master_seed, stream_id)

    def raw(self, n):
        out = kernels.raw_block(self._key, self.counter, n)
        self.counter += int(n)
        return out

    def uniforms(self, n):
        """n doubles in [0, 1), one word each."""
        return (self.raw(n) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53

    def gaussians(self, n):
        """n standard normals via the polar method.

        Draws are attempt-aligned: the counter is rounded up to the next
        even value, and whole attempts (two words each) are consumed; an odd
        ``n`` discards the trailing variate of the last attempt.
        """
        attempt = (self.counter + 1) // 2
        vals, used = kernels.gaussian_block(self._key, attempt, n)
        self.counter = 2 * (attempt + used)
        return vals


def rademacher_signs(stream, n):
    """n independent signs in {-1, +1}, one word each (top bit)."""
    bits = (stream.raw(n) >> np.uint64(63)).astype(np.int64)
    return (1 - 2 * bits).astype(np.float64)


def gaussian_coeffs(stream, n):
    """n i.i.d. standard normal coefficients."""
    return stream.gaussians(n)
