"""Seeded random streams.

Python-side draws use a numpy PCG64 generator. Compiled kernels use an
explicit xoshiro256** state array so that their output depends only on
that state and never on numba's global generator.
"""
from dataclasses import dataclass

import numba as nb
import numpy as np

_U53 = 1.0 / 9007199254740992.0
_ROU = 1.7155277699214135  # sqrt(8/e)


@dataclass(frozen=True)
class RngState:
    seed: int
    stream: int = 0

    def __post_init__(self):
        if not (0 <= int(self.seed) < 2**64):
            raise ValueError("seed must fit in 64 bits")
        if int(self.stream) < 0:
            raise ValueError("stream id must be nonnegative")

    def spawn(self):
        return RandomStream(self)


class RandomStream:
    """Mutable stream derived from an RngState."""

    def __init__(self, state):
        if not isinstance(state, RngState):
            state = RngState(*state) if isinstance(state, tuple) else RngState(int(state))
        self.origin = state
        ss = np.random.SeedSequence(state.seed, spawn_key=(state.stream,))
        self.gen = np.random.Generator(np.random.PCG64(ss))
        self.kstate = ss.generate_state(4, np.uint64)
        if not self.kstate.any():
            self.kstate[0] = np.uint64(1)


def as_stream(rng):
    if isinstance(rng, RandomStream):
        return rng
    if isinstance(rng, RngState):
        return RandomStream(rng)
    if isinstance(rng, (int, np.integer)):
        return RandomStream(RngState(int(rng)))
    raise TypeError(f"cannot build a random stream from {type(rng).__name__}")


@nb.njit(inline="always")
def _rotl(x, k):
    return (x << np.uint64(k)) | (x >> np.uint64(64 - k))


@nb.njit
def next_u64(s):
    s0 = s[0]
    s1 = s[1]
    s2 = s[2]
    s3 = s[3]
    result = _rotl(s1 * np.uint64(5), 7) * np.uint64(9)
    t = s1 << np.uint64(17)
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = _rotl(s3, 45)
    s[0] = s0
    s[1] = s1
    s[2] = s2
    s[3] = s3
    return result


@nb.njit
def uniform(s):
    """Uniform on the open interval (0, 1)."""
    return (float(next_u64(s) >> np.uint64(11)) + 0.5) * _U53


@nb.njit
def normal(s):
    # Kinderman-Monahan ratio of uniforms
    while True:
        u = uniform(s)
        v = uniform(s)
        x = _ROU * (v - 0.5) / u
        if x * x <= -4.0 * np.log(u):
            return x
