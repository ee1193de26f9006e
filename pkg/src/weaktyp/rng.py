"""Deterministic counter-based random streams.

Every random draw in this package is a pure function of
(master_seed, stream_id, position): stream states are derived with
splitmix64 mixing, and the draw at position i is the splitmix64 output
for counter i.  Distinct (master_seed, stream_id) pairs give
statistically independent sequences, any position can be regenerated
without replaying the stream, and parallel execution reproduces serial
results bit for bit.

The same arithmetic is mirrored by the compiled kernels in
``weaktyp.kernels``; the equivalence is pinned by tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# top 53 bits of a draw, scaled to [0, 1)
_U01_SCALE = 2.0**-53


def mix64(x: int) -> int:
    """One splitmix64 step: advance the state by gamma and finalize."""
    z = (x + GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def stream_state(master_seed: int, stream_id: int) -> int:
    """Base state of stream ``stream_id`` under ``master_seed``."""
    return mix64(mix64(master_seed & MASK64) ^ (stream_id & MASK64))


def raw_block(state: int, start: int, count: int) -> np.ndarray:
    """uint64 draws at positions start..start+count-1 of a stream.

    Position i of a stream is ``mix64(state + i*GAMMA)``, i.e. the
    plain splitmix64 output sequence started at ``state``.  uint64
    array arithmetic wraps mod 2**64, which is exactly what we want.
    """
    offsets = np.arange(start, start + count, dtype=np.uint64)
    z = np.uint64(state) + (offsets + np.uint64(1)) * np.uint64(GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def uniform_block(state: int, start: int, count: int) -> np.ndarray:
    """float64 draws in [0, 1) at the given stream positions."""
    return (raw_block(state, start, count) >> np.uint64(11)).astype(np.float64) * _U01_SCALE


@dataclass
class RngStream:
    """One independent draw sequence, identified by (master_seed, stream_id).

    The cursor advances as values are consumed; a freshly built stream
    with the same identifiers always replays the same sequence.  A
    stream is a value type: hand each worker its own instance and the
    outcome cannot depend on scheduling.
    """

    master_seed: int
    stream_id: int
    _cursor: int = field(default=0, repr=False, compare=False)

    def __post_init__(self) -> None:
        self._state = stream_state(self.master_seed, self.stream_id)

    @property
    def state(self) -> int:
        return self._state

    def uniforms(self, count: int) -> np.ndarray:
        """Next ``count`` float64 values in [0, 1)."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        out = uniform_block(self._state, self._cursor, count)
        self._cursor += count
        return out

    def uniform(self) -> float:
        return float(self.uniforms(1)[0])
