"""Channels, codebooks, message sampling, and bit-level sequence ops.

Sequences are 1-D numpy uint8 arrays over {0, 1}.  Message indices are
1-based throughout the package; index 0 is reserved for the decoder's
dummy (erasure) output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import RngStream

ROW_SUM_TOL = 1e-12


def sequence(bits) -> np.ndarray:
    """Coerce an iterable of 0/1 symbols (or a string like "0101") to a sequence."""
    if isinstance(bits, str):
        bits = [int(c) for c in bits]
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError("a sequence must be one-dimensional")
    if arr.size and int(arr.max()) > 1:
        raise ValueError("sequence symbols must be 0 or 1")
    return arr


@dataclass(frozen=True)
class Dmc:
    """Discrete memoryless channel given by a row-stochastic matrix W[y|x]."""

    transition: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.transition, dtype=np.float64)
        if w.ndim != 2:
            raise ValueError("transition must be a matrix")
        if np.any(w < 0.0) or np.any(w > 1.0):
            raise ValueError("transition entries must lie in [0, 1]")
        if np.any(np.abs(w.sum(axis=1) - 1.0) > ROW_SUM_TOL):
            raise ValueError("every transition row must sum to 1")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "transition", w)

    @property
    def input_alphabet_size(self) -> int:
        return self.transition.shape[0]

    @property
    def output_alphabet_size(self) -> int:
        return self.transition.shape[1]


def bsc(p: float) -> Dmc:
    """Binary symmetric channel with crossover probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"crossover probability must be in [0, 1], got {p}")
    return Dmc(np.array([[1.0 - p, p], [p, 1.0 - p]]))


@dataclass(frozen=True)
class Codebook:
    """m codewords of length n with i.i.d. Bernoulli(q) symbols."""

    words: np.ndarray  # (m, n) uint8
    q: float

    def __post_init__(self) -> None:
        w = np.asarray(self.words, dtype=np.uint8)
        if w.ndim != 2 or w.shape[0] < 1 or w.shape[1] < 1:
            raise ValueError("words must be a nonempty (m, n) array")
        if int(w.max(initial=0)) > 1:
            raise ValueError("codeword symbols must be 0 or 1")
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"codeword bias q must be in (0, 1), got {self.q}")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "words", w)

    @property
    def m(self) -> int:
        return self.words.shape[0]

    @property
    def n(self) -> int:
        return self.words.shape[1]

    def word(self, index: int) -> np.ndarray:
        """Codeword of message ``index`` (1-based)."""
        if not 1 <= index <= self.m:
            raise IndexError(f"message index {index} outside 1..{self.m}")
        return self.words[index - 1]


def generate_codebook(m: int, n: int, q: float, rng: RngStream) -> Codebook:
    """Draw an (m, n) codebook; each symbol is 1 with probability q."""
    if m < 1:
        raise ValueError("need at least one codeword")
    if n < 1:
        raise ValueError("blocklength must be positive")
    if not 0.0 < q < 1.0:
        raise ValueError(f"codeword bias q must be in (0, 1), got {q}")
    u = rng.uniforms(m * n)
    return Codebook(words=(u < q).astype(np.uint8).reshape(m, n), q=q)


def draw_message(m: int, rng: RngStream) -> int:
    """Uniform message index in 1..m."""
    if m < 1:
        raise ValueError("message set must be nonempty")
    u = rng.uniform()
    return min(int(u * m), m - 1) + 1


def transmit(x: np.ndarray, ch: Dmc, rng: RngStream) -> np.ndarray:
    """Send x through the channel, one independent transition per position.

    Binary channels only: output symbol i is 1 exactly when the i-th
    uniform falls below W[1|x_i].
    """
    if ch.input_alphabet_size != 2 or ch.output_alphabet_size != 2:
        raise ValueError("transmit supports binary channels only")
    if x.size and int(x.max()) > 1:
        raise ValueError("input symbol outside the channel alphabet")
    thresholds = ch.transition[:, 1][x]
    u = rng.uniforms(x.size)
    return (u < thresholds).astype(np.uint8)


def hamming_diff(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Position-wise XOR; 1 marks the positions where a and b differ."""
    if a.shape != b.shape:
        raise ValueError("sequences must have equal length")
    return np.bitwise_xor(a, b)
