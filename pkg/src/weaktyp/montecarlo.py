"""Trial execution, paired error estimation, exponents, and the exact oracle.

Both decoders always see the same codebook, message, and noise, so the
weak decoder can only ever remove errors: zero or one candidates give
identical verdicts, and with two or more candidates the classical
decoder has already failed.  That pathwise dominance is asserted on
every trial.

Stream discipline: all randomness flows from ``master_seed``.  The
instance parameters (n, m, q, channel, eps, codebook mode) are folded
into a derived master so that different sweep points draw decorrelated
streams, and trial t then owns four purpose streams (codebook, message,
noise, resolver).  Batches, single trials, and the exhaustive oracle
all reproduce each other exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from hashlib import blake2b

import numpy as np

from . import kernels
from .core import Codebook, Dmc, draw_message, generate_codebook, transmit
from .decoders import (
    CandidateSet,
    Clustering,
    DecodeOutcome,
    RESOLVERS,
    cluster_resolve,
    find_candidates,
    jt_decode,
    resolve_details,
    svm_resolve,
    weak_decode,
)
from .rng import RngStream, mix64
from .typicality import build_context

PURPOSE_CODEBOOK = 0
PURPOSE_MESSAGE = 1
PURPOSE_NOISE = 2
PURPOSE_RESOLVER = 3
STREAMS_PER_TRIAL = 4

# reserved stream ids, far above any trial's 4*t+purpose range
FIXED_CODEBOOK_STREAM = 1 << 62
ORACLE_RESOLVER_STREAM = (1 << 62) + 1

ENUM_MAX_N = 12
ENUM_MAX_M = 4

DEFAULT_CHUNK = 2048

CODEBOOK_MODES = ("redraw", "fixed")


@dataclass(frozen=True)
class TrialConfig:
    """Everything one trial depends on, besides its trial id."""

    n: int
    m: int
    q: float
    channel: Dmc
    eps: float
    resolver: str = "cluster"
    k_max: int = 3
    codebook_mode: str = "redraw"
    master_seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("blocklength n must be positive")
        if self.m < 2:
            raise ValueError("need at least 2 messages for meaningful decoding")
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"codeword bias q must be in (0, 1), got {self.q}")
        if self.eps <= 0.0:
            raise ValueError("eps must be positive")
        if self.resolver not in RESOLVERS:
            raise ValueError(f"unknown resolver {self.resolver!r}")
        if self.k_max < 1:
            raise ValueError("k_max must be positive")
        if self.codebook_mode not in CODEBOOK_MODES:
            raise ValueError(f"unknown codebook_mode {self.codebook_mode!r}")


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one trial under both decoders on shared randomness."""

    trial_id: int
    true_w: int
    jt_outcome: DecodeOutcome
    weak_outcome: DecodeOutcome
    candidate_count: int

    def __post_init__(self) -> None:
        weak_err = self.weak_outcome.decoded != self.true_w
        jt_err = self.jt_outcome.decoded != self.true_w
        if weak_err and not jt_err:
            raise ValueError("dominance violated: weak decoder erred where the classical one succeeded")


@dataclass(frozen=True)
class PeEstimate:
    """Monte Carlo error-probability estimate with the zero-error floor."""

    trials: int
    errors: int
    pe_hat: float
    zero_error: bool

    @classmethod
    def from_counts(cls, trials: int, errors: int) -> "PeEstimate":
        if trials < 1:
            raise ValueError("trials must be positive")
        if not 0 <= errors <= trials:
            raise ValueError("errors must lie in 0..trials")
        if errors == 0:
            # Pe=0 has no exponent; floor at one error and flag the point
            return cls(trials=trials, errors=0, pe_hat=1.0 / trials, zero_error=True)
        return cls(trials=trials, errors=errors, pe_hat=errors / trials, zero_error=False)


@dataclass(frozen=True)
class ExponentPoint:
    """One (blocklength, rate, Pe, exponent) tuple for one decoder."""

    n: int
    rate: float
    pe: PeEstimate
    exponent: float


def error_exponent(pe_hat: float, n: int) -> float:
    """-ln(pe)/n, the exponent a given error probability implies at blocklength n."""
    if n < 1:
        raise ValueError("blocklength must be positive")
    if not 0.0 < pe_hat <= 1.0:
        raise ValueError(f"pe must be in (0, 1], got {pe_hat}")
    return -math.log(pe_hat) / n


def exponent(pe: PeEstimate, n: int, m: int) -> ExponentPoint:
    """Exponent point for an estimate; rate is log2(m)/n bits per symbol."""
    if m < 1:
        raise ValueError("message count must be positive")
    return ExponentPoint(n=n, rate=math.log2(m) / n, pe=pe, exponent=error_exponent(pe.pe_hat, n))


def derived_master(cfg: TrialConfig) -> int:
    """Fold the instance parameters into the master seed.

    Distinct sweep points must not share stream prefixes, but the seed
    may not depend on decode-stage knobs (resolver, k_max): those only
    read the dedicated resolver stream, so changing them never perturbs
    the generated trials.
    """
    key = repr(
        (
            cfg.n,
            cfg.m,
            cfg.q,
            cfg.channel.transition.tolist(),
            cfg.eps,
            cfg.codebook_mode,
        )
    ).encode()
    digest = blake2b(key, digest_size=8).digest()
    return mix64(cfg.master_seed ^ int.from_bytes(digest, "little"))


def fixed_codebook(cfg: TrialConfig) -> Codebook:
    """The shared codebook of fixed-codebook mode, drawn from its reserved stream."""
    rng = RngStream(derived_master(cfg), FIXED_CODEBOOK_STREAM)
    return generate_codebook(cfg.m, cfg.n, cfg.q, rng)


def _trial_codebook(cfg: TrialConfig, dm: int, trial_id: int) -> Codebook:
    if cfg.codebook_mode == "fixed":
        return fixed_codebook(cfg)
    rng = RngStream(dm, trial_id * STREAMS_PER_TRIAL + PURPOSE_CODEBOOK)
    return generate_codebook(cfg.m, cfg.n, cfg.q, rng)


def _resolver_stream(dm: int, trial_id: int) -> RngStream:
    return RngStream(dm, trial_id * STREAMS_PER_TRIAL + PURPOSE_RESOLVER)


def run_trial(cfg: TrialConfig, trial_id: int) -> TrialRecord:
    """One trial through the reference (non-kernel) path; both decoders share everything."""
    if trial_id < 0:
        raise ValueError("trial_id must be nonnegative")
    dm = derived_master(cfg)
    ctx = build_context(cfg.q, cfg.channel)
    cb = _trial_codebook(cfg, dm, trial_id)
    w = draw_message(cfg.m, RngStream(dm, trial_id * STREAMS_PER_TRIAL + PURPOSE_MESSAGE))
    y = transmit(cb.word(w), cfg.channel, RngStream(dm, trial_id * STREAMS_PER_TRIAL + PURPOSE_NOISE))
    jt = jt_decode(y, cb, ctx, cfg.eps)
    weak = weak_decode(y, cb, ctx, cfg.eps, cfg.resolver, _resolver_stream(dm, trial_id), cfg.k_max)
    return TrialRecord(
        trial_id=trial_id,
        true_w=w,
        jt_outcome=jt,
        weak_outcome=weak,
        candidate_count=jt.candidate_count,
    )


@dataclass(frozen=True)
class TrialBatch:
    """Vectorized outcomes of a contiguous block of trials."""

    true_w: np.ndarray
    jt_decoded: np.ndarray
    weak_decoded: np.ndarray
    candidate_counts: np.ndarray

    @property
    def trials(self) -> int:
        return int(self.true_w.size)

    @property
    def jt_errors(self) -> int:
        return int((self.jt_decoded != self.true_w).sum())

    @property
    def weak_errors(self) -> int:
        return int((self.weak_decoded != self.true_w).sum())


def _resolve_multi(
    cfg: TrialConfig,
    dm: int,
    tid0: int,
    rows: np.ndarray,
    mask: np.ndarray,
    ybits: np.ndarray,
    xwords: np.ndarray | None,
    fixed_words: np.ndarray | None,
    weak_decoded: np.ndarray,
) -> None:
    for t in rows:
        idx0 = np.flatnonzero(mask[t])
        words = fixed_words if xwords is None else xwords[t]
        z = np.bitwise_xor(words[idx0], ybits[t])
        cands = CandidateSet(indices=idx0.astype(np.int64) + 1, z_seqs=z)
        rng = _resolver_stream(dm, tid0 + int(t))
        if cfg.resolver == "svm":
            weak_decoded[t] = svm_resolve(cands, rng)
        else:
            pick = "random" if cfg.resolver == "cluster-random" else "closest"
            weak_decoded[t] = cluster_resolve(cands, cfg.k_max, rng, pick=pick)


def run_trials(
    cfg: TrialConfig, num_trials: int, chunk_size: int = DEFAULT_CHUNK, start: int = 0
) -> TrialBatch:
    """Trials start..start+num_trials-1 through the batch kernels, resolver included.

    Identical to looping :func:`run_trial`, but orders of magnitude
    faster; equality of the two paths is pinned by tests.
    """
    if num_trials < 1:
        raise ValueError("num_trials must be positive")
    if chunk_size < 1:
        raise ValueError("chunk_size must be positive")
    if start < 0:
        raise ValueError("start must be nonnegative")
    dm = derived_master(cfg)
    ctx = build_context(cfg.q, cfg.channel)
    consts = ctx.kernel_constants()
    t0 = float(cfg.channel.transition[0, 1])
    t1 = float(cfg.channel.transition[1, 1])
    fixed_words = fixed_codebook(cfg).words if cfg.codebook_mode == "fixed" else None

    true_w = np.empty(num_trials, dtype=np.int64)
    jt_decoded = np.empty(num_trials, dtype=np.int64)
    weak_decoded = np.empty(num_trials, dtype=np.int64)
    candidate_counts = np.empty(num_trials, dtype=np.int64)

    for off in range(0, num_trials, chunk_size):
        tid0 = start + off
        count = min(chunk_size, num_trials - off)
        w, mask, ybits, xwords = kernels.simulate_trials(
            dm, tid0, count, cfg.m, cfg.n, cfg.q, t0, t1, consts, cfg.eps, fixed_words
        )
        counts = mask.sum(axis=1)
        jt = np.where(counts == 1, mask.argmax(axis=1) + 1, 0)
        weak = jt.copy()
        multi = np.flatnonzero(counts >= 2)
        if multi.size:
            _resolve_multi(cfg, dm, tid0, multi, mask, ybits, xwords, fixed_words, weak)

        jt_err = jt != w
        weak_err = weak != w
        if np.any(weak_err & ~jt_err):
            raise RuntimeError("dominance violated: weak decoder erred where the classical one succeeded")

        sl = slice(off, off + count)
        true_w[sl] = w
        jt_decoded[sl] = jt
        weak_decoded[sl] = weak
        candidate_counts[sl] = counts

    return TrialBatch(
        true_w=true_w,
        jt_decoded=jt_decoded,
        weak_decoded=weak_decoded,
        candidate_counts=candidate_counts,
    )


def estimate_pe(cfg: TrialConfig, num_trials: int) -> tuple[PeEstimate, PeEstimate]:
    """(classical, weak) error estimates over the same trial stream."""
    batch = run_trials(cfg, num_trials)
    return (
        PeEstimate.from_counts(num_trials, batch.jt_errors),
        PeEstimate.from_counts(num_trials, batch.weak_errors),
    )


def estimate_pe_adaptive(
    cfg: TrialConfig,
    min_errors: int = 50,
    max_trials: int = 1_000_000,
    chunk_size: int = DEFAULT_CHUNK * 4,
) -> tuple[PeEstimate, PeEstimate]:
    """Run until both decoders have min_errors errors (or the trial cap).

    Error-count targeting keeps the relative error of the estimate under
    control in deep-tail regimes.  Figure runs use fixed trial counts
    instead so that points stay comparable.
    """
    if min_errors < 1:
        raise ValueError("min_errors must be positive")
    if max_trials < 1:
        raise ValueError("max_trials must be positive")
    jt_err = 0
    weak_err = 0
    done = 0
    while done < max_trials:
        count = min(chunk_size, max_trials - done)
        # extend the trial-id range rather than re-running a prefix
        batch = run_trials(cfg, count, start=done)
        jt_err += batch.jt_errors
        weak_err += batch.weak_errors
        done += count
        if jt_err >= min_errors and weak_err >= min_errors:
            break
    return PeEstimate.from_counts(done, jt_err), PeEstimate.from_counts(done, weak_err)


def exhaustive_pe(cfg: TrialConfig) -> tuple[float, float]:
    """Exact error probabilities of both decoders by full enumeration.

    Requires fixed-codebook mode and a small instance.  The resolver
    stream is pinned to a reserved id so the enumeration is a pure
    function of the configuration; for instances whose resolution is
    seeding-invariant (for example m=2, where any multi-candidate set
    provably decodes to its lowest index) the result is exactly the
    expectation of the Monte Carlo path.
    """
    if cfg.codebook_mode != "fixed":
        raise ValueError("exhaustive enumeration requires codebook_mode='fixed'")
    if cfg.n > ENUM_MAX_N or cfg.m > ENUM_MAX_M:
        raise ValueError(f"instance beyond enumeration bounds (n<={ENUM_MAX_N}, m<={ENUM_MAX_M})")
    dm = derived_master(cfg)
    ctx = build_context(cfg.q, cfg.channel)
    cb = fixed_codebook(cfg)
    w_mat = cfg.channel.transition
    n = cfg.n

    all_y = ((np.arange(2**n)[:, None] >> np.arange(n)[None, :]) & 1).astype(np.uint8)
    total_weight = 0.0
    jt_pe = 0.0
    weak_pe = 0.0
    for w in range(1, cfg.m + 1):
        x = cb.word(w)
        for y in all_y:
            n1x = int(x.sum())
            n1y = int(y.sum())
            n11 = int((x & y).sum())
            n10 = n1x - n11
            n01 = n1y - n11
            n00 = n - n1x - n1y + n11
            prob = (
                w_mat[0, 0] ** n00 * w_mat[0, 1] ** n01 * w_mat[1, 0] ** n10 * w_mat[1, 1] ** n11
            )
            weight = prob / cfg.m
            total_weight += weight
            if weight == 0.0:
                continue
            jt = jt_decode(y, cb, ctx, cfg.eps)
            weak = weak_decode(
                y, cb, ctx, cfg.eps, cfg.resolver, RngStream(dm, ORACLE_RESOLVER_STREAM), cfg.k_max
            )
            if jt.decoded != w:
                jt_pe += weight
            if weak.decoded != w:
                weak_pe += weight
    if abs(total_weight - 1.0) > 1e-10:
        raise RuntimeError(f"outcome weights sum to {total_weight}, expected 1")
    return jt_pe, weak_pe


@dataclass(frozen=True)
class TrialDetail:
    """Everything :func:`run_trial` saw, for inspection and debugging."""

    record: TrialRecord
    received: np.ndarray
    candidates: CandidateSet
    clustering: Clustering | None


def trial_detail(cfg: TrialConfig, trial_id: int) -> TrialDetail:
    """Re-run one trial capturing the candidate set and any clustering."""
    dm = derived_master(cfg)
    ctx = build_context(cfg.q, cfg.channel)
    cb = _trial_codebook(cfg, dm, trial_id)
    w = draw_message(cfg.m, RngStream(dm, trial_id * STREAMS_PER_TRIAL + PURPOSE_MESSAGE))
    y = transmit(cb.word(w), cfg.channel, RngStream(dm, trial_id * STREAMS_PER_TRIAL + PURPOSE_NOISE))
    cands = find_candidates(y, cb, ctx, cfg.eps)

    jt = jt_decode(y, cb, ctx, cfg.eps)
    clustering = None
    if cands.count == 0:
        weak = DecodeOutcome(0, 0, "none")
    elif cands.count == 1:
        weak = DecodeOutcome(int(cands.indices[0]), 1, "unique")
    elif cfg.resolver == "svm":
        weak = DecodeOutcome(svm_resolve(cands, _resolver_stream(dm, trial_id)), cands.count, "svm")
    else:
        pick = "random" if cfg.resolver == "cluster-random" else "closest"
        decoded, clustering = resolve_details(cands, cfg.k_max, _resolver_stream(dm, trial_id), pick)
        weak = DecodeOutcome(decoded, cands.count, "cluster")

    record = TrialRecord(
        trial_id=trial_id,
        true_w=w,
        jt_outcome=jt,
        weak_outcome=weak,
        candidate_count=cands.count,
    )
    return TrialDetail(record=record, received=y, candidates=cands, clustering=clustering)
