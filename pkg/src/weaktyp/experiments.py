"""Figure-style sweeps: exponent vs blocklength, and the bias sweep.

The blocklength sweep evaluates both decoders on identical trial
streams at each n.  The bias sweep takes, for every codeword bias q,
each decoder's best exponent over the blocklength grid and reports the
difference (classical minus weak); dominance makes that difference
nonpositive at every single point, not merely on average.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .montecarlo import ExponentPoint, TrialConfig, estimate_pe, exponent

M_MODES = ("fixed-m", "fixed-rate")


@dataclass(frozen=True)
class SweepResult:
    """Paired exponent points over a strictly increasing x-grid."""

    label: str
    points: tuple[tuple[float, ExponentPoint, ExponentPoint], ...]
    config: dict

    def __post_init__(self) -> None:
        xs = [p[0] for p in self.points]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("sweep x-values must be strictly increasing")


def _messages_for(base: TrialConfig, n: int, m_mode: str, rate_bits: float | None) -> int:
    if m_mode == "fixed-m":
        return base.m
    if rate_bits is None or rate_bits <= 0.0:
        raise ValueError("fixed-rate mode needs a positive rate_bits")
    return max(2, 2 ** math.ceil(rate_bits * n))


def sweep_blocklengths(
    base: TrialConfig,
    blocklengths: list[int],
    trials_per_point: int,
    m_mode: str = "fixed-m",
    rate_bits: float | None = None,
) -> SweepResult:
    """Paired exponent curves over a blocklength grid.

    ``m_mode`` "fixed-m" keeps the message count of ``base``;
    "fixed-rate" grows it as 2**ceil(rate_bits * n).
    """
    if not blocklengths:
        raise ValueError("blocklengths must be nonempty")
    if any(b <= a for a, b in zip(blocklengths, blocklengths[1:])):
        raise ValueError("blocklengths must be strictly increasing")
    if trials_per_point < 1:
        raise ValueError("trials_per_point must be positive")
    if m_mode not in M_MODES:
        raise ValueError(f"unknown m_mode {m_mode!r}")

    points = []
    for n in blocklengths:
        m = _messages_for(base, n, m_mode, rate_bits)
        cfg = replace(base, n=n, m=m)
        pe_jt, pe_weak = estimate_pe(cfg, trials_per_point)
        points.append((float(n), exponent(pe_jt, n, m), exponent(pe_weak, n, m)))
    snapshot = {
        "base": base,
        "blocklengths": list(blocklengths),
        "trials_per_point": trials_per_point,
        "m_mode": m_mode,
        "rate_bits": rate_bits,
    }
    return SweepResult(label="blocklength-sweep", points=tuple(points), config=snapshot)


def sweep_source_prob(
    base: TrialConfig,
    q_values: list[float],
    blocklengths: list[int],
    trials_per_point: int,
) -> SweepResult:
    """Best exponent of each decoder over the blocklength grid, per codeword bias.

    Each returned point carries the decoders' individually best
    ExponentPoints (their argmax blocklengths may differ).
    """
    if not q_values:
        raise ValueError("q_values must be nonempty")
    if any(not 0.0 < q < 1.0 for q in q_values):
        raise ValueError("every q must lie in (0, 1)")
    if any(b <= a for a, b in zip(q_values, q_values[1:])):
        raise ValueError("q_values must be strictly increasing")
    if not blocklengths:
        raise ValueError("blocklengths must be nonempty")

    points = []
    for q in q_values:
        best_jt: ExponentPoint | None = None
        best_weak: ExponentPoint | None = None
        for n in blocklengths:
            cfg = replace(base, q=q, n=n)
            pe_jt, pe_weak = estimate_pe(cfg, trials_per_point)
            ep_jt = exponent(pe_jt, n, cfg.m)
            ep_weak = exponent(pe_weak, n, cfg.m)
            if best_jt is None or ep_jt.exponent > best_jt.exponent:
                best_jt = ep_jt
            if best_weak is None or ep_weak.exponent > best_weak.exponent:
                best_weak = ep_weak
        points.append((float(q), best_jt, best_weak))
    snapshot = {
        "base": base,
        "q_values": list(q_values),
        "blocklengths": list(blocklengths),
        "trials_per_point": trials_per_point,
    }
    return SweepResult(label="bias-sweep", points=tuple(points), config=snapshot)
