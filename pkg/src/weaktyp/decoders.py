"""Classical and weak joint-typicality decoding with candidate resolvers.

The classical decoder treats anything but a unique typical codeword as
an error.  The weak decoder keeps every typical candidate and, when
there are several, resolves them from the geometry of their difference
sequences: cluster the Z-sequences, take the largest cluster, and
decode to the Z closest to its mean.  A max-margin variant refines the
2-means split with a Pegasos-trained linear separator.

All ties break toward the lowest message index (and, inside k-means,
toward the lowest cluster id), which makes every resolution
deterministic given its random stream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Codebook, hamming_diff
from .rng import RngStream
from .typicality import JointContext, pair_counts, typical_from_counts

RESOLVERS = ("cluster", "cluster-random", "svm")

KMEANS_MAX_ITERS = 100
SVM_LAMBDA = 0.01
SVM_EPOCHS = 200


@dataclass(frozen=True)
class CandidateSet:
    """Messages whose codeword is jointly typical with the received word.

    ``indices`` are 1-based and strictly increasing; ``z_seqs`` holds the
    matching difference sequences row by row.
    """

    indices: np.ndarray  # (count,) int64
    z_seqs: np.ndarray  # (count, n) uint8

    def __post_init__(self) -> None:
        idx = np.asarray(self.indices, dtype=np.int64)
        z = np.asarray(self.z_seqs, dtype=np.uint8)
        if idx.ndim != 1 or z.ndim != 2 or z.shape[0] != idx.size:
            raise ValueError("indices and z_seqs must be parallel")
        if idx.size and (np.any(np.diff(idx) <= 0) or idx[0] < 1):
            raise ValueError("indices must be strictly increasing and 1-based")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "z_seqs", z)

    @property
    def count(self) -> int:
        return int(self.indices.size)


@dataclass(frozen=True)
class DecodeOutcome:
    """Decoder verdict: a message index, or 0 when a dummy is emitted."""

    decoded: int
    candidate_count: int
    path: str  # none | unique | cluster | svm

    def __post_init__(self) -> None:
        if self.path not in ("none", "unique", "cluster", "svm"):
            raise ValueError(f"unknown decode path {self.path!r}")
        if (self.decoded == 0) != (self.path == "none"):
            raise ValueError("dummy output and path 'none' must coincide")
        if self.path == "unique" and self.candidate_count != 1:
            raise ValueError("path 'unique' requires exactly one candidate")
        if self.candidate_count == 0 and self.decoded != 0:
            raise ValueError("no candidates must decode to the dummy index")

    @property
    def is_dummy(self) -> bool:
        return self.decoded == 0


@dataclass(frozen=True)
class Clustering:
    """Result of Lloyd iterations: assignments, centroids, and the objective trace.

    ``objective_trace[i]`` is the total within-cluster squared distance
    right after the (i+1)-th assignment pass; Lloyd's argument makes it
    non-increasing.
    """

    assignments: np.ndarray
    centroids: np.ndarray
    k: int
    iterations_used: int
    objective_trace: np.ndarray


def find_candidates(y: np.ndarray, cb: Codebook, ctx: JointContext, eps: float) -> CandidateSet:
    """Scan messages 1..m in order and keep those jointly typical with y."""
    if y.shape != (cb.n,):
        raise ValueError("received word length must match the codebook blocklength")
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    keep = []
    for i in range(cb.m):
        counts = pair_counts(cb.words[i], y)
        if typical_from_counts(*counts, ctx, eps):
            keep.append(i)
    if keep:
        z = np.vstack([hamming_diff(cb.words[i], y) for i in keep])
    else:
        z = np.empty((0, cb.n), dtype=np.uint8)
    return CandidateSet(indices=np.asarray(keep, dtype=np.int64) + 1, z_seqs=z)


def jt_decode(y: np.ndarray, cb: Codebook, ctx: JointContext, eps: float) -> DecodeOutcome:
    """Classical rule: decode only a unique candidate, otherwise declare an error."""
    cands = find_candidates(y, cb, ctx, eps)
    if cands.count == 1:
        return DecodeOutcome(int(cands.indices[0]), 1, "unique")
    return DecodeOutcome(0, cands.count, "none")


def weak_decode(
    y: np.ndarray,
    cb: Codebook,
    ctx: JointContext,
    eps: float,
    resolver: str,
    rng: RngStream,
    k_max: int = 3,
) -> DecodeOutcome:
    """Weak rule: keep all candidates and resolve multiplicity instead of failing."""
    if resolver not in RESOLVERS:
        raise ValueError(f"unknown resolver {resolver!r}")
    cands = find_candidates(y, cb, ctx, eps)
    if cands.count == 0:
        return DecodeOutcome(0, 0, "none")
    if cands.count == 1:
        return DecodeOutcome(int(cands.indices[0]), 1, "unique")
    if resolver == "svm":
        return DecodeOutcome(svm_resolve(cands, rng), cands.count, "svm")
    pick = "random" if resolver == "cluster-random" else "closest"
    return DecodeOutcome(cluster_resolve(cands, k_max, rng, pick=pick), cands.count, "cluster")


def kmeans(points, k: int, rng: RngStream, max_iters: int = KMEANS_MAX_ITERS) -> Clustering:
    """Lloyd's algorithm with k-means++ style seeding.

    Point-to-centroid ties go to the lowest cluster id; a cluster that
    empties is reseeded with the point farthest from its centroid.  When
    the squared distances driving a seeding step are all zero (duplicate
    points), the lowest-index unchosen point is taken, keeping the whole
    procedure deterministic for a given stream.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("points must be a nonempty 2-D array")
    num = pts.shape[0]
    if not 1 <= k <= num:
        raise ValueError(f"k must be in 1..{num}, got {k}")
    if max_iters < 1:
        raise ValueError("max_iters must be positive")

    centroids = np.empty((k, pts.shape[1]))
    first = min(int(rng.uniform() * num), num - 1)
    centroids[0] = pts[first]
    chosen = {first}
    d2 = ((pts - centroids[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = float(d2.sum())
        if total > 0.0:
            r = rng.uniform() * total
            pick = int(np.searchsorted(np.cumsum(d2), r, side="right"))
            pick = min(pick, num - 1)
        else:
            pick = min(i for i in range(num) if i not in chosen)
        centroids[j] = pts[pick]
        chosen.add(pick)
        d2 = np.minimum(d2, ((pts - centroids[j]) ** 2).sum(axis=1))

    assign = np.full(num, -1, dtype=np.int64)
    trace = []
    iterations = max_iters
    for it in range(1, max_iters + 1):
        dist2 = ((pts[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_assign = np.argmin(dist2, axis=1)  # argmin takes the lowest id on ties
        trace.append(float(dist2[np.arange(num), new_assign].sum()))
        if np.array_equal(new_assign, assign):
            iterations = it
            break
        assign = new_assign
        for c in range(k):
            members = assign == c
            if members.any():
                centroids[c] = pts[members].mean(axis=0)
            else:
                far = int(np.argmax(((pts - centroids[c]) ** 2).sum(axis=1)))
                centroids[c] = pts[far]
    return Clustering(
        assignments=assign,
        centroids=centroids,
        k=k,
        iterations_used=iterations,
        objective_trace=np.asarray(trace),
    )


def _all_rows_equal(z: np.ndarray) -> bool:
    return bool(np.all(z == z[0]))


def _rows_distinct(z: np.ndarray) -> bool:
    return len({row.tobytes() for row in np.ascontiguousarray(z)}) == z.shape[0]


def _largest_cluster(assignments: np.ndarray, k: int) -> int:
    """Largest cluster id; ties go to the cluster holding the lowest point index."""
    sizes = np.bincount(assignments, minlength=k)
    best = int(sizes.max())
    for pos in range(assignments.size):
        if sizes[assignments[pos]] == best:
            return int(assignments[pos])
    raise AssertionError("unreachable: some cluster is nonempty")


def _resolve_by_clusters(
    cands: CandidateSet, k_max: int, rng: RngStream, pick: str
) -> tuple[int, Clustering | None]:
    if cands.count < 2:
        raise ValueError("resolution needs at least two candidates")
    if k_max < 1:
        raise ValueError("k_max must be positive")
    z = cands.z_seqs.astype(np.float64)
    indices = cands.indices
    if _all_rows_equal(cands.z_seqs):
        # nothing separates the candidates; lowest index wins
        return int(indices[0]), None
    k = min(k_max, cands.count)
    if pick == "closest" and _rows_distinct(cands.z_seqs) and (cands.count == 2 or k == cands.count):
        # Distinct points with k saturating the set (or a bare pair) always
        # collapse to singleton clusters, whose tie-break chain provably
        # lands on the lowest index; skip the Lloyd run.
        return int(indices[0]), None
    clus = kmeans(z, k, rng)
    winner = _largest_cluster(clus.assignments, k)
    members = clus.assignments == winner
    m = z[members].mean(axis=0)
    if pick == "random":
        positions = np.flatnonzero(members)
        r = rng.uniform()
        pos = positions[min(int(r * positions.size), positions.size - 1)]
        return int(indices[pos]), clus
    d2 = ((z - m) ** 2).sum(axis=1)
    # ties toward the lowest message index: indices ascend, argmin is first
    return int(indices[int(np.argmin(d2))]), clus


def cluster_resolve(cands: CandidateSet, k_max: int, rng: RngStream, pick: str = "closest") -> int:
    """Largest-cluster-mean resolution over the candidate Z-sequences.

    ``pick`` selects the final step: "closest" decodes to the Z nearest
    the largest cluster's mean, "random" to a uniform member of that
    cluster.
    """
    if pick not in ("closest", "random"):
        raise ValueError(f"unknown pick rule {pick!r}")
    decoded, _ = _resolve_by_clusters(cands, k_max, rng, pick)
    return decoded


def resolve_details(
    cands: CandidateSet, k_max: int, rng: RngStream, pick: str = "closest"
) -> tuple[int, Clustering | None]:
    """Like :func:`cluster_resolve` but also returns the clustering, when one ran."""
    return _resolve_by_clusters(cands, k_max, rng, pick)


def svm_resolve(
    cands: CandidateSet,
    rng: RngStream,
    lam: float = SVM_LAMBDA,
    epochs: int = SVM_EPOCHS,
) -> int:
    """Max-margin resolution: 2-means labels refined by a Pegasos separator.

    The candidate Z-sequences get provisional +/-1 labels from a k=2
    clustering, a soft-margin linear separator (bias folded in as a
    constant feature) is trained by cyclic subgradient passes, points
    are re-labelled by the separator, and the larger side wins; the
    winning-side candidate with the largest decision margin is decoded.
    """
    if cands.count < 2:
        raise ValueError("resolution needs at least two candidates")
    z = cands.z_seqs.astype(np.float64)
    indices = cands.indices
    if _all_rows_equal(cands.z_seqs):
        return int(indices[0])

    clus = kmeans(z, 2, rng)
    labels = np.where(clus.assignments == 0, 1.0, -1.0)
    feats = np.hstack([z, np.ones((cands.count, 1))])
    w = np.zeros(feats.shape[1])
    t = 0
    for _ in range(epochs):
        for i in range(cands.count):
            t += 1
            eta = 1.0 / (lam * t)
            margin = labels[i] * float(feats[i] @ w)
            w *= 1.0 - eta * lam
            if margin < 1.0:
                w += (eta * labels[i]) * feats[i]

    scores = feats @ w
    pos = scores >= 0.0
    n_pos = int(pos.sum())
    n_neg = cands.count - n_pos
    if n_pos > n_neg:
        side = pos
    elif n_neg > n_pos:
        side = ~pos
    else:
        # exact split: take the side holding the lowest message index
        side = pos if pos[0] else ~pos
    side_scores = np.where(side, np.where(pos, scores, -scores), -np.inf)
    return int(indices[int(np.argmax(side_scores))])
