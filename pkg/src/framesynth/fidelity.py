"""Statistical fidelity metrics for real-versus-synthetic dataset pairs.

Three layers of comparison: global similarity (per-pair cosine and Euclidean
summaries over seeded row samples, on raw feature vectors), local fidelity
(exact two-sample KS distance per feature, ranked), and structural overlap
(PCA projection of both datasets into one shared subspace fit on their
z-scored concatenation).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .sampling import Prng, sample_indices
from .schema import Dataset, FEATURE_FIELDS, FEATURE_HEADERS, FrameRecord

FEATURE_COUNT = len(FEATURE_FIELDS)


def feature_vector(r: FrameRecord) -> np.ndarray:
    """The record's 16 features (label excluded) in schema order."""
    return np.array([float(getattr(r, f)) for f in FEATURE_FIELDS])


def feature_matrix(ds: Dataset) -> np.ndarray:
    """n x 16 float matrix of all rows in dataset order."""
    return np.array(
        [[float(getattr(r, f)) for f in FEATURE_FIELDS] for r in ds.rows], dtype=float
    ).reshape(len(ds.rows), FEATURE_COUNT)


def cosine_similarity(a: Sequence[float], b: Sequence[float]) -> float:
    """Directional alignment: dot(a, b) / (|a| |b|)."""
    va, vb = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if va.shape != vb.shape:
        raise ValueError(f"dimension mismatch: {va.shape} vs {vb.shape}")
    na, nb = float(np.linalg.norm(va)), float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine similarity undefined for a zero-norm vector")
    return float(np.dot(va, vb) / (na * nb))


def euclidean_distance(a: Sequence[float], b: Sequence[float]) -> float:
    """Geometric separation: sqrt(sum((a_i - b_i)^2))."""
    va, vb = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if va.shape != vb.shape:
        raise ValueError(f"dimension mismatch: {va.shape} vs {vb.shape}")
    return float(np.linalg.norm(va - vb))


@dataclass(frozen=True)
class SimilaritySummary:
    metric: str
    mean: float
    median: float
    std: float
    pair_count: int

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "mean": self.mean,
            "median": self.median,
            "std": self.std,
            "pair_count": self.pair_count,
        }


def _summary(metric: str, values: np.ndarray) -> SimilaritySummary:
    if values.size == 0:
        raise ValueError(f"no pairs available for {metric} summary")
    # Population std: defined for a single pair, matching the one-pair case.
    return SimilaritySummary(
        metric=metric,
        mean=float(np.mean(values)),
        median=float(np.median(values)),
        std=float(np.std(values)),
        pair_count=int(values.size),
    )


def pairwise_similarity_summary(
    real: Dataset, synthetic: Dataset, sample_size: int, seed: int
) -> tuple[SimilaritySummary, SimilaritySummary, int]:
    """Per-pair Euclidean and cosine summaries over seeded row samples.

    Both sides sample row indices with child streams derived from the same
    tag, so comparing a dataset against itself with one seed pairs every row
    with itself. Pairs are formed index-wise over the shuffled samples; raw
    (unstandardized) feature vectors are compared. Zero-norm rows are skipped
    for cosine only; the skip count is returned as a diagnostic.
    """
    if len(real.rows) == 0 or len(synthetic.rows) == 0:
        raise ValueError("both datasets must be non-empty")
    if sample_size < 1:
        raise ValueError("sample_size must be at least 1")
    if sample_size > len(real.rows) or sample_size > len(synthetic.rows):
        raise ValueError(
            f"sample_size {sample_size} exceeds a dataset's row count "
            f"({len(real.rows)} real, {len(synthetic.rows)} synthetic)"
        )
    master = Prng(seed)
    idx_a = sample_indices(len(real.rows), sample_size, master.derive("pairs/sample"))
    idx_b = sample_indices(len(synthetic.rows), sample_size, master.derive("pairs/sample"))
    xa = feature_matrix(Dataset(rows=[real.rows[i] for i in idx_a]))
    xb = feature_matrix(Dataset(rows=[synthetic.rows[i] for i in idx_b]))

    diffs = np.linalg.norm(xa - xb, axis=1)
    norms_a = np.linalg.norm(xa, axis=1)
    norms_b = np.linalg.norm(xb, axis=1)
    usable = (norms_a > 0) & (norms_b > 0)
    skipped = int(sample_size - int(np.count_nonzero(usable)))
    if not np.any(usable):
        raise ValueError("every sampled pair has a zero-norm vector; cosine undefined")
    cosines = np.sum(xa[usable] * xb[usable], axis=1) / (norms_a[usable] * norms_b[usable])

    return _summary("euclidean_distance", diffs), _summary("cosine_similarity", cosines), skipped


def ks_statistic(a: Sequence[float], b: Sequence[float]) -> float:
    """Exact two-sample KS distance: sup over merged points of |F1 - F2|."""
    xs = np.sort(np.asarray(a, dtype=float))
    ys = np.sort(np.asarray(b, dtype=float))
    if xs.size == 0 or ys.size == 0:
        raise ValueError("ks_statistic requires non-empty samples")
    merged = np.concatenate([xs, ys])
    f1 = np.searchsorted(xs, merged, side="right") / xs.size
    f2 = np.searchsorted(ys, merged, side="right") / ys.size
    return float(np.max(np.abs(f1 - f2)))


def ks_per_feature(real: Dataset, synthetic: Dataset, k: int) -> list[tuple[str, float]]:
    """KS distance per feature column, sorted descending, truncated to k.

    Ties break by schema column order.
    """
    xa = feature_matrix(real)
    xb = feature_matrix(synthetic)
    scored = [
        (FEATURE_HEADERS[j], ks_statistic(xa[:, j], xb[:, j])) for j in range(FEATURE_COUNT)
    ]
    ranked = sorted(enumerate(scored), key=lambda item: (-item[1][1], item[0]))
    return [entry for _, entry in ranked[: max(k, 0)]]


@dataclass(frozen=True)
class Standardization:
    mean: np.ndarray
    scale: np.ndarray
    kept_columns: tuple[int, ...]
    dropped_columns: tuple[int, ...]


def standardize_columns(x: np.ndarray) -> tuple[np.ndarray, Standardization]:
    """Z-score columns; zero-variance columns are dropped and recorded."""
    mean = x.mean(axis=0)
    scale = x.std(axis=0)
    kept = tuple(int(j) for j in range(x.shape[1]) if scale[j] > 0)
    dropped = tuple(int(j) for j in range(x.shape[1]) if scale[j] == 0)
    z = (x[:, kept] - mean[list(kept)]) / scale[list(kept)]
    return z, Standardization(mean=mean, scale=scale, kept_columns=kept, dropped_columns=dropped)


@dataclass
class PcaModel:
    """Orthogonal projection onto the top-k variance directions.

    ``components`` is p x k with orthonormal columns; eigenvalues are
    nonincreasing. Sign convention: the largest-magnitude entry of each
    component is positive.
    """

    mean: np.ndarray
    scale: np.ndarray
    components: np.ndarray
    explained_variance: np.ndarray
    feature_names: tuple[str, ...] = ()
    dropped_features: tuple[str, ...] = ()

    def transform(self, x: np.ndarray) -> np.ndarray:
        return ((x - self.mean) / self.scale) @ self.components


def pca_fit(x: np.ndarray, k: int) -> PcaModel:
    """Top-k eigenvectors of the sample covariance of x.

    The matrix is centered internally; callers wanting z-scored analysis
    standardize first. Full symmetric eigendecomposition is used (the
    feature space is small).
    """
    x = np.asarray(x, dtype=float)
    n, p = x.shape
    if k > p:
        raise ValueError(f"k={k} exceeds feature count {p}")
    if n <= k:
        raise ValueError(f"need more than k={k} rows, got {n}")
    mean = x.mean(axis=0)
    centered = x - mean
    cov = centered.T @ centered / (n - 1)
    eigenvalues, eigenvectors = np.linalg.eigh(cov)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = eigenvalues[order][:k]
    w = eigenvectors[:, order][:, :k]
    for j in range(k):
        pivot = int(np.argmax(np.abs(w[:, j])))
        if w[pivot, j] < 0:
            w[:, j] = -w[:, j]
    return PcaModel(
        mean=mean,
        scale=np.ones(p),
        components=w,
        explained_variance=eigenvalues,
    )


@dataclass(frozen=True)
class ProjectedPoint:
    source: str
    label: int
    coords: tuple[float, ...]


@dataclass
class ProjectionResult:
    points: list[ProjectedPoint]
    model: PcaModel

    def to_csv_text(self) -> str:
        k = self.model.components.shape[1]
        header = "source,label," + ",".join(f"z{i + 1}" for i in range(k))
        lines = [header]
        for p in self.points:
            coords = ",".join(repr(c) for c in p.coords)
            lines.append(f"{p.source},{p.label},{coords}")
        return "\n".join(lines) + "\n"


def pca_shared_projection(
    real: Dataset, synthetic: Dataset, k: int = 2, sample_size: int = 5000, seed: int = 0
) -> ProjectionResult:
    """Project seeded equal-size samples of both datasets into one subspace.

    Standardization and the projection are fit on the concatenated samples,
    so both clouds live in the same coordinates; each output point carries
    its source tag and class label.
    """
    if len(real.rows) == 0 or len(synthetic.rows) == 0:
        raise ValueError("both datasets must be non-empty")
    if k < 1:
        raise ValueError("component count must be at least 1")
    if sample_size < 1 or sample_size > len(real.rows) or sample_size > len(synthetic.rows):
        raise ValueError("sample_size must be in [1, rows] for both datasets")
    master = Prng(seed)
    idx_a = sample_indices(len(real.rows), sample_size, master.derive("pca/sample"))
    idx_b = sample_indices(len(synthetic.rows), sample_size, master.derive("pca/sample"))
    rows_a = [real.rows[i] for i in idx_a]
    rows_b = [synthetic.rows[i] for i in idx_b]
    stacked = feature_matrix(Dataset(rows=rows_a + rows_b))

    z, std = standardize_columns(stacked)
    retained = len(std.kept_columns)
    if k > retained:
        raise ValueError(f"k={k} exceeds the {retained} retained (non-constant) features")
    model = pca_fit(z, k)
    model.mean = std.mean[list(std.kept_columns)]
    model.scale = std.scale[list(std.kept_columns)]
    model.feature_names = tuple(FEATURE_HEADERS[j] for j in std.kept_columns)
    model.dropped_features = tuple(FEATURE_HEADERS[j] for j in std.dropped_columns)

    scores = model.transform(stacked[:, list(std.kept_columns)])
    points = []
    for offset, (source, rows) in enumerate((("real", rows_a), ("synthetic", rows_b))):
        base = offset * sample_size
        for i, r in enumerate(rows):
            points.append(
                ProjectedPoint(source=source, label=r.label, coords=tuple(float(v) for v in scores[base + i]))
            )
    return ProjectionResult(points=points, model=model)


@dataclass
class FidelityReport:
    """Global similarity summaries plus per-feature KS ranking for one pair."""

    euclidean: SimilaritySummary
    cosine: SimilaritySummary
    ks_by_feature: dict[str, float]
    top_k_ks: list[tuple[str, float]]
    metadata: dict = field(default_factory=dict)
    pca_projection: Optional[ProjectionResult] = None

    def to_json(self) -> str:
        doc = {
            "metadata": self.metadata,
            "euclidean": self.euclidean.to_dict(),
            "cosine": self.cosine.to_dict(),
            "ks_by_feature": self.ks_by_feature,
            "top_k_ks": [{"feature": f, "ks": d} for f, d in self.top_k_ks],
        }
        return json.dumps(doc, indent=2) + "\n"

    def format_text(self) -> str:
        lines = [
            "Global similarity (per-pair, raw features)",
            f"{'metric':<22}{'mean':>14}{'median':>14}{'std':>14}{'pairs':>10}",
        ]
        for s in (self.euclidean, self.cosine):
            lines.append(
                f"{s.metric:<22}{s.mean:>14.5f}{s.median:>14.5f}{s.std:>14.5f}{s.pair_count:>10d}"
            )
        lines.append("")
        lines.append(f"Top-{len(self.top_k_ks)} per-feature KS distances (lower is better)")
        lines.append(f"{'rank':<6}{'feature':<32}{'KS':>10}")
        for rank, (name, d) in enumerate(self.top_k_ks, start=1):
            lines.append(f"{rank:<6}{name:<32}{d:>10.5f}")
        return "\n".join(lines) + "\n"


def build_fidelity_report(
    real: Dataset, synthetic: Dataset, sample_size: int, seed: int, top_k: int = 3
) -> FidelityReport:
    """Compare two decoded datasets and assemble the full report."""
    euclid, cosine, skipped = pairwise_similarity_summary(real, synthetic, sample_size, seed)
    ranked_all = ks_per_feature(real, synthetic, FEATURE_COUNT)
    ks_map = {name: d for name, d in sorted(ranked_all, key=lambda e: FEATURE_HEADERS.index(e[0]))}
    return FidelityReport(
        euclidean=euclid,
        cosine=cosine,
        ks_by_feature=ks_map,
        top_k_ks=ranked_all[:top_k],
        metadata={
            "real_rows": len(real.rows),
            "synthetic_rows": len(synthetic.rows),
            "sample_size": sample_size,
            "seed": seed,
            "pairing": "seeded-equal-size-random-pairs",
            "similarity_preprocessing": "raw",
            "zero_norm_cosine_pairs_skipped": skipped,
        },
    )
