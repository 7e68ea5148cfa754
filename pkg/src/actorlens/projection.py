"""2D layout of player-match metric vectors.

Metrics are min-max normalized over the input set, compared by summed
squared differences, embedded into the plane, then pushed apart so no two
glyphs sit closer than the configured separation. The embedding method is
pluggable; the default is classical multidimensional scaling, which consumes
the squared-difference distances directly and is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .metrics import METRIC_COMPONENTS, MetricVector

# embedder contract: (matrix of pairwise squared-difference distances, cfg) -> (n, 2) array
Embedder = Callable[[np.ndarray, "ProjectionConfig"], np.ndarray]

_GOLDEN_ANGLE = math.pi * (3 - math.sqrt(5))


class TooFewPoints(ValueError):
    """Embedding needs at least two vectors."""


@dataclass(frozen=True, slots=True)
class ProjectionConfig:
    seed: int = 0
    n_neighbors: int = 15
    glyph_separation: float = 1.0
    max_displacement_iterations: int = 200

    def __post_init__(self) -> None:
        if self.n_neighbors < 2:
            raise ValueError("n_neighbors must be at least 2")
        if self.glyph_separation <= 0:
            raise ValueError("glyph_separation must be positive")


@dataclass(frozen=True, slots=True)
class NormalizationRecord:
    """Per-metric (min, max) pairs used for scaling, in METRIC_COMPONENTS order."""

    bounds: tuple[tuple[float, float], ...]

    def as_dict(self) -> dict[str, tuple[float, float]]:
        return dict(zip(METRIC_COMPONENTS, self.bounds))


@dataclass(frozen=True, slots=True)
class Embedding:
    members: tuple[tuple[str, str], ...]
    coords: tuple[tuple[float, float], ...]
    normalization: NormalizationRecord


def normalize(
    vectors: Sequence[MetricVector],
) -> tuple[list[tuple[float, ...]], NormalizationRecord]:
    """Min-max scale each metric over the input set; constant metrics map to 0."""
    if not vectors:
        raise ValueError("normalize needs at least one vector")
    rows = [v.as_tuple() for v in vectors]
    dims = len(rows[0])
    bounds: list[tuple[float, float]] = []
    for d in range(dims):
        column = [row[d] for row in rows]
        bounds.append((min(column), max(column)))
    scaled = [
        tuple(
            (row[d] - lo) / (hi - lo) if hi > lo else 0.0
            for d, (lo, hi) in enumerate(bounds)
        )
        for row in rows
    ]
    return scaled, NormalizationRecord(bounds=tuple(bounds))


def distance(u: Sequence[float], v: Sequence[float]) -> float:
    """Sum of squared component differences."""
    if len(u) != len(v):
        raise ValueError("vectors must have equal length")
    return sum((a - b) ** 2 for a, b in zip(u, v))


def distance_matrix(rows: Sequence[Sequence[float]]) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    diff = arr[:, None, :] - arr[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def classical_mds(dist_sq: np.ndarray, cfg: ProjectionConfig) -> np.ndarray:
    """Deterministic 2D embedding from squared distances (seed unused)."""
    n = dist_sq.shape[0]
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * j @ dist_sq @ j
    eigvals, eigvecs = np.linalg.eigh(b)
    order = np.argsort(eigvals)[::-1][:2]
    coords = np.zeros((n, 2))
    for axis, idx in enumerate(order):
        val = max(eigvals[idx], 0.0)
        vec = eigvecs[:, idx]
        # canonical sign: the largest-magnitude component points positive
        pivot = int(np.argmax(np.abs(vec)))
        if vec[pivot] < 0:
            vec = -vec
        coords[:, axis] = vec * math.sqrt(val)
    return coords


def _spread_to_canvas(coords: np.ndarray, cfg: ProjectionConfig) -> np.ndarray:
    """Scale so the layout has room for all glyphs at the required separation."""
    n = coords.shape[0]
    span = float(np.max(np.ptp(coords, axis=0))) if n else 0.0
    target = 4.0 * math.sqrt(n) * cfg.glyph_separation
    if span <= 0:
        return np.zeros_like(coords)
    return coords * (target / span)


def _avoid_collisions(coords: np.ndarray, cfg: ProjectionConfig) -> np.ndarray:
    """Greedy pass in row order: crowded points walk an outward spiral."""
    sep = cfg.glyph_separation
    sep_sq = sep * sep
    placed: list[tuple[float, float]] = []
    out = np.empty_like(coords)
    for i in range(coords.shape[0]):
        ox, oy = float(coords[i, 0]), float(coords[i, 1])
        x, y = ox, oy
        step = 0
        while any((x - px) ** 2 + (y - py) ** 2 < sep_sq for px, py in placed):
            step += 1
            radius = 0.25 * sep * step
            if step > cfg.max_displacement_iterations:
                # widen quickly once the polite radius schedule is exhausted
                radius = sep * step
            angle = step * _GOLDEN_ANGLE
            x = ox + radius * math.cos(angle)
            y = oy + radius * math.sin(angle)
        placed.append((x, y))
        out[i, 0] = x
        out[i, 1] = y
    return out


def embed(
    vectors: Sequence[MetricVector],
    cfg: ProjectionConfig = ProjectionConfig(),
    embedder: Embedder | None = None,
) -> Embedding:
    """Layout for the given vectors, stable-ordered by (match_id, player_id)."""
    if len(vectors) < 2:
        raise TooFewPoints(f"embedding needs at least 2 vectors, got {len(vectors)}")
    ordered = sorted(vectors, key=lambda v: (v.match_id, v.player_id))
    scaled, record = normalize(ordered)
    dist_sq = distance_matrix(scaled)
    method = embedder or classical_mds
    coords = np.asarray(method(dist_sq, cfg), dtype=float)
    if coords.shape != (len(ordered), 2):
        raise ValueError(f"embedder returned shape {coords.shape}, expected (n, 2)")
    if not np.all(np.isfinite(coords)):
        raise ValueError("embedder returned non-finite coordinates")
    coords = _spread_to_canvas(coords, cfg)
    coords = _avoid_collisions(coords, cfg)
    return Embedding(
        members=tuple((v.match_id, v.player_id) for v in ordered),
        coords=tuple((float(x), float(y)) for x, y in coords),
        normalization=record,
    )
