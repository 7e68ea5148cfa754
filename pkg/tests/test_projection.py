from __future__ import annotations

import math
import random

import numpy as np
import pytest

from actorlens.metrics import METRIC_COMPONENTS, MetricVector
from actorlens.projection import (
    Embedding,
    ProjectionConfig,
    TooFewPoints,
    classical_mds,
    distance,
    distance_matrix,
    embed,
    normalize,
)


def _vector(match_id: str, player_id: str, values: list[float]) -> MetricVector:
    assert len(values) == len(METRIC_COMPONENTS)
    return MetricVector(
        match_id=match_id,
        player_id=player_id,
        counts=tuple(int(v) for v in values[:-2]),
        inactive_percentage=float(values[-2]),
        report_count=float(values[-1]),
    )


def _random_vectors(n: int, seed: int) -> list[MetricVector]:
    rng = random.Random(seed)
    out = []
    for i in range(n):
        counts = [rng.randrange(0, 20) for _ in range(len(METRIC_COMPONENTS) - 2)]
        out.append(
            _vector(f"m{i:04d}", f"P{rng.randrange(10):03d}", [*counts, rng.random(), rng.randrange(6)])
        )
    return out


def _min_separation(emb: Embedding) -> float:
    best = math.inf
    pts = emb.coords
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = math.dist(pts[i], pts[j])
            best = min(best, d)
    return best


def test_normalize_bounds_and_constant_column():
    vecs = [
        _vector("m0", "P0", [0, 2, 4, 0, 0, 0, 0, 0, 8, 0.0, 3]),
        _vector("m1", "P1", [10, 2, 0, 0, 0, 0, 0, 0, 4, 1.0, 3]),
    ]
    scaled, record = normalize(vecs)
    assert scaled[0][0] == 0.0 and scaled[1][0] == 1.0
    # constant columns scale to zero, including the report_count tail
    assert scaled[0][1] == scaled[1][1] == 0.0
    assert scaled[0][-1] == scaled[1][-1] == 0.0
    assert record.as_dict()["turret_destruction"] == (0.0, 10.0)
    assert record.as_dict()["report_count"] == (3.0, 3.0)
    assert list(record.as_dict()) == list(METRIC_COMPONENTS)
    for row in scaled:
        assert all(0.0 <= v <= 1.0 for v in row)


def test_normalize_rejects_empty():
    with pytest.raises(ValueError):
        normalize([])


def test_distance_is_squared_euclidean():
    assert distance([0.0, 0.0], [3.0, 4.0]) == 25.0
    assert distance([1.0], [1.0]) == 0.0
    with pytest.raises(ValueError):
        distance([1.0], [1.0, 2.0])


def test_distance_matrix_agrees_with_scalar():
    rows = [[0.0, 0.0], [1.0, 1.0], [0.5, 0.25]]
    mat = distance_matrix(rows)
    for i in range(3):
        for j in range(3):
            assert mat[i, j] == pytest.approx(distance(rows[i], rows[j]))


def test_classical_mds_recovers_structure():
    # two tight clusters far apart in feature space
    rows = [[0.0, 0.0], [0.05, 0.0], [0.0, 0.05], [1.0, 1.0], [0.95, 1.0], [1.0, 0.95]]
    cfg = ProjectionConfig()
    coords = classical_mds(distance_matrix(rows), cfg)
    assert coords.shape == (6, 2)
    a = coords[:3].mean(axis=0)
    b = coords[3:].mean(axis=0)
    within = max(
        np.linalg.norm(coords[i] - coords[j])
        for group in (range(3), range(3, 6))
        for i in group
        for j in group
    )
    assert np.linalg.norm(a - b) > 4 * within
    again = classical_mds(distance_matrix(rows), cfg)
    assert np.array_equal(coords, again)


def test_embed_requires_two_points():
    with pytest.raises(TooFewPoints):
        embed(_random_vectors(1, seed=0))
    with pytest.raises(TooFewPoints):
        embed([])


def test_embed_orders_members_and_shapes():
    vecs = list(reversed(_random_vectors(9, seed=1)))
    emb = embed(vecs)
    assert emb.members == tuple(sorted((v.match_id, v.player_id) for v in vecs))
    assert len(emb.coords) == 9
    assert all(math.isfinite(x) and math.isfinite(y) for x, y in emb.coords)
    assert len(emb.normalization.bounds) == len(METRIC_COMPONENTS)


@pytest.mark.parametrize("seed", [0, 7, 42])
def test_embed_enforces_glyph_separation(seed):
    cfg = ProjectionConfig(glyph_separation=0.8)
    emb = embed(_random_vectors(40, seed=seed), cfg)
    assert _min_separation(emb) >= cfg.glyph_separation - 1e-9


def test_embed_separates_exact_duplicates():
    base = _vector("m0", "P0", [1, 2, 3, 4, 5, 6, 7, 8, 9, 0.5, 2])
    dupes = [
        MetricVector(f"m{i}", "P0", base.counts, base.inactive_percentage, base.report_count)
        for i in range(12)
    ]
    emb = embed(dupes, ProjectionConfig(glyph_separation=0.5))
    assert _min_separation(emb) >= 0.5 - 1e-9


def test_embed_deterministic():
    vecs = _random_vectors(25, seed=3)
    a = embed(vecs, ProjectionConfig(seed=11))
    b = embed(vecs, ProjectionConfig(seed=11))
    assert a == b


def test_embed_custom_embedder_and_validation():
    vecs = _random_vectors(5, seed=4)

    def ring(dist_sq, cfg):
        n = dist_sq.shape[0]
        return np.asarray(
            [
                [math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n)]
                for k in range(n)
            ]
        )

    emb = embed(vecs, embedder=ring)
    assert len(emb.coords) == 5

    def bad_shape(dist_sq, cfg):
        return np.zeros((dist_sq.shape[0], 3))

    with pytest.raises(ValueError):
        embed(vecs, embedder=bad_shape)

    def non_finite(dist_sq, cfg):
        out = np.zeros((dist_sq.shape[0], 2))
        out[0, 0] = math.nan
        return out

    with pytest.raises(ValueError):
        embed(vecs, embedder=non_finite)


def test_projection_config_validation():
    with pytest.raises(ValueError):
        ProjectionConfig(n_neighbors=1)
    with pytest.raises(ValueError):
        ProjectionConfig(glyph_separation=0.0)
    assert ProjectionConfig(seed=5).seed == 5
