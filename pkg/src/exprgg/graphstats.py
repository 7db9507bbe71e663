"""Degree statistics of the radius-y graph on a point cloud, plus the
normalized ratios and edge-density gap that the strong-law bounds speak about.
"""

from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np

from .model import DegreeSummary, PointCloud, RggConfig
from .spatial import GridIndex, build_grid_index, iter_candidate_pairs
from .theory import pair_connect_prob


def degree_summary(
    cloud: PointCloud, y: float, index: Optional[GridIndex] = None
) -> DegreeSummary:
    """Degrees, edge count and degree extremes of the graph G_n(y) on ``cloud``.

    Two vertices are adjacent iff their l-inf distance is <= y (inclusive).
    Degrees are accumulated from grid candidate pairs in vectorized chunks;
    memory stays O(n) plus one bounded chunk. An existing ``index`` may be
    passed as long as its cell_size is >= y.
    """
    n = cloud.n
    if n < 2:
        raise ValueError(f"degree statistics need n >= 2 points, got {n}")
    if y < 0.0:
        raise ValueError(f"y must be >= 0, got {y}")
    deg = np.zeros(n, dtype=np.int64)
    if y == 0.0:
        # Only exactly coincident points are adjacent.
        _, inverse, counts = np.unique(
            cloud.points, axis=0, return_inverse=True, return_counts=True
        )
        deg = counts[inverse.ravel()] - 1
    else:
        if index is None:
            index = build_grid_index(cloud, y)
        elif index.cell_size < y:
            raise ValueError(
                f"index cell_size={index.cell_size} is smaller than y={y}"
            )
        pts = cloud.points
        axis0 = pts[:, 0]  # d == 1 skips the per-axis reduction
        for left, right in iter_candidate_pairs(index):
            if cloud.d == 1:
                dist = np.abs(axis0[left] - axis0[right])
            else:
                dist = np.abs(pts[left] - pts[right]).max(axis=1)
            hit = dist <= y
            np.add.at(deg, left[hit], 1)
            np.add.at(deg, right[hit], 1)
    return DegreeSummary.from_degrees(deg)


def edge_density_gap(summary: DegreeSummary, config: RggConfig) -> float:
    """| epsilon_n / C(n,2) - p(y) |, the edge-density deviation from its mean."""
    if summary.n != config.n:
        raise ValueError(f"summary has n={summary.n} but config has n={config.n}")
    n = config.n
    density = summary.epsilon_n / (n * (n - 1) / 2)
    return abs(density - pair_connect_prob(config.y, config.lam, config.d))


def degree_ratios(summary: DegreeSummary, config: RggConfig) -> Tuple[float, float]:
    """(min_degree, max_degree) scaled by n * y^d, the ratios the strong-law
    bounds constrain."""
    if summary.n != config.n:
        raise ValueError(f"summary has n={summary.n} but config has n={config.n}")
    if config.y == 0.0:
        raise ValueError("degree ratios are undefined at y = 0")
    denom = config.n * config.y**config.d
    if not math.isfinite(denom):
        raise ValueError(f"n * y^d overflows for y={config.y}, d={config.d}")
    return summary.min_degree / denom, summary.max_degree / denom
