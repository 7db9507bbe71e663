"""l-infinity geometry: the metric, a uniform-grid fixed-radius index, and
the brute-force pairwise scan that serves as its correctness oracle.

The grid uses cell_size = query radius, so a radius-y query only ever has
to scan the 3^d cells around a point. Candidate pairs are generated in
vectorized chunks; the Python-level work is O(number of occupied cells),
not O(n) or O(pairs).
"""

from __future__ import annotations

import itertools
from typing import Iterator, Set, Tuple

import numpy as np

from .model import PointCloud

_PAIR_CHUNK = 1 << 20


def linf_distance(p, q) -> float:
    """Chebyshev distance: max over axes of the absolute coordinate difference."""
    a = np.asarray(p, dtype=np.float64)
    b = np.asarray(q, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a - b))) if a.size else 0.0


class GridIndex:
    """Uniform grid over a point cloud; cell (c1..cd) holds the vertices whose
    point lies in [c_k*cell_size, (c_k+1)*cell_size) along every axis.

    Immutable once built; queries are read-only and safe to run concurrently.
    """

    def __init__(self, cloud: PointCloud, cell_size: float):
        if not cell_size > 0.0:
            raise ValueError(f"cell_size must be positive, got {cell_size}")
        self.cloud = cloud
        self.cell_size = float(cell_size)
        coords = np.floor(cloud.points / self.cell_size).astype(np.int64)
        if cloud.d == 1:
            order = np.argsort(coords[:, 0], kind="stable")
        else:
            order = np.lexsort(coords.T[::-1])
        sorted_coords = coords[order]
        if len(order) > 1:
            new_group = np.any(sorted_coords[1:] != sorted_coords[:-1], axis=1)
            boundaries = np.flatnonzero(np.concatenate(([True], new_group)))
        else:
            boundaries = np.array([0], dtype=np.int64)
        self._members = order  # vertex ids grouped by cell
        self._starts = np.concatenate((boundaries, [len(order)]))
        self._cell_coords = sorted_coords[boundaries]  # (k, d), lex-sorted
        self._vertex_cells = coords
        self._cell_to_group = None  # built lazily

    @property
    def n_cells(self) -> int:
        return self._cell_coords.shape[0]

    @property
    def cells(self) -> dict:
        """Mapping from cell coordinate tuple to the array of member vertex ids."""
        return {
            tuple(self._cell_coords[g]): self.members(g) for g in range(self.n_cells)
        }

    def members(self, group: int) -> np.ndarray:
        return self._members[self._starts[group]:self._starts[group + 1]]

    def _group_map(self) -> dict:
        if self._cell_to_group is None:
            self._cell_to_group = {
                tuple(c): g for g, c in enumerate(self._cell_coords)
            }
        return self._cell_to_group

    def _lookup_groups(self, targets: np.ndarray) -> np.ndarray:
        """Group ids for an array of cell coordinates, -1 where unoccupied."""
        if self.cloud.d == 1:
            keys = self._cell_coords[:, 0]
            pos = np.searchsorted(keys, targets[:, 0])
            pos_clipped = np.minimum(pos, len(keys) - 1)
            found = keys[pos_clipped] == targets[:, 0]
            return np.where(found, pos_clipped, -1)
        gmap = self._group_map()
        return np.fromiter(
            (gmap.get(tuple(t), -1) for t in targets), dtype=np.int64, count=len(targets)
        )


def build_grid_index(cloud: PointCloud, cell_size: float) -> GridIndex:
    """Index ``cloud`` with the given cell size (O(n) construction)."""
    return GridIndex(cloud, cell_size)


def _block_pairs(
    index: GridIndex, groups_a: np.ndarray, groups_b: np.ndarray, chunk: int
) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """All (vertex in A-group, vertex in B-group) pairs for matched group arrays,
    yielded as flat id arrays in chunks of at most ``chunk`` pairs."""
    counts = np.diff(index._starts)
    size_a = counts[groups_a]
    size_b = counts[groups_b]
    pairs = size_a * size_b
    cum = np.concatenate(([0], np.cumsum(pairs)))
    total = int(cum[-1])
    start_a = index._starts[groups_a]
    start_b = index._starts[groups_b]
    for lo in range(0, total, chunk):
        hi = min(lo + chunk, total)
        flat = np.arange(lo, hi, dtype=np.int64)
        blk = np.searchsorted(cum, flat, side="right") - 1
        within = flat - cum[blk]
        ai = within // size_b[blk]
        bi = within % size_b[blk]
        yield index._members[start_a[blk] + ai], index._members[start_b[blk] + bi]


def iter_candidate_pairs(
    index: GridIndex, chunk: int = _PAIR_CHUNK
) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Every unordered vertex pair lying in the same or adjacent grid cells,
    exactly once, as chunked (left_ids, right_ids) arrays.

    This is a superset of the pairs at l-inf distance <= cell_size; callers
    filter by actual distance.
    """
    k = index.n_cells
    groups = np.arange(k, dtype=np.int64)
    # Same-cell pairs: keep the ordered pairs with left id < right id.
    for left, right in _block_pairs(index, groups, groups, chunk):
        keep = left < right
        if np.any(keep):
            yield left[keep], right[keep]
    # Cross-cell pairs: one offset per unordered cell pair (lexicographically
    # positive offsets), so each adjacent pair of cells is visited once.
    d = index.cloud.d
    for off in itertools.product((-1, 0, 1), repeat=d):
        if off <= (0,) * d:
            continue
        targets = index._cell_coords + np.asarray(off, dtype=np.int64)
        neighbor = index._lookup_groups(targets)
        present = neighbor >= 0
        if not np.any(present):
            continue
        yield from _block_pairs(index, groups[present], neighbor[present], chunk)


def iter_matched_blocks(
    index: GridIndex,
) -> Iterator[Tuple[np.ndarray, np.ndarray, bool]]:
    """Member-id blocks (A, B, same_cell) covering every same-or-adjacent cell
    pair exactly once: one (A, A, True) block per cell, one (A, B, False)
    block per unordered adjacent cell pair."""
    for g in range(index.n_cells):
        members = index.members(g)
        yield members, members, True
    d = index.cloud.d
    groups = np.arange(index.n_cells, dtype=np.int64)
    for off in itertools.product((-1, 0, 1), repeat=d):
        if off <= (0,) * d:
            continue
        targets = index._cell_coords + np.asarray(off, dtype=np.int64)
        neighbor = index._lookup_groups(targets)
        for g, h in zip(groups[neighbor >= 0], neighbor[neighbor >= 0]):
            yield index.members(g), index.members(h), False


def neighbors_within(index: GridIndex, i: int, y: float) -> Set[int]:
    """Vertex ids j != i with ||X_i - X_j||_inf <= y (boundary inclusive).

    Requires y <= cell_size so the 3^d-cell scan around i's cell is complete.
    """
    n = index.cloud.n
    if not 0 <= i < n:
        raise IndexError(f"vertex id {i} out of range for n={n}")
    if y < 0.0:
        raise ValueError(f"y must be >= 0, got {y}")
    if y > index.cell_size:
        raise ValueError(
            f"y={y} exceeds cell_size={index.cell_size}; rebuild the index"
        )
    base = index._vertex_cells[i]
    gmap = index._group_map()
    candidates = []
    for off in itertools.product((-1, 0, 1), repeat=index.cloud.d):
        g = gmap.get(tuple(base + np.asarray(off, dtype=np.int64)))
        if g is not None:
            candidates.append(index.members(g))
    cand = np.concatenate(candidates)
    dist = np.abs(index.cloud.points[cand] - index.cloud.points[i]).max(axis=1)
    hits = cand[dist <= y]
    return {int(j) for j in hits if j != i}


def brute_force_edges(cloud: PointCloud, y: float) -> Set[Tuple[int, int]]:
    """All unordered pairs at l-inf distance <= y by an O(n^2) scan.

    The correctness oracle for the grid index; never the default path.
    """
    if y < 0.0:
        raise ValueError(f"y must be >= 0, got {y}")
    n = cloud.n
    pts = cloud.points
    edges: Set[Tuple[int, int]] = set()
    row_chunk = max(1, _PAIR_CHUNK // max(n, 1))
    for lo in range(0, n, row_chunk):
        hi = min(lo + row_chunk, n)
        dist = np.abs(pts[lo:hi, None, :] - pts[None, :, :]).max(axis=2)
        ii, jj = np.nonzero(dist <= y)
        for a, b in zip(ii + lo, jj):
            if a < b:
                edges.add((int(a), int(b)))
    return edges
