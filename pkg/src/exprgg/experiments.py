"""Seeded Monte Carlo suites confronting empirical graph statistics with the
closed-form laws, emitting machine-readable tables plus a run manifest.

Replications are independent jobs seeded by derive_replication_seed(base_seed,
global_counter), so a table is byte-identical across runs and across any
worker count; rows are always ordered by (n, replication).
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .model import (
    DegreeSummary,
    EdgeDistanceFamily,
    LogRegime,
    PointCloud,
    PowerFamily,
    RggConfig,
    TheoryBounds,
    _check_seed,
)
from .graphstats import degree_ratios, degree_summary, edge_density_gap
from .sampling import derive_replication_seed, sample_exponential_cloud
from .spatial import build_grid_index, iter_matched_blocks
from .theory import (
    containment_radius,
    edge_distance,
    pair_connect_prob,
    series_classifier,
    theory_bounds,
)

ARTIFACT_NAME = "exprgg"
ARTIFACT_VERSION = "0.1.0"

KINDS = ("degree-law", "edge-slln", "uniform-slln", "containment", "threshold")

DEFAULT_Y_GRID = tuple(i / 20 for i in range(1, 21))  # 0.05, 0.10, ..., 1.00

_BLOCK_ENTRIES = 1 << 22  # cap on broadcast distance-matrix entries per step

CSV_COLUMNS = (
    "experiment", "n", "d", "lambda", "family", "param1", "param2",
    "replication", "seed", "y_n", "epsilon_n", "min_degree", "max_degree",
    "min_ratio", "max_ratio", "p_y", "gap", "contained", "has_edge",
)

# ResultRow attribute backing each CSV column ("lambda" is reserved in Python).
_COLUMN_ATTRS = {"lambda": "lam"}

_INT_COLUMNS = {"n", "d", "replication", "seed", "epsilon_n", "min_degree", "max_degree"}
_BOOL_COLUMNS = {"contained", "has_edge"}
_STR_COLUMNS = {"experiment", "family"}


def fmt17(x: float) -> str:
    """Render a float with 17 significant digits (enough to round-trip IEEE doubles)."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment: which law to probe, at which sizes, how many seeded reps."""

    kind: str
    n_list: Tuple[int, ...]
    d: int
    lam: float
    replications: int
    base_seed: int
    family: Optional[EdgeDistanceFamily] = None
    y_grid: Optional[Tuple[float, ...]] = None
    epsilon: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}; expected one of {KINDS}")
        n_list = tuple(int(n) for n in self.n_list)
        if not n_list:
            raise ValueError("n_list must be nonempty")
        if any(n < 2 for n in n_list):
            raise ValueError("every n must be >= 2")
        if any(b <= a for a, b in zip(n_list, n_list[1:])):
            raise ValueError(f"n_list must be strictly increasing, got {n_list}")
        object.__setattr__(self, "n_list", n_list)
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        if not (self.lam > 0.0 and math.isfinite(self.lam)):
            raise ValueError(f"lam must be a positive finite rate, got {self.lam}")
        if self.replications < 1:
            raise ValueError(f"replications must be >= 1, got {self.replications}")
        _check_seed(self.base_seed, "base_seed")
        if self.kind in ("degree-law", "edge-slln"):
            if not isinstance(self.family, LogRegime):
                raise ValueError(f"{self.kind} requires a LogRegime family")
        elif self.kind == "threshold":
            if not isinstance(self.family, (LogRegime, PowerFamily)):
                raise ValueError("threshold requires a LogRegime or PowerFamily family")
        elif self.family is not None:
            raise ValueError(f"{self.kind} does not take an edge-distance family")
        if self.family is not None:
            if self.family.lam != self.lam or self.family.d != self.d:
                raise ValueError("family (lam, d) must match the spec's (lam, d)")
        if self.kind == "uniform-slln":
            grid = tuple(float(y) for y in (self.y_grid or ()))
            if not grid:
                raise ValueError("uniform-slln requires a nonempty y_grid")
            if any(not 0.0 <= y <= 1.0 for y in grid):
                raise ValueError("y_grid values must lie in [0, 1]")
            if any(b <= a for a, b in zip(grid, grid[1:])) or grid[-1] <= 0.0:
                raise ValueError("y_grid must be strictly increasing with max > 0")
            object.__setattr__(self, "y_grid", grid)
        elif self.y_grid is not None:
            raise ValueError(f"{self.kind} does not take a y_grid")
        if self.kind == "containment":
            if self.epsilon is None or self.epsilon < 0.0:
                raise ValueError("containment requires epsilon >= 0")
        elif self.epsilon is not None:
            raise ValueError(f"{self.kind} does not take epsilon")


@dataclass(frozen=True)
class ResultRow:
    """One replication's outcome; fields that are not meaningful for the
    experiment kind stay None and are emitted blank, never zero-filled."""

    experiment: str
    n: int
    d: int
    lam: float
    family: Optional[str]
    param1: Optional[float]
    param2: Optional[float]
    replication: int
    seed: int
    y_n: Optional[float] = None
    epsilon_n: Optional[int] = None
    min_degree: Optional[int] = None
    max_degree: Optional[int] = None
    min_ratio: Optional[float] = None
    max_ratio: Optional[float] = None
    p_y: Optional[float] = None
    gap: Optional[float] = None
    contained: Optional[bool] = None
    has_edge: Optional[bool] = None
    bounds: Optional[TheoryBounds] = None  # attached for callers, never emitted

    def value(self, column: str):
        return getattr(self, _COLUMN_ATTRS.get(column, column))


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    rows: List[ResultRow]
    summaries: List[dict]
    theory: dict = field(default_factory=dict)


def _family_columns(family: Optional[EdgeDistanceFamily]):
    if isinstance(family, LogRegime):
        return "log", family.c, None
    if isinstance(family, PowerFamily):
        return "power", family.alpha, family.beta
    return None, None, None


def _edge_counts_multi(cloud: PointCloud, y_values: np.ndarray) -> np.ndarray:
    """Edge counts of G_n(y) for every y in an ascending grid, one grid pass.

    One index at cell_size = max(y) covers the whole grid; distances are
    computed block-by-block with broadcasting (the cells are large here), and
    each pair is binned once, boundary-inclusive. Same-cell blocks produce
    the full symmetric distance matrix, so their tallies are halved after
    removing the zero self-distances.
    """
    ys = np.asarray(y_values, dtype=np.float64)
    index = build_grid_index(cloud, float(ys[-1]))
    pts = cloud.points
    axis0 = pts[:, 0]
    m = len(ys)
    cum_cross = np.zeros(m, dtype=np.int64)
    cum_same = np.zeros(m, dtype=np.int64)
    n_self = 0
    for block_a, block_b, same in iter_matched_blocks(index):
        if same:
            n_self += len(block_a)
        acc = cum_same if same else cum_cross
        row_step = max(1, _BLOCK_ENTRIES // max(len(block_b), 1))
        for lo in range(0, len(block_a), row_step):
            sub = block_a[lo:lo + row_step]
            if cloud.d == 1:
                dist = np.abs(axis0[sub, None] - axis0[None, block_b])
            else:
                dist = np.abs(pts[sub, None, :] - pts[None, block_b, :]).max(axis=2)
            for j in range(m):
                acc[j] += np.count_nonzero(dist <= ys[j])
    return cum_cross + (cum_same - n_self) // 2


def _job_seed(spec: ExperimentSpec, i_n: int, rep: int) -> int:
    return derive_replication_seed(spec.base_seed, i_n * spec.replications + rep)


def _row_degree_law(spec: ExperimentSpec, i_n: int, rep: int, tb: TheoryBounds) -> ResultRow:
    n = spec.n_list[i_n]
    seed = _job_seed(spec, i_n, rep)
    y = edge_distance(spec.family, n)
    cloud = sample_exponential_cloud(n, spec.d, spec.lam, seed)
    summ = degree_summary(cloud, y)
    cfg = RggConfig(n=n, d=spec.d, lam=spec.lam, y=y, seed=seed)
    min_ratio, max_ratio = degree_ratios(summ, cfg)
    tag, p1, p2 = _family_columns(spec.family)
    return ResultRow(
        experiment=spec.kind, n=n, d=spec.d, lam=spec.lam,
        family=tag, param1=p1, param2=p2, replication=rep, seed=seed,
        y_n=y, epsilon_n=summ.epsilon_n, min_degree=summ.min_degree,
        max_degree=summ.max_degree, min_ratio=min_ratio, max_ratio=max_ratio,
        p_y=pair_connect_prob(y, spec.lam, spec.d), bounds=tb,
    )


def _row_edge_slln(spec: ExperimentSpec, i_n: int, rep: int) -> ResultRow:
    n = spec.n_list[i_n]
    seed = _job_seed(spec, i_n, rep)
    y = edge_distance(spec.family, n)
    cloud = sample_exponential_cloud(n, spec.d, spec.lam, seed)
    summ = degree_summary(cloud, y)
    cfg = RggConfig(n=n, d=spec.d, lam=spec.lam, y=y, seed=seed)
    tag, p1, p2 = _family_columns(spec.family)
    return ResultRow(
        experiment=spec.kind, n=n, d=spec.d, lam=spec.lam,
        family=tag, param1=p1, param2=p2, replication=rep, seed=seed,
        y_n=y, epsilon_n=summ.epsilon_n,
        p_y=pair_connect_prob(y, spec.lam, spec.d),
        gap=edge_density_gap(summ, cfg),
    )


def _row_uniform(spec: ExperimentSpec, i_n: int, rep: int) -> ResultRow:
    n = spec.n_list[i_n]
    seed = _job_seed(spec, i_n, rep)
    cloud = sample_exponential_cloud(n, spec.d, spec.lam, seed)
    ys = np.asarray(spec.y_grid, dtype=np.float64)
    counts = _edge_counts_multi(cloud, ys)
    density = counts / (n * (n - 1) / 2)
    p = np.array([pair_connect_prob(y, spec.lam, spec.d) for y in ys])
    sup_gap = float(np.max(np.abs(density - p)))
    return ResultRow(
        experiment=spec.kind, n=n, d=spec.d, lam=spec.lam,
        family=None, param1=None, param2=None, replication=rep, seed=seed,
        gap=sup_gap,
    )


def _row_containment(spec: ExperimentSpec, i_n: int, rep: int) -> ResultRow:
    n = spec.n_list[i_n]
    seed = _job_seed(spec, i_n, rep)
    cloud = sample_exponential_cloud(n, spec.d, spec.lam, seed)
    radius = containment_radius(n, spec.lam, spec.d, spec.epsilon)
    contained = bool(cloud.points.max() <= radius)
    return ResultRow(
        experiment=spec.kind, n=n, d=spec.d, lam=spec.lam,
        family=None, param1=None, param2=None, replication=rep, seed=seed,
        contained=contained,
    )


def _row_threshold(spec: ExperimentSpec, i_n: int, rep: int) -> ResultRow:
    n = spec.n_list[i_n]
    seed = _job_seed(spec, i_n, rep)
    y = edge_distance(spec.family, n)
    cloud = sample_exponential_cloud(n, spec.d, spec.lam, seed)
    summ = degree_summary(cloud, y)
    tag, p1, p2 = _family_columns(spec.family)
    return ResultRow(
        experiment=spec.kind, n=n, d=spec.d, lam=spec.lam,
        family=tag, param1=p1, param2=p2, replication=rep, seed=seed,
        y_n=y, epsilon_n=summ.epsilon_n, max_degree=summ.max_degree,
        p_y=pair_connect_prob(y, spec.lam, spec.d),
        has_edge=summ.epsilon_n >= 1,
    )


def _summaries_degree_law(spec: ExperimentSpec, per_n: List[List[ResultRow]], tb: TheoryBounds) -> List[dict]:
    envelope = (2.0 * spec.lam) ** spec.d
    out = []
    for rows in per_n:
        mins = np.array([r.min_ratio for r in rows])
        maxs = np.array([r.max_ratio for r in rows])
        out.append({
            "n": rows[0].n,
            "y_n": rows[0].y_n,
            "replications": len(rows),
            "mean_min_ratio": float(mins.mean()),
            "sd_min_ratio": float(mins.std()),
            "min_min_ratio": float(mins.min()),
            "max_min_ratio": float(mins.max()),
            "spread_min_ratio": float(mins.max() - mins.min()),
            "mean_max_ratio": float(maxs.mean()),
            "sd_max_ratio": float(maxs.std()),
            "min_max_ratio": float(maxs.min()),
            "max_max_ratio": float(maxs.max()),
            "spread_max_ratio": float(maxs.max() - maxs.min()),
            "min_liminf_bound": tb.min_liminf_bound,
            "min_limsup_bound": tb.min_limsup_bound,
            "min_limsup_envelope": envelope,
            "max_liminf_bound": tb.max_liminf_bound,
            "max_limsup_bound": tb.max_limsup_bound,
        })
    return out


def _summaries_edge_slln(spec: ExperimentSpec, per_n: List[List[ResultRow]]) -> List[dict]:
    out = []
    for rows in per_n:
        gaps = np.array([r.gap for r in rows])
        p = rows[0].p_y
        out.append({
            "n": rows[0].n,
            "y_n": rows[0].y_n,
            "p_y": p,
            "replications": len(rows),
            "mean_gap": float(gaps.mean()),
            "mean_relative_gap": float(gaps.mean() / p) if p > 0 else None,
        })
    return out


def _summaries_uniform(spec: ExperimentSpec, per_n: List[List[ResultRow]]) -> List[dict]:
    out = []
    for rows in per_n:
        sups = np.array([r.gap for r in rows])
        out.append({
            "n": rows[0].n,
            "replications": len(rows),
            "mean_sup_gap": float(sups.mean()),
            "max_sup_gap": float(sups.max()),
        })
    return out


def _summaries_containment(spec: ExperimentSpec, per_n: List[List[ResultRow]]) -> List[dict]:
    out = []
    for rows in per_n:
        n = rows[0].n
        freq = sum(1 for r in rows if r.contained) / len(rows)
        out.append({
            "n": n,
            "replications": len(rows),
            "radius": containment_radius(n, spec.lam, spec.d, spec.epsilon),
            "epsilon": spec.epsilon,
            "containment_frequency": freq,
            "predicted_escape_bound": min(1.0, spec.d * float(n) ** -spec.epsilon),
        })
    return out


def _summaries_threshold(spec: ExperimentSpec, per_n: List[List[ResultRow]]) -> List[dict]:
    out = []
    for rows in per_n:
        n = rows[0].n
        freq = sum(1 for r in rows if r.has_edge) / len(rows)
        out.append({
            "n": n,
            "y_n": rows[0].y_n,
            "p_y": rows[0].p_y,
            "replications": len(rows),
            "expected_edges": n * (n - 1) / 2 * rows[0].p_y,
            "edge_frequency": freq,
        })
    return out


def _resolve_threads(threads: int) -> int:
    if threads < 0:
        raise ValueError(f"threads must be >= 0, got {threads}")
    return threads if threads > 0 else (os.cpu_count() or 1)


def run_experiment(
    spec: ExperimentSpec,
    threads: int = 1,
    progress: Optional[Callable[[str], None]] = None,
) -> ExperimentResult:
    """Run every (n, replication) job of ``spec`` and summarize per n.

    ``threads`` parallelizes the replications of each n; the result is
    independent of the worker count. ``progress`` receives one line per n.
    """
    workers = _resolve_threads(threads)
    theory: Dict[str, object] = {}
    if spec.kind == "degree-law":
        tb = theory_bounds(spec.family.c, spec.lam, spec.d)
        job = lambda i_n, rep: _row_degree_law(spec, i_n, rep, tb)
        theory = {
            "lambda_pow_d": tb.lambda_pow_d,
            "a_min": tb.a_min,
            "a_min_has_root": tb.a_min_has_root,
            "a_max": tb.a_max,
            "min_liminf_bound": tb.min_liminf_bound,
            "min_limsup_bound": tb.min_limsup_bound,
            "min_limsup_envelope": (2.0 * spec.lam) ** spec.d,
            "max_liminf_bound": tb.max_liminf_bound,
            "max_limsup_bound": tb.max_limsup_bound,
        }
        summarize = lambda per_n: _summaries_degree_law(spec, per_n, tb)
    elif spec.kind == "edge-slln":
        job = lambda i_n, rep: _row_edge_slln(spec, i_n, rep)
        summarize = lambda per_n: _summaries_edge_slln(spec, per_n)
    elif spec.kind == "uniform-slln":
        job = lambda i_n, rep: _row_uniform(spec, i_n, rep)
        theory = {"y_grid": list(spec.y_grid)}
        summarize = lambda per_n: _summaries_uniform(spec, per_n)
    elif spec.kind == "containment":
        job = lambda i_n, rep: _row_containment(spec, i_n, rep)
        theory = {
            "predicted_escape_bounds": {
                str(n): min(1.0, spec.d * float(n) ** -spec.epsilon)
                for n in spec.n_list
            }
        }
        summarize = lambda per_n: _summaries_containment(spec, per_n)
    else:  # threshold
        job = lambda i_n, rep: _row_threshold(spec, i_n, rep)
        theory = {
            "series": series_classifier(spec.family),
            "first_moment_expected_edges": {
                str(n): n * (n - 1) / 2
                * pair_connect_prob(edge_distance(spec.family, n), spec.lam, spec.d)
                for n in spec.n_list
            },
        }
        summarize = lambda per_n: _summaries_threshold(spec, per_n)

    per_n: List[List[ResultRow]] = []
    for i_n, n in enumerate(spec.n_list):
        reps = range(spec.replications)
        if workers > 1 and spec.replications > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(lambda rep: job(i_n, rep), reps))
        else:
            rows = [job(i_n, rep) for rep in reps]
        per_n.append(rows)
        if progress is not None:
            progress(f"[{spec.kind}] n={n}: {spec.replications} replication(s) done")
    all_rows = [row for rows in per_n for row in rows]
    return ExperimentResult(
        spec=spec, rows=all_rows, summaries=summarize(per_n), theory=theory
    )


def run_degree_law(spec: ExperimentSpec, threads: int = 1) -> ExperimentResult:
    if spec.kind != "degree-law":
        raise ValueError(f"expected a degree-law spec, got {spec.kind}")
    return run_experiment(spec, threads)


def run_edge_slln(spec: ExperimentSpec, threads: int = 1) -> ExperimentResult:
    if spec.kind != "edge-slln":
        raise ValueError(f"expected an edge-slln spec, got {spec.kind}")
    return run_experiment(spec, threads)


def run_uniform_slln(spec: ExperimentSpec, threads: int = 1) -> ExperimentResult:
    if spec.kind != "uniform-slln":
        raise ValueError(f"expected a uniform-slln spec, got {spec.kind}")
    return run_experiment(spec, threads)


def run_containment(spec: ExperimentSpec, threads: int = 1) -> ExperimentResult:
    if spec.kind != "containment":
        raise ValueError(f"expected a containment spec, got {spec.kind}")
    return run_experiment(spec, threads)


def run_threshold_dichotomy(spec: ExperimentSpec, threads: int = 1) -> ExperimentResult:
    if spec.kind != "threshold":
        raise ValueError(f"expected a threshold spec, got {spec.kind}")
    return run_experiment(spec, threads)


# ---------------------------------------------------------------------------
# Table emission and parsing
# ---------------------------------------------------------------------------

def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return fmt17(v)
    return str(v)


def _json_cell(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return json.dumps(fmt17(v)) if not math.isfinite(v) else fmt17(v)
    return json.dumps(v)


def _render_csv(table: Sequence[ResultRow]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in table:
        lines.append(",".join(_csv_cell(row.value(col)) for col in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def _render_json(table: Sequence[ResultRow]) -> str:
    body = []
    for row in table:
        cells = ", ".join(
            f"{json.dumps(col)}: {_json_cell(row.value(col))}" for col in CSV_COLUMNS
        )
        body.append("  {" + cells + "}")
    return "[\n" + ",\n".join(body) + "\n]\n"


def render_table(table: Sequence[ResultRow], fmt: str) -> str:
    if not table:
        raise ValueError("refusing to emit an empty table")
    if fmt == "csv":
        return _render_csv(table)
    if fmt == "json":
        return _render_json(table)
    raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'json'")


def emit(table: Sequence[ResultRow], fmt: str, destination: Union[str, IO[str]]) -> None:
    """Write ``table`` as CSV or JSON (fixed column set, 17-digit floats)."""
    text = render_table(table, fmt)
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        try:
            with open(destination, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write table to {destination}: {exc}") from exc


def _parse_cell(column: str, raw):
    if raw is None or raw == "":
        return None
    if column in _STR_COLUMNS:
        return str(raw)
    if column in _BOOL_COLUMNS:
        if isinstance(raw, bool):
            return raw
        if raw in ("true", "false"):
            return raw == "true"
        raise ValueError(f"bad boolean {raw!r} in column {column}")
    if column in _INT_COLUMNS:
        return int(raw)
    if isinstance(raw, str):
        return float(raw)  # accepts 'inf'
    return float(raw)


def _row_from_cells(cells: Dict[str, object]) -> ResultRow:
    kwargs = {}
    for col in CSV_COLUMNS:
        kwargs[_COLUMN_ATTRS.get(col, col)] = _parse_cell(col, cells.get(col))
    return ResultRow(**kwargs)


def parse_table(text: str, fmt: str) -> List[ResultRow]:
    """Inverse of :func:`render_table` (the attached bounds are not recoverable)."""
    if fmt == "csv":
        lines = [ln for ln in text.splitlines() if ln]
        if not lines or tuple(lines[0].split(",")) != CSV_COLUMNS:
            raise ValueError("CSV table has a missing or unexpected header")
        rows = []
        for ln in lines[1:]:
            parts = ln.split(",")
            if len(parts) != len(CSV_COLUMNS):
                raise ValueError(f"CSV row has {len(parts)} fields, expected {len(CSV_COLUMNS)}")
            rows.append(_row_from_cells(dict(zip(CSV_COLUMNS, parts))))
        return rows
    if fmt == "json":
        data = json.loads(text)
        return [_row_from_cells(obj) for obj in data]
    raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'json'")


def read_table(path: str, fmt: str) -> List[ResultRow]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_table(fh.read(), fmt)


# ---------------------------------------------------------------------------
# JSON serialization of the domain types (exact round-trip)
# ---------------------------------------------------------------------------

def _enc_float(x: float):
    return x if math.isfinite(x) else fmt17(x)


def _dec_float(v) -> float:
    return float(v)


def to_jsonable(obj) -> dict:
    """A JSON-ready dict for any domain type; from_jsonable inverts it exactly."""
    if isinstance(obj, PointCloud):
        return {
            "type": "PointCloud", "d": obj.d, "seed": obj.seed, "lambda": obj.lam,
            "points": [[float(v) for v in row] for row in obj.points],
        }
    if isinstance(obj, RggConfig):
        return {
            "type": "RggConfig", "n": obj.n, "d": obj.d, "lambda": obj.lam,
            "y": _enc_float(obj.y), "seed": obj.seed,
        }
    if isinstance(obj, DegreeSummary):
        return {
            "type": "DegreeSummary", "degrees": [int(v) for v in obj.degrees],
            "epsilon_n": obj.epsilon_n, "min_degree": obj.min_degree,
            "max_degree": obj.max_degree,
        }
    if isinstance(obj, LogRegime):
        return {"type": "LogRegime", "c": _enc_float(obj.c), "lambda": obj.lam, "d": obj.d}
    if isinstance(obj, PowerFamily):
        return {
            "type": "PowerFamily", "alpha": obj.alpha, "beta": obj.beta,
            "lambda": obj.lam, "d": obj.d,
        }
    if isinstance(obj, TheoryBounds):
        return {
            "type": "TheoryBounds", "lambda_pow_d": obj.lambda_pow_d,
            "a_min": obj.a_min, "a_max": obj.a_max,
            "a_min_has_root": obj.a_min_has_root,
            "min_liminf_bound": obj.min_liminf_bound,
            "min_limsup_bound": obj.min_limsup_bound,
            "max_liminf_bound": obj.max_liminf_bound,
            "max_limsup_bound": obj.max_limsup_bound,
        }
    if isinstance(obj, ExperimentSpec):
        return {
            "type": "ExperimentSpec", "kind": obj.kind, "n_list": list(obj.n_list),
            "d": obj.d, "lambda": obj.lam, "replications": obj.replications,
            "base_seed": obj.base_seed,
            "family": to_jsonable(obj.family) if obj.family is not None else None,
            "y_grid": list(obj.y_grid) if obj.y_grid is not None else None,
            "epsilon": obj.epsilon,
        }
    raise TypeError(f"no JSON form for {type(obj).__name__}")


def from_jsonable(data: dict):
    kind = data.get("type")
    if kind == "PointCloud":
        return PointCloud(
            d=data["d"], points=np.asarray(data["points"], dtype=np.float64),
            seed=data["seed"], lam=data["lambda"],
        )
    if kind == "RggConfig":
        return RggConfig(
            n=data["n"], d=data["d"], lam=data["lambda"],
            y=_dec_float(data["y"]), seed=data["seed"],
        )
    if kind == "DegreeSummary":
        return DegreeSummary(
            degrees=np.asarray(data["degrees"], dtype=np.int64),
            epsilon_n=data["epsilon_n"], min_degree=data["min_degree"],
            max_degree=data["max_degree"],
        )
    if kind == "LogRegime":
        return LogRegime(c=_dec_float(data["c"]), lam=data["lambda"], d=data["d"])
    if kind == "PowerFamily":
        return PowerFamily(
            alpha=data["alpha"], beta=data["beta"], lam=data["lambda"], d=data["d"]
        )
    if kind == "TheoryBounds":
        return TheoryBounds(
            lambda_pow_d=data["lambda_pow_d"], a_min=data["a_min"],
            a_max=data["a_max"], a_min_has_root=data["a_min_has_root"],
        )
    if kind == "ExperimentSpec":
        family = data.get("family")
        y_grid = data.get("y_grid")
        return ExperimentSpec(
            kind=data["kind"], n_list=tuple(data["n_list"]), d=data["d"],
            lam=data["lambda"], replications=data["replications"],
            base_seed=data["base_seed"],
            family=from_jsonable(family) if family is not None else None,
            y_grid=tuple(y_grid) if y_grid is not None else None,
            epsilon=data.get("epsilon"),
        )
    raise ValueError(f"cannot decode object of type {kind!r}")


# ---------------------------------------------------------------------------
# Run manifest
# ---------------------------------------------------------------------------

def _sanitize(obj):
    """Replace non-finite floats with their string form so the JSON stays strict."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return fmt17(obj)
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    return obj


def manifest_path_for(output_path: str) -> str:
    return str(output_path) + ".manifest.json"


def build_manifest(result: ExperimentResult, output_path: str, fmt: str) -> dict:
    return _sanitize({
        "artifact": {"name": ARTIFACT_NAME, "version": ARTIFACT_VERSION},
        "spec": to_jsonable(result.spec),
        "output": {"path": str(output_path), "format": fmt, "rows": len(result.rows)},
        "theory": result.theory,
        "summary": result.summaries,
    })


def write_manifest(result: ExperimentResult, output_path: str, fmt: str) -> str:
    path = manifest_path_for(output_path)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(build_manifest(result, output_path, fmt), fh, indent=2,
                      allow_nan=False)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write manifest to {path}: {exc}") from exc
    return path


def spec_from_json_file(path: str) -> ExperimentSpec:
    """Load an ExperimentSpec from a spec JSON file or a run manifest."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict) and data.get("type") != "ExperimentSpec" and "spec" in data:
        data = data["spec"]
    obj = from_jsonable(data)
    if not isinstance(obj, ExperimentSpec):
        raise ValueError(f"{path} does not contain an experiment spec")
    return obj
