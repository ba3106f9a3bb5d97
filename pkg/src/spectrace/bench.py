"""Benchmark harnesses: approximation error, 1-NN classification, drift series.

Results are plain dataclass rows with CSV emitters:
error rows      graph,method,kind,rel_error,seconds
classification  dataset,kind,method,mean_acc,std,repeats
snapshots       index,distance,added,removed
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import IO, Callable, Sequence

import numpy as np

from . import descriptors as dsc
from .graphs import Graph, SnapshotSeries
from .slq import SlqConfig

__all__ = [
    "ErrorRow",
    "compute_descriptor",
    "ClassificationResult",
    "SnapshotRow",
    "error_benchmark",
    "knn_accuracy",
    "snapshot_distance_series",
    "write_error_csv",
    "write_classification_csv",
    "write_snapshot_csv",
]


@dataclass(frozen=True)
class ErrorRow:
    graph_id: str
    method: str
    kind: str
    rel_error: float
    seconds: float
    skipped: bool = False


@dataclass(frozen=True)
class ClassificationResult:
    mean_accuracy: float
    std: float
    repeats: int
    train_frac: float


@dataclass(frozen=True)
class SnapshotRow:
    index: int
    distance: float
    added: int
    removed: int
    normalized_distance: float


def compute_descriptor(
    g: Graph,
    kind: str,
    method: str,
    grid: dsc.TimeGrid,
    cfg: SlqConfig,
    k: int,
    threads: int = 1,
):
    if kind == "netlsd":
        if method == "exact":
            return dsc.netlsd_exact(g, grid)
        if method == "slq":
            return dsc.netlsd_slq(g, grid, cfg, threads=threads)
        if method == "taylor":
            return dsc.netlsd_taylor(g, grid)
        if method == "linear":
            return dsc.netlsd_linear(g, grid, k)
    elif kind == "vnge":
        if method == "exact":
            return dsc.vnge_exact(g)
        if method == "slq":
            return dsc.vnge_slq(g, cfg, threads=threads)
        if method == "taylor":
            return dsc.vnge_taylor(g)
        if method == "finger-hat":
            return dsc.vnge_finger(g, "hat")
        if method == "finger-bar":
            return dsc.vnge_finger(g, "bar")
    raise ValueError(f"unknown descriptor method {method!r} for kind {kind!r}")


def error_benchmark(
    graphs: Sequence[tuple[str, Graph]],
    kind: str,
    methods: Sequence[str],
    *,
    grid: dsc.TimeGrid | None = None,
    cfg: SlqConfig | None = None,
    k: int = 300,
    threads: int = 1,
) -> list[ErrorRow]:
    """Relative error of each method against the exact descriptor, per graph.

    Graphs too large for the dense reference produce rows marked skipped
    (rel_error NaN) rather than failing the whole run. Wall time covers the
    descriptor computation only.
    """
    grid = grid or dsc.TimeGrid()
    cfg = cfg or SlqConfig()
    rows: list[ErrorRow] = []
    for graph_id, g in graphs:
        try:
            reference = compute_descriptor(g, kind, "exact", grid, cfg, k, threads)
        except ValueError:
            for method in methods:
                rows.append(ErrorRow(graph_id, method, kind, float("nan"), 0.0, True))
            continue
        for method in methods:
            start = time.perf_counter()
            approx = compute_descriptor(g, kind, method, grid, cfg, k, threads)
            elapsed = time.perf_counter() - start
            distance = dsc.descriptor_distance(approx, reference)
            if distance == 0.0:
                rel = 0.0  # exact match stays well-defined even at zero norm
                skipped = False
            else:
                try:
                    rel = dsc.relative_error(approx, reference)
                    skipped = False
                except ValueError:
                    rel = float("nan")
                    skipped = True
            rows.append(
                ErrorRow(
                    graph_id=graph_id,
                    method=method,
                    kind=kind,
                    rel_error=rel,
                    seconds=elapsed,
                    skipped=skipped,
                )
            )
    return rows


def _feature_matrix(features: Sequence) -> np.ndarray:
    mat = []
    for f in features:
        if isinstance(f, dsc.HeatTraceDescriptor):
            mat.append(np.asarray(f.values, dtype=np.float64))
        elif isinstance(f, dsc.EntropyValue):
            mat.append(np.array([f.value]))
        else:
            mat.append(np.atleast_1d(np.asarray(f, dtype=np.float64)))
    shapes = {m.shape for m in mat}
    if len(shapes) != 1:
        raise ValueError(f"features have mixed shapes: {sorted(shapes)}")
    return np.vstack(mat)


def knn_accuracy(
    features: Sequence,
    labels: Sequence,
    train_frac: float = 0.8,
    repeats: int = 1000,
    seed: int = 0,
) -> ClassificationResult:
    """1-nearest-neighbor accuracy over repeated uniform train/test splits.

    Each test item takes the label of its Euclidean-nearest training item;
    exact distance ties go to the lowest original training index. Splits are
    plain uniform permutations (not stratified), deterministic per seed.
    """
    x = _feature_matrix(features)
    y = np.asarray(labels)
    n = x.shape[0]
    if y.shape[0] != n:
        raise ValueError(f"{n} features but {y.shape[0]} labels")
    classes, counts = np.unique(y, return_counts=True)
    if classes.size < 2:
        raise ValueError("need at least 2 classes")
    if counts.min() < 2:
        raise ValueError("every class needs at least 2 members")
    n_train = int(round(train_frac * n))
    if not 1 <= n_train <= n - 1:
        raise ValueError(f"train_frac {train_frac} leaves an empty split for n={n}")

    # Pairwise squared distances once; splits only re-index them.
    sq = np.sum(x * x, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)

    rng = np.random.default_rng(seed)
    accuracies = np.empty(repeats)
    for r in range(repeats):
        perm = rng.permutation(n)
        train = np.sort(perm[:n_train])
        test = perm[n_train:]
        # argmin picks the first minimum; train is sorted, so ties resolve
        # to the lowest original index.
        nearest = train[np.argmin(d2[np.ix_(test, train)], axis=1)]
        accuracies[r] = float(np.mean(y[nearest] == y[test]))
    return ClassificationResult(
        mean_accuracy=float(accuracies.mean()),
        std=float(accuracies.std()),
        repeats=repeats,
        train_frac=train_frac,
    )


def snapshot_distance_series(
    series: SnapshotSeries,
    kind: str,
    method: str,
    *,
    grid: dsc.TimeGrid | None = None,
    cfg: SlqConfig | None = None,
    k: int = 300,
    threads: int = 1,
) -> list[SnapshotRow]:
    """Descriptor distance of every snapshot to snapshot 0, with cumulative
    edge churn. ``normalized_distance`` rescales by the series maximum for
    plotting; the raw distance is what lands in CSV output."""
    if len(series) == 0:
        raise ValueError("empty snapshot series")
    grid = grid or dsc.TimeGrid()
    cfg = cfg or SlqConfig()
    base = compute_descriptor(series.snapshots[0], kind, method, grid, cfg, k, threads)
    distances = [0.0]
    for g in series.snapshots[1:]:
        desc = compute_descriptor(g, kind, method, grid, cfg, k, threads)
        distances.append(dsc.descriptor_distance(desc, base))
    max_d = max(distances)
    rows = []
    for i, dist in enumerate(distances):
        rows.append(
            SnapshotRow(
                index=i,
                distance=dist,
                added=series.added[i],
                removed=series.removed[i],
                normalized_distance=dist / max_d if max_d > 0 else 0.0,
            )
        )
    return rows


def write_error_csv(rows: Sequence[ErrorRow], stream: IO[str]) -> None:
    stream.write("graph,method,kind,rel_error,seconds\n")
    for row in rows:
        stream.write(
            f"{row.graph_id},{row.method},{row.kind},{row.rel_error!r},{row.seconds!r}\n"
        )


def write_classification_csv(
    dataset: str, kind: str, method: str, result: ClassificationResult, stream: IO[str]
) -> None:
    stream.write("dataset,kind,method,mean_acc,std,repeats\n")
    stream.write(
        f"{dataset},{kind},{method},{result.mean_accuracy!r},{result.std!r},{result.repeats}\n"
    )


def write_snapshot_csv(rows: Sequence[SnapshotRow], stream: IO[str]) -> None:
    stream.write("index,distance,added,removed\n")
    for row in rows:
        stream.write(f"{row.index},{row.distance!r},{row.added},{row.removed}\n")
