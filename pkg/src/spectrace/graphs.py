"""Graph ingestion and generation.

Graphs are immutable, undirected, simple (no self-loops, no parallel edges)
and stored in compressed sparse row form. The edge-list text format is one
edge per line, ``src dst [weight]``, whitespace separated by default, with
``#`` comment lines. Directed input is symmetrized, self-loops are dropped,
and duplicate edges collapse to the maximum weight seen. Temporal event
streams use one event per line, ``timestamp op src dst`` with
``op in {add, del}``; snapshots are cumulative per time bucket and treat
edges as unweighted.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

import numpy as np

from .errors import EdgeListError

__all__ = [
    "Graph",
    "SnapshotSeries",
    "parse_edge_list",
    "erdos_renyi",
    "load_snapshots",
    "write_edge_list",
]


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph in CSR form.

    Attributes
    ----------
    n : int
        Vertex count.
    row_offsets : ndarray, shape (n+1,), int64
        CSR row pointers; ``row_offsets[n] == 2*m`` for simple graphs.
    col_indices : ndarray, int64
        Neighbor indices, sorted within each row.
    weights : ndarray, float64
        Strictly positive edge weights (1.0 everywhere if unweighted).
    m : int
        Number of undirected edges.
    """

    n: int
    row_offsets: np.ndarray
    col_indices: np.ndarray
    weights: np.ndarray
    m: int

    def __post_init__(self):
        for arr in (self.row_offsets, self.col_indices, self.weights):
            arr.flags.writeable = False

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.m == other.m
            and np.array_equal(self.row_offsets, other.row_offsets)
            and np.array_equal(self.col_indices, other.col_indices)
            and np.array_equal(self.weights, other.weights)
        )

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Yield each undirected edge once as (u, v, w) with u < v."""
        for u in range(self.n):
            for k in range(self.row_offsets[u], self.row_offsets[u + 1]):
                v = int(self.col_indices[k])
                if u < v:
                    yield u, v, float(self.weights[k])

    def content_hash(self) -> str:
        """Hex digest identifying the canonical graph content."""
        h = hashlib.sha256()
        h.update(np.int64(self.n).tobytes())
        h.update(self.row_offsets.tobytes())
        h.update(self.col_indices.tobytes())
        h.update(self.weights.tobytes())
        return h.hexdigest()


@dataclass(frozen=True)
class SnapshotSeries:
    """Cumulative graph snapshots of a timestamped edge-event stream.

    ``added[i]`` / ``removed[i]`` count the effective edge insertions and
    deletions applied up to and including bucket i. ``ignored_deletes``
    counts delete events that targeted an absent edge.
    """

    snapshots: list[Graph]
    timestamps: list[float]
    added: list[int]
    removed: list[int]
    ignored_deletes: int = 0

    def __len__(self) -> int:
        return len(self.snapshots)


def _build_csr(n: int, pairs: dict[tuple[int, int], float]) -> Graph:
    """Assemble a canonical Graph from {(u, v) with u < v: weight}."""
    m = len(pairs)
    if m == 0:
        return Graph(
            n=n,
            row_offsets=np.zeros(n + 1, dtype=np.int64),
            col_indices=np.empty(0, dtype=np.int64),
            weights=np.empty(0, dtype=np.float64),
            m=0,
        )
    us = np.empty(2 * m, dtype=np.int64)
    vs = np.empty(2 * m, dtype=np.int64)
    ws = np.empty(2 * m, dtype=np.float64)
    for k, ((u, v), w) in enumerate(pairs.items()):
        us[2 * k], vs[2 * k], ws[2 * k] = u, v, w
        us[2 * k + 1], vs[2 * k + 1], ws[2 * k + 1] = v, u, w
    order = np.lexsort((vs, us))
    us, vs, ws = us[order], vs[order], ws[order]
    row_offsets = np.zeros(n + 1, dtype=np.int64)
    np.add.at(row_offsets, us + 1, 1)
    np.cumsum(row_offsets, out=row_offsets)
    return Graph(n=n, row_offsets=row_offsets, col_indices=vs, weights=ws, m=m)


def _iter_lines(stream: IO[str] | str | Iterable[str]) -> Iterator[str]:
    if isinstance(stream, str):
        yield from stream.splitlines()
    else:
        for line in stream:
            yield line.rstrip("\n")


def parse_edge_list(
    stream: IO[str] | str | Iterable[str],
    *,
    separator: str | None = None,
    comment_prefix: str = "#",
    weighted: bool = False,
) -> Graph:
    """Parse edge-list text into a canonical Graph.

    Parameters
    ----------
    stream
        Text lines: an open file, a string, or any iterable of lines.
    separator
        Field separator; None splits on any whitespace.
    comment_prefix
        Lines starting with this prefix are skipped.
    weighted
        Expect a third positive-weight field per line.

    Raises
    ------
    EdgeListError
        On malformed lines (with line number), nonpositive weights, or
        empty input.
    """
    pairs: dict[tuple[int, int], float] = {}
    max_id = -1
    for lineno, raw in enumerate(_iter_lines(stream), start=1):
        line = raw.strip()
        if not line or line.startswith(comment_prefix):
            continue
        fields = line.split(separator)
        expected = 3 if weighted else 2
        if len(fields) != expected:
            raise EdgeListError(
                f"expected {expected} fields, got {len(fields)}: {line!r}", lineno
            )
        try:
            u = int(fields[0])
            v = int(fields[1])
        except ValueError:
            raise EdgeListError(f"vertex ids must be integers: {line!r}", lineno)
        if u < 0 or v < 0:
            raise EdgeListError(f"vertex ids must be nonnegative: {line!r}", lineno)
        if weighted:
            try:
                w = float(fields[2])
            except ValueError:
                raise EdgeListError(f"weight must be a number: {line!r}", lineno)
            if not math.isfinite(w) or w <= 0:
                raise EdgeListError(f"weight must be strictly positive: {line!r}", lineno)
        else:
            w = 1.0
        max_id = max(max_id, u, v)
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        prev = pairs.get(key)
        if prev is None or w > prev:
            pairs[key] = w
    if max_id < 0:
        raise EdgeListError("empty input: no edges or vertices found")
    return _build_csr(max_id + 1, pairs)


def write_edge_list(g: Graph, stream: IO[str], *, weighted: bool = False) -> None:
    """Write a Graph back to edge-list text (one undirected edge per line)."""
    for u, v, w in g.edges():
        if weighted:
            stream.write(f"{u} {v} {w!r}\n")
        else:
            stream.write(f"{u} {v}\n")


def _decode_pair_keys(keys: np.ndarray, n: int) -> dict[tuple[int, int], float]:
    us, vs = np.divmod(keys, n)
    return {(int(u), int(v)): 1.0 for u, v in zip(us, vs)}


def erdos_renyi(n: int, avg_degree: float, seed: int) -> Graph:
    """Sample G(n, p) with p = avg_degree / (n - 1), deterministically per seed.

    Small pair counts use a direct Bernoulli mask over all pairs. Large ones
    draw the edge count from the exact binomial and then a uniform set of
    distinct pairs, which yields the same distribution while touching only
    O(m) memory.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n == 1:
        if avg_degree != 0:
            raise ValueError("avg_degree must be 0 for a single-vertex graph")
        return _build_csr(1, {})
    if not 0 <= avg_degree <= n - 1:
        raise ValueError(f"avg_degree must lie in [0, {n - 1}], got {avg_degree}")
    p = avg_degree / (n - 1)
    rng = np.random.default_rng(seed)
    n_pairs = n * (n - 1) // 2
    if n_pairs <= 1 << 23:
        iu, ju = np.triu_indices(n, k=1)
        mask = rng.random(n_pairs) < p
        pairs = {(int(u), int(v)): 1.0 for u, v in zip(iu[mask], ju[mask])}
        return _build_csr(n, pairs)
    m_target = int(rng.binomial(n_pairs, p))
    chosen: list[np.ndarray] = []
    seen = np.empty(0, dtype=np.int64)
    count = 0
    while count < m_target:
        batch = max(2 * (m_target - count), 1024)
        u = rng.integers(0, n, size=batch, dtype=np.int64)
        v = rng.integers(0, n, size=batch, dtype=np.int64)
        ok = u != v
        u, v = u[ok], v[ok]
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        keys = lo * n + hi
        # Keep first occurrences in draw order so the accepted subset stays
        # uniform among distinct pairs.
        _, first = np.unique(keys, return_index=True)
        keys = keys[np.sort(first)]
        if seen.size:
            keys = keys[~np.isin(keys, seen)]
        take = keys[: m_target - count]
        chosen.append(take)
        seen = np.concatenate([seen, take])
        count += take.size
    all_keys = np.concatenate(chosen) if chosen else np.empty(0, dtype=np.int64)
    return _build_csr(n, _decode_pair_keys(all_keys, n))


def load_snapshots(
    stream: IO[str] | str | Iterable[str],
    granularity: float,
    *,
    comment_prefix: str = "#",
) -> SnapshotSeries:
    """Bucket a sorted "timestamp op src dst" event stream into cumulative snapshots.

    One snapshot per granularity-sized time bucket between the first and last
    event (buckets with no events repeat the previous graph). Deleting an
    absent edge is ignored and counted; self-loop events are skipped.

    Raises
    ------
    EdgeListError
        On malformed lines, unknown op tokens, or unsorted timestamps.
    """
    if granularity <= 0:
        raise ValueError(f"granularity must be positive, got {granularity}")
    events: list[tuple[float, str, int, int]] = []
    prev_t = -math.inf
    for lineno, raw in enumerate(_iter_lines(stream), start=1):
        line = raw.strip()
        if not line or line.startswith(comment_prefix):
            continue
        fields = line.split()
        if len(fields) != 4:
            raise EdgeListError(f"expected 4 fields, got {len(fields)}: {line!r}", lineno)
        try:
            t = float(fields[0])
            u = int(fields[2])
            v = int(fields[3])
        except ValueError:
            raise EdgeListError(f"bad timestamp or vertex id: {line!r}", lineno)
        op = fields[1]
        if op not in ("add", "del"):
            raise EdgeListError(f"unknown op {op!r} (expected add/del)", lineno)
        if t < prev_t:
            raise EdgeListError(f"timestamps must be nondecreasing: {line!r}", lineno)
        if u < 0 or v < 0:
            raise EdgeListError(f"vertex ids must be nonnegative: {line!r}", lineno)
        prev_t = t
        events.append((t, op, u, v))
    if not events:
        raise EdgeListError("empty input: no events found")

    first_bucket = math.floor(events[0][0] / granularity)
    last_bucket = math.floor(events[-1][0] / granularity)
    n = max(max(u, v) for _, _, u, v in events) + 1

    live: set[tuple[int, int]] = set()
    added = removed = ignored = 0
    snapshots: list[Graph] = []
    timestamps: list[float] = []
    added_series: list[int] = []
    removed_series: list[int] = []
    idx = 0
    for bucket in range(first_bucket, last_bucket + 1):
        boundary = (bucket + 1) * granularity
        while idx < len(events) and math.floor(events[idx][0] / granularity) <= bucket:
            _, op, u, v = events[idx]
            idx += 1
            if u == v:
                continue
            key = (u, v) if u < v else (v, u)
            if op == "add":
                if key not in live:
                    live.add(key)
                    added += 1
            else:
                if key in live:
                    live.remove(key)
                    removed += 1
                else:
                    ignored += 1
        snapshots.append(_build_csr(n, {key: 1.0 for key in live}))
        timestamps.append(boundary)
        added_series.append(added)
        removed_series.append(removed)
    return SnapshotSeries(
        snapshots=snapshots,
        timestamps=timestamps,
        added=added_series,
        removed=removed_series,
        ignored_deletes=ignored,
    )
