"""Implicit linear operators for graph matrices.

Three symmetric operators are exposed without materializing anything dense:
the Laplacian ``D - A``, the normalized Laplacian ``I - D^{-1/2} A D^{-1/2}``
(isolated vertices contribute a zero row and column, so their eigenvalue
is 0), and the trace-one density matrix ``L / tr(L)``. Matvecs cost one pass
over the edges; traces and squared traces come from closed-form identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .graphs import Graph

__all__ = [
    "OperatorKind",
    "LinearOperator",
    "degrees",
    "make_operator",
    "trace",
    "trace_squared",
]


class OperatorKind(Enum):
    LAPLACIAN = "laplacian"
    NORMALIZED_LAPLACIAN = "normalized_laplacian"
    DENSITY = "density"


@dataclass(frozen=True)
class LinearOperator:
    """Symmetric operator given by its dimension and a matvec closure.

    ``interval`` bounds the spectrum: (0, 2*max_degree) for the Laplacian,
    (0, 2) for the normalized Laplacian, (0, 1) for the density matrix.
    ``apply`` holds no mutable state and is safe to call concurrently.
    """

    dim: int
    apply: Callable[[np.ndarray], np.ndarray]
    kind: OperatorKind | None
    interval: tuple[float, float]


def _adjacency(g: Graph) -> sp.csr_matrix:
    return sp.csr_matrix(
        (g.weights, g.col_indices, g.row_offsets), shape=(g.n, g.n), copy=False
    )


def degrees(g: Graph) -> np.ndarray:
    """Weighted degree vector: entry i is the sum of weights incident to i."""
    if g.m == 0:
        return np.zeros(g.n)
    return _adjacency(g) @ np.ones(g.n)


def make_operator(g: Graph, kind: OperatorKind) -> LinearOperator:
    """Build the implicit operator of the requested kind for g.

    Raises
    ------
    ValueError
        If the density matrix is requested for an edgeless graph
        (tr(L) = 0 leaves it undefined).
    """
    adj = _adjacency(g)
    d = degrees(g)
    if kind is OperatorKind.LAPLACIAN:
        def apply(x: np.ndarray) -> np.ndarray:
            return d * x - adj @ x

        hi = 2.0 * float(d.max(initial=0.0))
        return LinearOperator(dim=g.n, apply=apply, kind=kind, interval=(0.0, hi))
    if kind is OperatorKind.NORMALIZED_LAPLACIAN:
        pos = d > 0
        nonisolated = pos.astype(np.float64)
        dinv_sqrt = np.zeros(g.n)
        dinv_sqrt[pos] = 1.0 / np.sqrt(d[pos])

        def apply(x: np.ndarray) -> np.ndarray:
            return nonisolated * x - dinv_sqrt * (adj @ (dinv_sqrt * x))

        return LinearOperator(dim=g.n, apply=apply, kind=kind, interval=(0.0, 2.0))
    if kind is OperatorKind.DENSITY:
        tr_l = float(d.sum())
        if g.m == 0 or tr_l <= 0:
            raise ValueError("density matrix undefined for a graph without edges")
        scale = 1.0 / tr_l

        def apply(x: np.ndarray) -> np.ndarray:
            return scale * (d * x - adj @ x)

        return LinearOperator(dim=g.n, apply=apply, kind=kind, interval=(0.0, 1.0))
    raise ValueError(f"unknown operator kind: {kind!r}")


def trace(g: Graph, kind: OperatorKind) -> float:
    """Exact operator trace from degree identities (no matvecs)."""
    d = degrees(g)
    if kind is OperatorKind.LAPLACIAN:
        return float(d.sum())
    if kind is OperatorKind.NORMALIZED_LAPLACIAN:
        return float(np.count_nonzero(d > 0))
    if kind is OperatorKind.DENSITY:
        if g.m == 0:
            raise ValueError("density matrix undefined for a graph without edges")
        return 1.0
    raise ValueError(f"unknown operator kind: {kind!r}")


def trace_squared(g: Graph, kind: OperatorKind) -> float:
    """Exact trace of the squared operator in one edge pass.

    Uses tr(M^2) = sum of squared entries for symmetric M: the diagonal
    contributes degree terms, the off-diagonal one term per stored entry.
    np.sum is pairwise, which keeps huge accumulations accurate.
    """
    d = degrees(g)
    if kind is OperatorKind.LAPLACIAN:
        return float(np.sum(d * d) + np.sum(g.weights * g.weights))
    if kind is OperatorKind.NORMALIZED_LAPLACIAN:
        diag = float(np.count_nonzero(d > 0))
        if g.m == 0:
            return diag
        src = np.repeat(np.arange(g.n), np.diff(g.row_offsets))
        denom = d[src] * d[g.col_indices]
        return diag + float(np.sum(g.weights * g.weights / denom))
    if kind is OperatorKind.DENSITY:
        tr_l = trace(g, OperatorKind.LAPLACIAN)
        if g.m == 0 or tr_l <= 0:
            raise ValueError("density matrix undefined for a graph without edges")
        return trace_squared(g, OperatorKind.LAPLACIAN) / (tr_l * tr_l)
    raise ValueError(f"unknown operator kind: {kind!r}")
