"""Lanczos tridiagonalization, Gauss quadrature rules, and spectral oracles.

The s-step Lanczos recurrence reduces a symmetric operator to a tridiagonal
matrix whose eigenvalues (Ritz values) and squared first eigenvector
components form a Gauss quadrature rule for the spectral measure of the
start vector. Full reorthogonalization is the default for small step counts;
a vanishing residual (breakdown) shortens the rule, which is then exact on
the Krylov-invariant subspace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, TridiagonalEigenError
from .graphs import Graph
from .operators import LinearOperator, OperatorKind, degrees

__all__ = [
    "Tridiagonal",
    "QuadratureRule",
    "lanczos_tridiagonalize",
    "quadrature_rule",
    "extremal_eigenvalues",
    "dense_spectrum",
    "lanczos_error_bound",
    "DENSE_SPECTRUM_CAP",
]

DENSE_SPECTRUM_CAP = 20_000

_BREAKDOWN_REL_TOL = 1e-12
_FULL_REORTH_MAX_STEPS = 100


@dataclass(frozen=True)
class Tridiagonal:
    """Symmetric tridiagonal matrix: diagonal alpha, off-diagonal beta.

    ``steps`` is the achieved step count; it can be smaller than requested
    when the iteration broke down early.
    """

    alpha: np.ndarray
    beta: np.ndarray
    steps: int

    def to_dense(self) -> np.ndarray:
        t = np.diag(self.alpha)
        if self.beta.size:
            t += np.diag(self.beta, 1) + np.diag(self.beta, -1)
        return t


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule: ascending Ritz nodes with nonnegative weights summing to 1."""

    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


def _reorthogonalize(w: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """One classical Gram-Schmidt pass, repeated once if cancellation was severe."""
    norm_before = np.linalg.norm(w)
    w = w - basis.T @ (basis @ w)
    if np.linalg.norm(w) < 0.5 * norm_before:
        w = w - basis.T @ (basis @ w)
    return w


def lanczos_tridiagonalize(
    op: LinearOperator,
    q0: np.ndarray,
    s: int,
    reorth: bool | None = None,
    *,
    return_basis: bool = False,
) -> Tridiagonal | tuple[Tridiagonal, np.ndarray]:
    """Run up to s Lanczos steps on op from the unit start vector q0.

    ``reorth=None`` enables full reorthogonalization whenever s <= 100.
    Requested steps beyond op.dim are clamped (the recurrence cannot produce
    more than dim orthonormal vectors). The iteration stops early when the
    residual norm falls to 1e-12 times the spectral radius bound.

    Returns the Tridiagonal, plus the (steps x dim) basis matrix when
    ``return_basis`` is set.
    """
    if s < 1:
        raise ValueError(f"step budget must be >= 1, got {s}")
    n = op.dim
    q0 = np.asarray(q0, dtype=np.float64)
    if q0.shape != (n,):
        raise ValueError(f"start vector has shape {q0.shape}, expected ({n},)")
    if abs(np.linalg.norm(q0) - 1.0) > 1e-12:
        raise ValueError("start vector must have unit norm")
    s = min(s, n)
    if reorth is None:
        reorth = s <= _FULL_REORTH_MAX_STEPS

    radius = op.interval[1]
    breakdown_tol = _BREAKDOWN_REL_TOL * radius

    alphas = np.empty(s)
    betas = np.empty(max(s - 1, 0))
    basis = np.empty((s, n)) if (reorth or return_basis) else None
    if basis is not None:
        basis[0] = q0

    q_prev = np.zeros(n)
    q = q0
    beta_prev = 0.0
    steps = 0
    for i in range(s):
        w = op.apply(q)
        alpha = float(np.dot(q, w))
        alphas[i] = alpha
        steps = i + 1
        if i == s - 1:
            break
        w = w - alpha * q - beta_prev * q_prev
        if reorth:
            w = _reorthogonalize(w, basis[: i + 1])
        beta = float(np.linalg.norm(w))
        if beta <= breakdown_tol:
            break
        betas[i] = beta
        q_prev, q, beta_prev = q, w / beta, beta
        if basis is not None:
            basis[i + 1] = q

    tri = Tridiagonal(
        alpha=alphas[:steps].copy(), beta=betas[: steps - 1].copy(), steps=steps
    )
    if return_basis:
        return tri, basis[:steps]
    return tri


def quadrature_rule(tri: Tridiagonal) -> QuadratureRule:
    """Gauss rule from a tridiagonal: eigenvalues as nodes, squared first
    eigenvector components as weights.

    Raises
    ------
    TridiagonalEigenError
        If the symmetric tridiagonal eigensolver fails to converge.
    """
    try:
        vals, vecs = scipy.linalg.eigh_tridiagonal(tri.alpha, tri.beta)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise TridiagonalEigenError(
            f"tridiagonal eigensolver failed: {exc}", alpha=tri.alpha, beta=tri.beta
        ) from exc
    return QuadratureRule(nodes=vals, weights=vecs[0, :] ** 2)


def _select_extreme(pools: list[np.ndarray], k: int, largest: bool) -> np.ndarray | None:
    if not pools:
        return None
    merged = np.sort(np.concatenate(pools))
    if merged.size < k:
        return None
    return merged[-k:] if largest else merged[:k]


def _ritz_values(alphas: list[float], betas: list[float]) -> np.ndarray:
    return scipy.linalg.eigvalsh_tridiagonal(
        np.asarray(alphas), np.asarray(betas[: len(alphas) - 1])
    )


def extremal_eigenvalues(
    op: LinearOperator,
    k: int,
    end: str,
    *,
    tol: float = 1e-8,
    max_steps: int | None = None,
    check_every: int = 10,
) -> np.ndarray:
    """k eigenvalues from one end of the spectrum, ascending.

    Expands a fully reorthogonalized Lanczos run until the k requested Ritz
    values change by less than ``tol`` between checks. A breakdown yields the
    exact eigenvalues of the spanned invariant subspace; the iteration then
    restarts with a fresh start vector deflated against everything retained,
    which recovers repeated eigenvalues one copy per sweep. Start vectors
    come from a fixed seed sequence, so results are deterministic.

    Raises
    ------
    ConvergenceError
        If the step cap (default 10k + 100) is exhausted first; carries the
        best estimates found.
    """
    if end not in ("smallest", "largest"):
        raise ValueError(f"end must be 'smallest' or 'largest', got {end!r}")
    n = op.dim
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    if max_steps is None:
        max_steps = 10 * k + 100
    largest = end == "largest"
    breakdown_tol = _BREAKDOWN_REL_TOL * op.interval[1]
    rng = np.random.default_rng(np.random.SeedSequence(entropy=0x5EC7, spawn_key=(n, k)))

    basis = np.empty((min(max_steps + 1, n), n))
    n_basis = 0

    def push(vec: np.ndarray) -> None:
        nonlocal basis, n_basis
        if n_basis == basis.shape[0]:
            grown = np.empty((min(2 * basis.shape[0], n), n))
            grown[:n_basis] = basis
            basis = grown
        basis[n_basis] = vec
        n_basis += 1

    exact_pools: list[np.ndarray] = []
    prev_selected: np.ndarray | None = None
    partial_ritz: np.ndarray | None = None
    steps = 0

    while steps < max_steps and n_basis < n:
        q = rng.standard_normal(n)
        if n_basis:
            q = _reorthogonalize(q, basis[:n_basis])
        norm = float(np.linalg.norm(q))
        if norm < 1e-8:
            break
        q = q / norm
        push(q)

        alphas: list[float] = []
        betas: list[float] = []
        q_prev = np.zeros(n)
        beta_prev = 0.0
        broke_down = False
        while True:
            w = op.apply(q)
            alphas.append(float(np.dot(q, w)))
            steps += 1
            w = w - alphas[-1] * q - beta_prev * q_prev
            w = _reorthogonalize(w, basis[:n_basis])
            beta = float(np.linalg.norm(w))
            if beta <= breakdown_tol or n_basis == n:
                broke_down = True
                break
            if steps >= max_steps:
                break
            betas.append(beta)
            q_prev, q, beta_prev = q, w / beta, beta
            push(q)

            if len(alphas) >= k and len(alphas) % check_every == 0:
                selected = _select_extreme(
                    exact_pools + [_ritz_values(alphas, betas)], k, largest
                )
                if selected is not None:
                    if prev_selected is not None and np.all(
                        np.abs(selected - prev_selected) < tol
                    ):
                        return np.sort(selected)
                    prev_selected = selected

        run_vals = _ritz_values(alphas, betas)
        if not broke_down:
            partial_ritz = run_vals
            break
        # Invariant subspace swept: these Ritz values are exact eigenvalues.
        exact_pools.append(run_vals)
        selected = _select_extreme(exact_pools, k, largest)
        if selected is not None:
            if n_basis >= n:
                return np.sort(selected)
            if prev_selected is not None and np.all(
                np.abs(selected - prev_selected) < tol
            ):
                return np.sort(selected)
            prev_selected = selected

    pools = exact_pools + ([partial_ritz] if partial_ritz is not None else [])
    merged = np.sort(np.concatenate(pools)) if pools else np.empty(0)
    best = merged[-min(k, merged.size):] if largest else merged[: min(k, merged.size)]
    raise ConvergenceError(
        f"extremal eigenvalues did not stabilize within {max_steps} steps",
        best_estimates=np.sort(best),
    )


def dense_spectrum(
    g: Graph, kind: OperatorKind, *, cap: int = DENSE_SPECTRUM_CAP
) -> np.ndarray:
    """All eigenvalues of the densified operator, ascending.

    This is the exact reference for every approximation in the package; it
    refuses graphs above ``cap`` vertices.
    """
    if g.n > cap:
        raise ValueError(f"dense spectrum refused: n={g.n} exceeds cap {cap}")
    d = degrees(g)
    adj = np.zeros((g.n, g.n))
    src = np.repeat(np.arange(g.n), np.diff(g.row_offsets))
    adj[src, g.col_indices] = g.weights
    if kind is OperatorKind.LAPLACIAN:
        mat = np.diag(d) - adj
    elif kind is OperatorKind.NORMALIZED_LAPLACIAN:
        pos = d > 0
        dinv_sqrt = np.zeros(g.n)
        dinv_sqrt[pos] = 1.0 / np.sqrt(d[pos])
        mat = np.diag(pos.astype(np.float64)) - dinv_sqrt[:, None] * adj * dinv_sqrt[None, :]
    elif kind is OperatorKind.DENSITY:
        tr_l = float(d.sum())
        if g.m == 0 or tr_l <= 0:
            raise ValueError("density matrix undefined for a graph without edges")
        mat = (np.diag(d) - adj) / tr_l
    else:
        raise ValueError(f"unknown operator kind: {kind!r}")
    return scipy.linalg.eigvalsh(mat)


def lanczos_error_bound(t: float, s: int) -> float:
    """Worst-case heat-trace quadrature error after s Lanczos steps at time t.

    Below s = sqrt(2t) no guarantee exists and +inf is returned. Both
    branches decrease in s.
    """
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    if s < math.sqrt(2.0 * t):
        return math.inf
    if s <= t:
        return 20.0 * math.exp(-(s * s) / (2.5 * t))
    return 40.0 / t * math.exp(-0.5 * t) * (0.5 * math.e * t / s) ** s
