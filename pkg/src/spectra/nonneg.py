"""Nonnegative-matrix structure: sign checks, irreducibility, Perron data and
the diagonal similarity that gives constant row sums."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import connected_components

from .exceptions import NonConvergence, NotIrreducible, NotNonnegative
from .matcore import eigenvalues
from .validation import check_matrix, matrix_scale

__all__ = [
    "PerronData",
    "is_nonnegative",
    "is_irreducible",
    "perron",
    "to_constant_row_sums",
    "row_sum_spread",
    "random_irreducible",
]


@dataclass(frozen=True)
class PerronData:
    """Perron root ``rho`` and right Perron vector ``x`` (positive, ``sum(x) == 1``)."""

    rho: float
    x: np.ndarray
    residual: float


def is_nonnegative(A, tol: float = 0.0) -> tuple[bool, float]:
    """Return ``(min(A) >= -tol, min(A))``."""
    A = check_matrix(A, square=False)
    margin = float(A.min())
    return margin >= -tol, margin


def is_irreducible(A, zero_tol: float = 0.0) -> bool:
    """True iff the digraph with an edge ``i -> j`` whenever ``A[i, j] > zero_tol``
    is strongly connected.

    Raises
    ------
    NotNonnegative
        If some entry is below ``-zero_tol``.
    """
    A = check_matrix(A)
    ok, margin = is_nonnegative(A, zero_tol)
    if not ok:
        raise NotNonnegative(f"matrix has a negative entry {margin:.3e}")
    if A.shape[0] == 1:
        return True
    ncomp, _ = connected_components(A > zero_tol, directed=True, connection="strong")
    return ncomp == 1


def _power_perron(A: np.ndarray, tol: float, max_iter: int):
    # A + I is primitive when A is irreducible, so the power method converges
    # even for periodic A; the rate is governed by the gap of A + I.
    n = A.shape[0]
    shifted = A + np.eye(n)
    x = np.full(n, 1.0 / n)
    rho = 0.0
    for _ in range(max_iter):
        y = shifted @ x
        s = y.sum()
        x_new = y / s
        rho = s - 1.0
        if np.linalg.norm(A @ x_new - rho * x_new) <= tol:
            return rho, x_new
        x = x_new
    return None


def _eig_perron(A: np.ndarray):
    n = A.shape[0]
    w = eigenvalues(A)
    real = w[np.abs(w.imag) <= 1e-9 * matrix_scale(A)].real
    rho = float(real.max()) if real.size else float(np.abs(w).max())
    # null vector of A - rho I by SVD; its sign is fixed by the Perron theory
    _, _, vh = np.linalg.svd(A - rho * np.eye(n))
    x = vh[-1]
    x = np.abs(x) if x.sum() >= 0 else np.abs(-x)
    return rho, x / x.sum()


def _polish(A: np.ndarray, rho: float, x: np.ndarray, steps: int = 2):
    # Inverse iteration at the converged shift: the diagonal similarity divides
    # the residual by x_i, so small Perron components need a residual at roundoff level.
    n = A.shape[0]
    shift = rho + 1e-12 * matrix_scale(A)
    for _ in range(steps):
        try:
            y = np.linalg.solve(A - shift * np.eye(n), x)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(y)) or y.sum() == 0:
            break
        x = y / y.sum()
    rho = float((A @ x).sum() / x.sum())
    return rho, x


def perron(A, *, max_iter: int = 5000) -> PerronData:
    """Perron root and positive right eigenvector of an irreducible nonnegative matrix.

    Power iteration is tried first; if it has not reached the residual target
    ``1e-10 * (1 + ||A||)`` within ``max_iter`` steps (small spectral gap), the
    dense eigensolver is used instead. Two inverse-iteration steps then polish
    the vector to roundoff accuracy.

    Raises
    ------
    NotIrreducible
        If ``A`` is reducible (the Perron vector need not be positive).
    NonConvergence
        If neither route yields a positive eigenvector.
    """
    A = check_matrix(A)
    if not is_irreducible(A):
        raise NotIrreducible("matrix is reducible")
    tol = 1e-10 * matrix_scale(A)
    found = _power_perron(A, tol, max_iter)
    rho, x = found if found is not None else _eig_perron(A)
    rho, x = _polish(A, rho, x)
    residual = float(np.linalg.norm(A @ x - rho * x))
    if not np.all(x > 0) or residual > tol:
        rho, x = _eig_perron(A)
        residual = float(np.linalg.norm(A @ x - rho * x))
        if not np.all(x > 0) or residual > tol:
            raise NonConvergence(f"Perron vector not found (residual {residual:.3e})")
    return PerronData(rho=float(rho), x=x, residual=residual)


def to_constant_row_sums(A, perron_data: PerronData | None = None) -> np.ndarray:
    """Diagonal similarity ``D^-1 A D`` with ``D = diag(x)``, ``x`` the Perron vector.

    The result is nonnegative, has every row sum equal to the Perron root and
    the same spectrum as ``A``.

    Raises
    ------
    NotIrreducible
        If ``A`` is reducible.
    """
    A = check_matrix(A)
    pd = perron(A) if perron_data is None else perron_data
    x = pd.x
    return A * x[None, :] / x[:, None]


def row_sum_spread(B) -> float:
    """``max(row sums) - min(row sums)``."""
    s = check_matrix(B).sum(axis=1)
    return float(s.max() - s.min())


def random_irreducible(n: int, rng: np.random.Generator, density: float | None = None) -> np.ndarray:
    """Random irreducible nonnegative ``n x n`` matrix.

    A random Hamiltonian cycle with positive weights guarantees irreducibility;
    on top of it each remaining entry is positive with probability
    ``density`` (drawn uniformly from [0.15, 1] when not given), so calls
    mix sparse and dense patterns.
    """
    if density is None:
        density = rng.uniform(0.15, 1.0)
    A = rng.uniform(0.0, 1.0, size=(n, n)) * (rng.random(size=(n, n)) < density)
    cycle = rng.permutation(n)
    A[cycle, np.roll(cycle, -1)] += rng.uniform(0.1, 1.0, size=n)
    return A
